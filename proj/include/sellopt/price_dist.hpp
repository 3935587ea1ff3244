#pragma once

// Law of the realized sale price S_t under the optimal policy.
//
// With y = min(x, mu(t)) and J the integral of 1/phi^2 from mu0:
//   G_t(x) = phi(mu_t) F0(x) / phi(mu0)                                  x < mu0
//   G_t(x) = phi(mu_t) [F0(x)/phi(mu0) + 1/phi(y) - 1/phi(mu0) - (1-F(x)) J(y)]  x >= mu0
// and E[S_t] = mu(t).

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "sellopt/dist_core.hpp"
#include "sellopt/io.hpp"
#include "sellopt/policy.hpp"

namespace sellopt {

/// Evaluation path: closed forms where available, or the all-numeric chain
/// (Psi table inversion, tabulated J, quadrature) used as a cross-check.
enum class Path { Auto, Numeric };

/// Three-piece sale price law at one marketing period t. Caches mu(t),
/// phi(mu(t)), phi(mu0) and J(mu(t)).
class PriceLaw {
 public:
  PriceLaw(const PolicyCurve& curve, const ResidualSpec& residual, double t, Path path = Path::Auto)
      : curve_(curve), residual_(residual), t_(t), numeric_(path == Path::Numeric) {
    if (!(t >= 0)) throw DomainError("t must be nonnegative");
    const double m0 = residual.mean();
    if (std::fabs(m0 - curve.mu0()) > 1e-9 * std::max(1.0, std::fabs(m0))) {
      throw DomainError("residual mean does not match the policy's mu0");
    }
    mu0_ = curve.mu0();
    phi0_ = curve.phi_mu0();
    mu_t_ = numeric_ ? curve.mu_numeric(t) : curve.mu(t);
    phi_t_ = numeric_ ? curve.offer().phi(mu_t_) : curve.phi_mu(t);
    j_t_ = j(mu_t_);
  }

  double t() const { return t_; }
  double mu_t() const { return mu_t_; }
  double mu0() const { return mu0_; }

  double cdf(double x) const {
    const double f0 = residual_.cdf(x);
    if (x < mu0_) return phi_t_ * f0 / phi0_;
    const OfferModel& F = curve_.offer();
    double inner;
    if (x < mu_t_) {
      inner = 1.0 / F.phi(x) - 1.0 / phi0_ - F.sf(x) * j(x);
    } else {
      inner = 1.0 / phi_t_ - 1.0 / phi0_ - F.sf(x) * j_t_;
    }
    return std::clamp(phi_t_ * (f0 / phi0_ + inner), 0.0, 1.0);
  }

  /// g_t(x) = phi(mu_t) [f0(x)/phi(mu0) + f(x) J(min(x, mu_t)) 1{x >= mu0}].
  double pdf(double x) const {
    const OfferModel& F = curve_.offer();
    if (!F.has_density()) throw NoDensity("offer distribution has point masses");
    if (!residual_.has_density()) throw NoDensity("residual distribution has no density");
    double v = residual_.pdf(x) / phi0_;
    if (x >= mu0_) {
      const double f = F.pdf(x);
      if (f > 0) v += f * (x < mu_t_ ? j(x) : j_t_);
    }
    return phi_t_ * v;
  }

  /// phi(mu_t) [Var0/phi(mu0) + 2 int_{mu0}^{mu_t} I(w)/phi(w)^2 dw].
  double var() const {
    curve_.offer().require_second_moment();
    const double var0 = residual_.variance();
    if (!std::isfinite(var0)) throw SecondMomentInfinite("residual variance is infinite");
    double acc = 0.0;
    if (mu_t_ > mu0_) {
      const OfferModel& F = curve_.offer();
      auto integrand = [&](double w) {
        const double p = F.phi(w);
        return F.phi_tail_integral(w) / (p * p);
      };
      numerics::QuadOptions opt;
      opt.rel_tol = 1e-11;
      acc = numerics::integrate_partition(integrand, curve_.cuts(mu0_, mu_t_), opt).value;
    }
    return phi_t_ * (var0 / phi0_ + 2.0 * acc);
  }

 private:
  double j(double x) const { return numeric_ ? curve_.j_numeric(x) : curve_.j_integral(x); }

  const PolicyCurve& curve_;
  const ResidualSpec& residual_;
  double t_;
  bool numeric_;
  double mu0_, phi0_, mu_t_, phi_t_, j_t_;
};

namespace closed {

inline bool same_as_offer(const PolicyCurve& curve, const ResidualSpec& residual) {
  return residual.kind() == ResidualKind::SameAsOffer && curve.closed_form() &&
         curve.method() != PolicyMethod::ClosedFormUniformLowSalvage &&
         std::fabs(residual.mean() - curve.mu0()) <= 1e-12 * std::max(1.0, curve.mu0());
}

/// Uniform(a, b) offers and salvage, mu0 = (a + b)/2.
inline double uniform_density(double a, double b, double lambda, double t, double x) {
  const double lt4 = lambda * t + 4;
  const double scale = 1.0 / ((b - a) * lt4 * lt4);
  if (x < a || x >= b) return 0.0;
  if (x < 0.5 * (a + b)) return 16 * scale;
  if (x < b - 2 * (b - a) / lt4) return 8.0 / 3.0 * (std::pow((b - a) / (b - x), 3) - 2) * scale;
  return (lt4 * lt4 * lt4 - 16) / 3.0 * scale;
}

inline double uniform_var(double a, double b, double lambda, double t) {
  const double lt4 = lambda * t + 4;
  return 4 * (b - a) * (b - a) / (3 * lt4 * lt4) * (2 * std::log1p(lambda * t / 4) + 1);
}

/// Exponential(eta) offers and salvage, mu0 = eta.
inline double exponential_density(double eta, double lambda, double t, double x) {
  const double e = std::exp(1.0), lt = lambda * t;
  if (x < 0) return 0.0;
  if (x < eta) return e / (eta * (lt + e)) * std::exp(-x / eta);
  if (x < eta * std::log(lt + e)) {
    return e / (eta * (lt + e)) * (0.5 * std::exp(x / eta - 1) - 0.5 * std::exp(1 - x / eta) + std::exp(-x / eta));
  }
  return (lt + e - (e - 2) * e / (lt + e)) * std::exp(-x / eta) / (2 * eta);
}

inline double exponential_var(double eta, double lambda, double t) {
  const double lt = lambda * t;
  return (1 + lt / (lt + std::exp(1.0))) * eta * eta;
}

/// Pareto(xm, alpha) offers and salvage, mu0 = alpha xm/(alpha - 1).
inline double pareto_density(double xm, double alpha, double lambda, double t, double x) {
  if (x < xm) return 0.0;
  const double mu0 = alpha * xm / (alpha - 1);
  const double c = std::pow((alpha - 1) / alpha, alpha - 1);
  const double y = c * lambda * t + 1;
  const double mu_t = mu0 * std::pow(y, 1 / alpha);
  const double k = alpha / (2 * alpha - 1);
  double bracket = c;
  if (x >= mu0) {
    bracket += k * (x < mu_t ? std::pow(x / mu0, 2 * alpha - 1) - 1 : std::pow(y, (2 * alpha - 1) / alpha) - 1);
  }
  return (alpha - 1) * std::pow(mu0, alpha) / std::pow(y, 1 - 1 / alpha) / std::pow(x, alpha + 1) * bracket;
}

inline double pareto_var(double xm, double alpha, double lambda, double t) {
  if (!(alpha > 2)) throw SecondMomentInfinite("Pareto needs alpha > 2 for a finite variance");
  const double c = std::pow((alpha - 1) / alpha, alpha - 1);
  const double y = c * lambda * t + 1;
  return alpha * xm * xm / ((alpha - 2) * (alpha * alpha - 1)) *
         (2 * alpha / (alpha - 1) * std::pow(y, 2 / alpha) - std::pow(y, -(alpha - 1) / alpha));
}

}  // namespace closed

inline double price_cdf(const PolicyCurve& curve, const ResidualSpec& residual, double t, double x) {
  return PriceLaw(curve, residual, t).cdf(x);
}

inline double price_pdf(const PolicyCurve& curve, const ResidualSpec& residual, double t, double x) {
  if (closed::same_as_offer(curve, residual)) {
    const OfferModel& F = curve.offer();
    const double lambda = curve.lambda();
    if (auto u = F.as<family::Uniform>()) return closed::uniform_density(u->a, u->b, lambda, t, x);
    if (auto e = F.as<family::Exponential>()) return closed::exponential_density(e->eta, lambda, t, x);
    if (auto p = F.as<family::Pareto>()) return closed::pareto_density(p->xm, p->alpha, lambda, t, x);
  }
  return PriceLaw(curve, residual, t).pdf(x);
}

/// E[S_t] = mu(t).
inline double price_mean(const PolicyCurve& curve, double t) { return curve.mu(t); }

inline double price_var(const PolicyCurve& curve, const ResidualSpec& residual, double t) {
  if (closed::same_as_offer(curve, residual)) {
    const OfferModel& F = curve.offer();
    const double lambda = curve.lambda();
    if (auto u = F.as<family::Uniform>()) return closed::uniform_var(u->a, u->b, lambda, t);
    if (auto e = F.as<family::Exponential>()) return closed::exponential_var(e->eta, lambda, t);
    if (auto p = F.as<family::Pareto>()) return closed::pareto_var(p->xm, p->alpha, lambda, t);
  }
  return PriceLaw(curve, residual, t).var();
}

/// CSV `x,G,g`; g is written as nan when a density does not exist.
inline void write_price_csv(std::ostream& out, const PolicyCurve& curve, const ResidualSpec& residual,
                            double t, const std::vector<double>& xs) {
  const PriceLaw law(curve, residual, t);
  io::CsvWriter csv(out, {"x", "G", "g"});
  for (double x : xs) {
    double g = std::nan("");
    try {
      g = price_pdf(curve, residual, t, x);
    } catch (const NoDensity&) {
    }
    csv.row({x, law.cdf(x), g});
  }
}

}  // namespace sellopt
