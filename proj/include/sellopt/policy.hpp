#pragma once

// Optimal acceptance threshold mu(t) = Psi^{-1}(lambda t), where
// Psi(x) = int_{mu0}^x du / phi(u). mu' = lambda phi(mu), mu(0) = mu0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "sellopt/dist_core.hpp"
#include "sellopt/errors.hpp"
#include "sellopt/numerics/ode.hpp"
#include "sellopt/numerics/quadrature.hpp"
#include "sellopt/numerics/roots.hpp"

namespace sellopt {

/// Cumulative Psi(x) and J(x) = int_{mu0}^x dw / phi(w)^2 on a node set
/// [mu0, x_hi]. Panels are refined geometrically toward a finite M and grown
/// geometrically (bounded phi ratio per panel) toward an infinite one.
class PsiTable {
 public:
  PsiTable(OfferModel offer, double mu0, double rel_tol = 1e-13)
      : offer_(std::move(offer)), mu0_(mu0), top_(offer_.support_max()), tol_(rel_tol) {
    build_nodes();
    psi_.assign(x_.size(), 0.0);
    j_.assign(x_.size(), 0.0);
    for (std::size_t i = 1; i < x_.size(); ++i) {
      psi_[i] = psi_[i - 1] + panel(1, x_[i - 1], x_[i]);
      j_[i] = j_[i - 1] + panel(2, x_[i - 1], x_[i]);
    }
  }

  double mu0() const { return mu0_; }
  double top() const { return top_; }
  double tolerance() const { return tol_; }
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& psi_nodes() const { return psi_; }

  double psi(double x) const { return cumulative(1, x); }
  double j(double x) const { return cumulative(2, x); }

  /// Smallest x with Psi(x) = target; always in [mu0, M).
  double inverse(double target) const {
    if (!(target > 0)) return mu0_;
    auto it = std::upper_bound(psi_.begin(), psi_.end(), target);
    double lo, hi;
    if (it != psi_.end()) {
      const std::size_t i = static_cast<std::size_t>(it - psi_.begin());
      lo = x_[i - 1];
      hi = x_[i];
    } else {
      lo = x_.back();
      if (std::isfinite(top_)) {
        hi = top_;
      } else {
        double step = std::max(lo - mu0_, offer_.phi(mu0_));
        hi = lo + step;
        while (psi(hi) < target) {
          lo = hi;
          step *= 2;
          hi = lo + step;
        }
      }
    }
    auto g = [&](double x) { return std::pair<double, double>{psi(x) - target, 1.0 / offer_.phi(x)}; };
    const double x = numerics::newton_bracketed(g, lo, hi, 1e-15, 200);
    // Below this gap M - x keeps fewer than about three significant digits.
    if (std::isfinite(top_) && top_ - x < 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(top_))) {
      throw PrecisionLoss("mu is indistinguishable from M = " + std::to_string(top_) + " in double precision");
    }
    return x;
  }

 private:
  void build_nodes() {
    x_.push_back(mu0_);
    if (std::isfinite(top_)) {
      // Closer to M, x itself carries too few digits of M - x.
      const double floor_gap = 1e-10 * std::max(1.0, std::fabs(top_));
      double gap = top_ - mu0_;
      while (gap > floor_gap) {
        gap *= 0.5;
        x_.push_back(top_ - gap);
      }
    } else {
      double x = mu0_, phx = offer_.phi(mu0_), step = phx, psi_acc = 0.0;
      while (x_.size() < 5000 && psi_acc < 1e16 && phx > 1e-290) {
        const double trial = x + step;
        const double pht = offer_.phi(trial);
        if (pht < 0.25 * phx) {
          step *= 0.5;
          continue;
        }
        psi_acc += (trial - x) / pht;
        if (pht > 0.5 * phx) step *= 2;
        x = trial;
        phx = pht;
        x_.push_back(x);
      }
    }
    x_ = numerics::merge_breaks(x_, offer_.breakpoints());
  }

  // int_lo^hi phi^-power.
  double panel(int power, double lo, double hi) const {
    if (!(hi > lo)) return 0.0;
    numerics::QuadOptions opt;
    opt.rel_tol = tol_;
    if (std::isfinite(top_)) {
      // x carries only eps |M| / (M - x) relative digits of M - x.
      const double cond = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(top_)) / (top_ - hi);
      opt.rel_tol = std::max(tol_, cond);
    }
    opt.abs_tol = 0.0;
    opt.max_intervals = 200;
    auto f = [&](double u) {
      const double p = offer_.phi(u);
      return power == 1 ? 1.0 / p : 1.0 / (p * p);
    };
    return numerics::integrate(f, lo, hi, opt).value;
  }

  double cumulative(int power, double x) const {
    if (x < mu0_ || !(x < top_)) throw DomainError("Psi needs mu0 <= x < M");
    const auto& acc = power == 1 ? psi_ : j_;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    if (x == x_[i]) return acc[i];
    if (i + 1 < x_.size()) return acc[i] + panel(power, x_[i], x);
    double sum = acc[i];
    if (std::isfinite(top_)) {
      const auto cuts = numerics::geometric_breaks(x_[i], x, top_);
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) sum += panel(power, cuts[k], cuts[k + 1]);
      return sum;
    }
    // Past the last node of an unbounded table: keep panels geometric.
    double lo = x_[i], step = std::max(lo - mu0_, offer_.phi(lo));
    while (lo < x) {
      const double hi = std::min(x, lo + step);
      sum += panel(power, lo, hi);
      lo = hi;
      step *= 2;
    }
    return sum;
  }

  OfferModel offer_;
  double mu0_, top_, tol_;
  std::vector<double> x_, psi_, j_;
};

enum class PolicyMethod {
  ClosedFormUniform,
  ClosedFormUniformLowSalvage,
  ClosedFormExponential,
  ClosedFormPareto,
  NumericPsi
};

inline const char* to_string(PolicyMethod m) {
  switch (m) {
    case PolicyMethod::ClosedFormUniform: return "closed_form_uniform";
    case PolicyMethod::ClosedFormUniformLowSalvage: return "closed_form_uniform_low_salvage";
    case PolicyMethod::ClosedFormExponential: return "closed_form_exponential";
    case PolicyMethod::ClosedFormPareto: return "closed_form_pareto";
    case PolicyMethod::NumericPsi: return "numeric_psi";
  }
  return "?";
}

/// Solved optimal threshold for (offer F, salvage mean mu0, rate lambda).
/// The numeric Psi table is always built, so the *_numeric evaluators are
/// available as an independent path even when a closed form is in use.
class PolicyCurve {
 public:
  PolicyCurve(const OfferModel& offer, double mu0, double lambda, bool force_numeric = false)
      : offer_(offer), mu0_(mu0), lambda_(lambda), top_(offer.support_max()) {
    if (!(lambda > 0 && std::isfinite(lambda))) throw DomainError("lambda must be positive");
    if (!(mu0 >= 0 && mu0 < top_)) throw DomainError("need 0 <= mu0 < M");
    offer_.phi(mu0);  // surfaces TailNotIntegrable early
    method_ = PolicyMethod::NumericPsi;
    if (!force_numeric) {
      if (auto u = offer_.as<family::Uniform>()) {
        method_ = mu0 >= u->a ? PolicyMethod::ClosedFormUniform : PolicyMethod::ClosedFormUniformLowSalvage;
        if (method_ == PolicyMethod::ClosedFormUniformLowSalvage) {
          t_star_ = std::log((u->a + u->b - 2 * mu0) / (u->b - u->a)) / lambda;
        }
      } else if (offer_.as<family::Exponential>()) {
        method_ = PolicyMethod::ClosedFormExponential;
      } else if (auto p = offer_.as<family::Pareto>(); p && mu0 >= p->xm) {
        method_ = PolicyMethod::ClosedFormPareto;
        pareto_c_ = p->alpha / (p->alpha - 1) * std::pow(p->xm / mu0, p->alpha);
      }
    }
    table_.emplace(offer_, mu0_);
  }

  const OfferModel& offer() const { return offer_; }
  double mu0() const { return mu0_; }
  double lambda() const { return lambda_; }
  /// M = sup{x : F(x) < 1}.
  double top() const { return top_; }
  PolicyMethod method() const { return method_; }
  bool closed_form() const { return method_ != PolicyMethod::NumericPsi; }
  std::optional<double> t_star() const { return t_star_; }
  std::optional<double> pareto_c() const { return pareto_c_; }
  const PsiTable& table() const { return *table_; }

  double psi(double x) const {
    if (x < mu0_ || !(x < top_)) throw DomainError("psi needs mu0 <= x < M");
    switch (method_) {
      case PolicyMethod::ClosedFormUniform: {
        const auto& u = *offer_.as<family::Uniform>();
        return 2 * (u.b - u.a) * (1 / (u.b - x) - 1 / (u.b - mu0_));
      }
      case PolicyMethod::ClosedFormUniformLowSalvage: {
        const auto& u = *offer_.as<family::Uniform>();
        if (x <= u.a) return std::log((u.a + u.b - 2 * mu0_) / (u.a + u.b - 2 * x));
        return lambda_ * *t_star_ + 2 * (x - u.a) / (u.b - x);
      }
      case PolicyMethod::ClosedFormExponential: {
        const double eta = offer_.as<family::Exponential>()->eta;
        return std::exp(mu0_ / eta) * std::expm1((x - mu0_) / eta);
      }
      case PolicyMethod::ClosedFormPareto: {
        const double alpha = offer_.as<family::Pareto>()->alpha;
        return std::expm1(alpha * std::log(x / mu0_)) / *pareto_c_;
      }
      case PolicyMethod::NumericPsi: break;
    }
    return table_->psi(x);
  }

  double mu(double t) const {
    if (!(t >= 0)) throw DomainError("mu needs t >= 0");
    if (t == 0) return mu0_;
    const double lt = lambda_ * t;
    switch (method_) {
      case PolicyMethod::ClosedFormUniform: {
        const auto& u = *offer_.as<family::Uniform>();
        return u.b - 2 * (u.b - u.a) / (lt + uniform_k());
      }
      case PolicyMethod::ClosedFormUniformLowSalvage: {
        const auto& u = *offer_.as<family::Uniform>();
        if (t <= *t_star_) return 0.5 * (u.a + u.b - (u.a + u.b - 2 * mu0_) * std::exp(-lt));
        return u.b - 2 * (u.b - u.a) / (lambda_ * (t - *t_star_) + 2);
      }
      case PolicyMethod::ClosedFormExponential: {
        const double eta = offer_.as<family::Exponential>()->eta;
        return mu0_ + eta * std::log1p(lt * std::exp(-mu0_ / eta));
      }
      case PolicyMethod::ClosedFormPareto: {
        const double alpha = offer_.as<family::Pareto>()->alpha;
        return mu0_ * std::pow(*pareto_c_ * lt + 1, 1 / alpha);
      }
      case PolicyMethod::NumericPsi: break;
    }
    return table_->inverse(lt);
  }

  /// Integrates mu' = lambda phi(mu) directly; an independent check of mu().
  double mu_ode(double t, numerics::OdeOptions opt = {}) const {
    if (!(t >= 0)) throw DomainError("mu_ode needs t >= 0");
    opt.abs_tol = std::min(opt.abs_tol, 1e-12);
    opt.rel_tol = std::min(opt.rel_tol, 1e-12);
    auto rhs = [&](double, double y) { return lambda_ * offer_.phi(y); };
    return numerics::dormand_prince(rhs, 0.0, mu0_, t, opt);
  }

  double mu_prime(double t) const { return lambda_ * phi_mu(t); }

  /// h(t) = lambda (1 - F(mu(t))) = -mu''/mu'.
  double h(double t) const { return lambda_ * offer_.sf(mu(t)); }

  /// phi(mu(t)), with closed forms free of cancellation near M.
  double phi_mu(double t) const {
    const double lt = lambda_ * t;
    switch (method_) {
      case PolicyMethod::ClosedFormUniform: {
        const auto& u = *offer_.as<family::Uniform>();
        const double d = lt + uniform_k();
        return 2 * (u.b - u.a) / (d * d);
      }
      case PolicyMethod::ClosedFormUniformLowSalvage: {
        if (t <= *t_star_) break;
        const auto& u = *offer_.as<family::Uniform>();
        const double d = lambda_ * (t - *t_star_) + 2;
        return 2 * (u.b - u.a) / (d * d);
      }
      case PolicyMethod::ClosedFormExponential: {
        const double eta = offer_.as<family::Exponential>()->eta;
        return phi_mu0() / (1 + lt * std::exp(-mu0_ / eta));
      }
      case PolicyMethod::ClosedFormPareto: {
        const double alpha = offer_.as<family::Pareto>()->alpha;
        return phi_mu0() * std::pow(*pareto_c_ * lt + 1, 1 / alpha - 1);
      }
      case PolicyMethod::NumericPsi: break;
    }
    return offer_.phi(mu(t));
  }
  double phi_mu0() const { return offer_.phi(mu0_); }

  /// J(x) = int_{mu0}^x dw / phi(w)^2.
  double j_integral(double x) const {
    if (x < mu0_ || !(x < top_)) throw DomainError("J needs mu0 <= x < M");
    switch (method_) {
      case PolicyMethod::ClosedFormUniform: {
        const auto& u = *offer_.as<family::Uniform>();
        return 4.0 / 3.0 * (u.b - u.a) * (u.b - u.a) * (std::pow(u.b - x, -3) - std::pow(u.b - mu0_, -3));
      }
      case PolicyMethod::ClosedFormUniformLowSalvage: {
        const auto& u = *offer_.as<family::Uniform>();
        const double m = 0.5 * (u.a + u.b);
        if (x <= u.a) return 1 / (m - x) - 1 / (m - mu0_);
        const double at_a = 1 / (m - u.a) - 1 / (m - mu0_);
        return at_a + 4.0 / 3.0 * (u.b - u.a) * (u.b - u.a) * (std::pow(u.b - x, -3) - std::pow(u.b - u.a, -3));
      }
      case PolicyMethod::ClosedFormExponential: {
        const double eta = offer_.as<family::Exponential>()->eta;
        return std::exp(2 * mu0_ / eta) * std::expm1(2 * (x - mu0_) / eta) / (2 * eta);
      }
      case PolicyMethod::ClosedFormPareto: {
        const double alpha = offer_.as<family::Pareto>()->alpha;
        const double c = *pareto_c_;
        return alpha * alpha / ((2 * alpha - 1) * mu0_ * c * c) * std::expm1((2 * alpha - 1) * std::log(x / mu0_));
      }
      case PolicyMethod::NumericPsi: break;
    }
    return table_->j(x);
  }

  double psi_numeric(double x) const { return table_->psi(x); }
  double j_numeric(double x) const { return table_->j(x); }
  double mu_numeric(double t) const {
    if (!(t >= 0)) throw DomainError("mu needs t >= 0");
    return table_->inverse(lambda_ * t);
  }

  /// Quadrature partition of [lo, hi] aligned with the Psi table nodes.
  std::vector<double> cuts(double lo, double hi) const {
    return numerics::merge_breaks({lo, hi}, table_->nodes());
  }

  /// k = 2(b - a)/(b - mu0) of the uniform closed form.
  double uniform_k() const {
    const auto& u = *offer_.as<family::Uniform>();
    return 2 * (u.b - u.a) / (u.b - std::max(mu0_, u.a));
  }

 private:
  OfferModel offer_;
  double mu0_, lambda_, top_;
  PolicyMethod method_;
  std::optional<double> t_star_, pareto_c_;
  std::optional<PsiTable> table_;
};

/// F(x) = 1 - h(mu^{-1}(x))/lambda on the sampled range [mu(t_0), mu(t_last)].
/// h = -(ln mu')' is estimated from centered differences of log-slopes; the
/// first and last samples reuse one-sided linear extrapolation.
inline OfferModel reconstruct_offer_cdf(const std::vector<double>& t, const std::vector<double>& mu,
                                        double lambda) {
  const std::size_t n = t.size();
  if (n != mu.size() || n < 4) throw DomainError("need >= 4 matching (t, mu) samples");
  if (!(lambda > 0)) throw DomainError("lambda must be positive");
  std::vector<double> slope(n - 1), mid(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dt = t[i + 1] - t[i];
    if (!(dt > 0)) throw DomainError("sample times must be strictly increasing");
    if (!(mu[i + 1] > mu[i])) throw NotIncreasing("samples are not strictly increasing at index " + std::to_string(i + 1));
    slope[i] = (mu[i + 1] - mu[i]) / dt;
    mid[i] = 0.5 * (t[i] + t[i + 1]);
  }
  constexpr double round_off = 64 * std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i + 1 < slope.size(); ++i) {
    if (slope[i + 1] > slope[i] * (1 + round_off)) {
      throw NotConcave("samples are not concave at index " + std::to_string(i + 1));
    }
  }
  if (!(slope.back() < slope.front())) throw NotConcave("samples are linear");

  std::vector<double> h(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    h[i] = -(std::log(slope[i]) - std::log(slope[i - 1])) / (mid[i] - mid[i - 1]);
  }
  h[0] = h[1] + (h[1] - h[2]) * (t[1] - t[0]) / (t[2] - t[1]);
  h[n - 1] = h[n - 2] + (h[n - 2] - h[n - 3]) * (t[n - 1] - t[n - 2]) / (t[n - 2] - t[n - 3]);
  if (h[0] > lambda * (1 + 1e-3)) {
    throw RateTooSmall("lambda is below the estimated h(0+) = " + std::to_string(h[0]));
  }
  std::vector<double> F(n);
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run = std::max(run, std::clamp(1.0 - h[i] / lambda, 0.0, 1.0));
    F[i] = run;
  }
  return OfferModel::tabulated(mu, std::move(F));
}

inline OfferModel reconstruct_offer_cdf(const PolicyCurve& curve, const std::vector<double>& t) {
  std::vector<double> m(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) m[i] = curve.mu(t[i]);
  return reconstruct_offer_cdf(t, m, curve.lambda());
}

/// mu0 + E[(X - mu0)_+^p]^{1/p} (lambda t)^{1/p}.
inline double bound_moment_p(const PolicyCurve& curve, double p, double t) {
  if (!(p > 1)) throw DomainError("moment bound needs p > 1");
  if (!(t >= 0)) throw DomainError("t must be nonnegative");
  const double m = curve.offer().excess_moment(p, curve.mu0());
  return curve.mu0() + std::pow(m * curve.lambda() * t, 1.0 / p);
}

/// mu0 + ln(E[exp(delta (X - mu0)_+)] lambda t + 1) / delta.
inline double bound_exponential(const PolicyCurve& curve, double delta, double t) {
  if (!(t >= 0)) throw DomainError("t must be nonnegative");
  const double m = curve.offer().excess_mgf(delta, curve.mu0());
  return curve.mu0() + std::log1p(m * curve.lambda() * t) / delta;
}

}  // namespace sellopt
