#pragma once

// Time to sale T_t: P(T_t > r) = phi(mu(t)) / phi(mu(t - r)) for 0 <= r < t,
// with an atom phi(mu(t))/phi(mu0) at r = t.
//   E[T_t]   = phi(mu_t) J(mu_t) / lambda
//   E[T_t^2] = 2 phi(mu_t) K(mu_t) / lambda^2,  K(x) = int_{mu0}^x J(u)/phi(u) du

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "sellopt/io.hpp"
#include "sellopt/policy.hpp"
#include "sellopt/price_dist.hpp"

namespace sellopt {

class StopLaw {
 public:
  StopLaw(const PolicyCurve& curve, double t, Path path = Path::Auto)
      : curve_(curve), t_(t), numeric_(path == Path::Numeric) {
    if (!(t >= 0)) throw DomainError("t must be nonnegative");
    mu_t_ = numeric_ ? curve.mu_numeric(t) : curve.mu(t);
    phi_t_ = phi_at(t);
    phi0_ = curve.phi_mu0();
    j_t_ = numeric_ ? curve.j_numeric(mu_t_) : curve.j_integral(mu_t_);
  }

  double t() const { return t_; }

  /// Right-continuous: 1 at r >= t, the atom is reported by atom().
  double cdf(double r) const {
    if (r < 0) return 0.0;
    if (r >= t_) return 1.0;
    return 1.0 - phi_t_ / phi_at(t_ - r);
  }
  double atom() const { return phi_t_ / phi0_; }
  double mean() const { return phi_t_ * j_t_ / curve_.lambda(); }
  double var() const {
    if (!(mu_t_ > curve_.mu0())) return 0.0;
    const OfferModel& F = curve_.offer();
    auto integrand = [&](double u) {
      const double jj = numeric_ ? curve_.j_numeric(u) : curve_.j_integral(u);
      return jj / F.phi(u);
    };
    numerics::QuadOptions opt;
    opt.rel_tol = 1e-10;
    opt.max_intervals = 1000;
    const double k = numerics::integrate_partition(integrand, curve_.cuts(curve_.mu0(), mu_t_), opt).value;
    const double m = phi_t_ * j_t_;
    const double l = curve_.lambda();
    return std::max(0.0, (2 * phi_t_ * k - m * m) / (l * l));
  }

 private:
  double phi_at(double s) const {
    return numeric_ ? curve_.offer().phi(curve_.mu_numeric(s)) : curve_.phi_mu(s);
  }

  const PolicyCurve& curve_;
  double t_;
  bool numeric_;
  double mu_t_, phi_t_, phi0_, j_t_;
};

namespace closed {

struct TimeMoments {
  double atom, mean, var;
};

/// Uniform offers with mu0 in [a, b): k = 2(b - a)/(b - mu0).
inline double uniform_stop_cdf(double k, double lambda, double t, double r) {
  if (r < 0) return 0.0;
  if (r >= t) return 1.0;
  const double q = 1 - lambda * r / (lambda * t + k);
  return 1 - q * q;
}
inline TimeMoments uniform_time(double k, double lambda, double t) {
  const double lt = lambda * t, d = lt + k;
  return {k * k / (d * d), (d - k * k * k / (d * d)) / (3 * lambda),
          lambda * t * t * t * (lt * lt * lt + 6 * k * lt * lt + 15 * k * k * lt + 12 * k * k * k) /
              (18 * d * d * d * d)};
}

/// Exponential offers: e0 = exp(mu0/eta).
inline double exponential_stop_cdf(double e0, double lambda, double t, double r) {
  if (r < 0) return 0.0;
  if (r >= t) return 1.0;
  return lambda * r / (lambda * t + e0);
}
inline TimeMoments exponential_time(double e0, double lambda, double t) {
  const double lt = lambda * t;
  return {e0 / (lt + e0), 0.5 * t * (1 + e0 / (lt + e0)),
          lambda * t * t * t * (lt + 4 * e0) / (12 * (lt + e0) * (lt + e0))};
}

/// Pareto offers with mu0 >= xm and policy constant c.
inline double pareto_stop_cdf(double c, double alpha, double lambda, double t, double r) {
  if (r < 0) return 0.0;
  if (r >= t) return 1.0;
  return 1 - std::pow(1 - c * lambda * r / (c * lambda * t + 1), 1 - 1 / alpha);
}
inline TimeMoments pareto_time(double xm, double alpha, double mu0, double c, double lambda, double t) {
  const double clt = c * lambda * t, y = clt + 1;
  const double ratio = std::pow(mu0 / xm, alpha);
  const double atom = std::pow(y, 1 / alpha - 1);
  const double mean = (alpha - 1) / (2 * alpha - 1) * ratio * y * (1 - std::pow(y, 1 / alpha - 2)) / lambda;
  const double y3 = std::pow(y, -(3 - 1 / alpha));
  const double b2 = 1 - std::pow(y, -(2 - 1 / alpha));
  const double var = (alpha - 1) * (alpha - 1) / (2 * alpha - 1) * ratio * ratio * y * y *
                     (2 * ((1 - y3) / (3 * alpha - 1) - clt * y3 / alpha) - b2 * b2 / (2 * alpha - 1)) /
                     (lambda * lambda);
  return {atom, mean, var};
}

inline std::optional<TimeMoments> time_moments(const PolicyCurve& curve, double t) {
  const double l = curve.lambda();
  switch (curve.method()) {
    case PolicyMethod::ClosedFormUniform:
      return uniform_time(curve.uniform_k(), l, t);
    case PolicyMethod::ClosedFormExponential: {
      const double eta = curve.offer().as<family::Exponential>()->eta;
      return exponential_time(std::exp(curve.mu0() / eta), l, t);
    }
    case PolicyMethod::ClosedFormPareto: {
      const auto& p = *curve.offer().as<family::Pareto>();
      return pareto_time(p.xm, p.alpha, curve.mu0(), *curve.pareto_c(), l, t);
    }
    default:
      return std::nullopt;
  }
}

}  // namespace closed

inline double stop_cdf(const PolicyCurve& curve, double t, double r) {
  const double l = curve.lambda();
  switch (curve.method()) {
    case PolicyMethod::ClosedFormUniform:
      return closed::uniform_stop_cdf(curve.uniform_k(), l, t, r);
    case PolicyMethod::ClosedFormExponential: {
      const double eta = curve.offer().as<family::Exponential>()->eta;
      return closed::exponential_stop_cdf(std::exp(curve.mu0() / eta), l, t, r);
    }
    case PolicyMethod::ClosedFormPareto: {
      const auto& p = *curve.offer().as<family::Pareto>();
      return closed::pareto_stop_cdf(*curve.pareto_c(), p.alpha, l, t, r);
    }
    default:
      return StopLaw(curve, t).cdf(r);
  }
}

inline double atom_prob(const PolicyCurve& curve, double t) {
  if (auto m = closed::time_moments(curve, t)) return m->atom;
  return StopLaw(curve, t).atom();
}

inline double stop_mean(const PolicyCurve& curve, double t) {
  if (auto m = closed::time_moments(curve, t)) return m->mean;
  return StopLaw(curve, t).mean();
}

inline double stop_var(const PolicyCurve& curve, double t) {
  if (auto m = closed::time_moments(curve, t)) return m->var;
  return StopLaw(curve, t).var();
}

/// Normalized fraction T_t / t: P(T_t/t <= s).
inline double that_cdf(const PolicyCurve& curve, double t, double s) {
  if (!(t > 0)) throw DomainError("that_cdf needs t > 0");
  if (s < 0) return 0.0;
  if (s >= 1) return 1.0;
  return stop_cdf(curve, t, s * t);
}

/// CSV `r,H`.
inline void write_stop_csv(std::ostream& out, const PolicyCurve& curve, double t, const std::vector<double>& rs) {
  io::CsvWriter csv(out, {"r", "H"});
  for (double r : rs) csv.row({r, stop_cdf(curve, t, r)});
}

/// One-line record `{t, atom, mean, var}`.
inline io::json stop_record(const PolicyCurve& curve, double t) {
  io::json j;
  j["t"] = io::num(t);
  j["atom"] = io::num(atom_prob(curve, t));
  j["mean"] = io::num(stop_mean(curve, t));
  j["var"] = io::num(stop_var(curve, t));
  return j;
}

}  // namespace sellopt
