#pragma once

// Large-t behaviour by right-tail class of the offer distribution.
//   BoundedEdge(p, c):    phi(x) ~ c (M - x)^{p+1} as x -> M,   gamma = 1 + 1/p
//   ExponentialTail(c):   1 - F(x) decays like exp(-c x),       gamma = 1
//   PowerLaw(p):          phi regularly varying with index -(p+1), gamma = (p+1)/(p+2)
// T_t / t converges in law to 1 - (1 - s)^gamma on [0, 1].

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sellopt/dist_core.hpp"
#include "sellopt/io.hpp"
#include "sellopt/policy.hpp"
#include "sellopt/price_dist.hpp"
#include "sellopt/stop_time.hpp"

namespace sellopt {

enum class TailKind { BoundedEdge, ExponentialTail, PowerLaw };

inline const char* to_string(TailKind k) {
  switch (k) {
    case TailKind::BoundedEdge: return "bounded_edge";
    case TailKind::ExponentialTail: return "exponential_tail";
    case TailKind::PowerLaw: return "power_law";
  }
  return "?";
}

struct TailClass {
  TailKind kind;
  double p = 0.0;  // BoundedEdge, PowerLaw
  double c = 0.0;  // BoundedEdge, ExponentialTail
  double gamma = 1.0;

  static TailClass bounded_edge(double p, double c) {
    if (!(p > 0 && c > 0)) throw DomainError("bounded edge needs p > 0 and c > 0");
    return {TailKind::BoundedEdge, p, c, 1 + 1 / p};
  }
  static TailClass exponential_tail(double c) {
    if (!(c > 0)) throw DomainError("exponential tail needs c > 0");
    return {TailKind::ExponentialTail, 0.0, c, 1.0};
  }
  /// p = alpha - 2 for tail index alpha; any p > -1 gives a finite mean.
  static TailClass power_law(double p) {
    if (!(p > -1)) throw DomainError("power law needs p > -1");
    return {TailKind::PowerLaw, p, 0.0, (p + 1) / (p + 2)};
  }
};

inline TailClass classify_tail(const OfferModel& model) {
  if (auto u = model.as<family::Uniform>()) return TailClass::bounded_edge(1.0, 1.0 / (2 * (u->b - u->a)));
  if (auto b = model.as<family::Beta>()) {
    const double c = std::exp(std::lgamma(b->alpha + b->beta) - std::lgamma(b->alpha) - std::lgamma(b->beta + 2));
    return TailClass::bounded_edge(b->beta, c);
  }
  if (auto e = model.as<family::Exponential>()) return TailClass::exponential_tail(1.0 / e->eta);
  if (auto g = model.as<family::Gamma>()) return TailClass::exponential_tail(1.0 / g->eta);
  if (auto p = model.as<family::Pareto>()) return TailClass::power_law(p->alpha - 2);
  if (auto f = model.as<family::Frechet>()) return TailClass::power_law(f->alpha - 2);
  throw UnknownTail("tabulated models have no analytic tail class; use rv_diagnostic");
}

/// Leading-order value where one exists, otherwise only the regular
/// variation exponent.
struct Asymptote {
  std::optional<double> value;
  double rv_exponent;
};

inline Asymptote mu_asymptotic(const TailClass& cls, double lambda, double M, double t) {
  if (!(t > 0)) throw DomainError("asymptotics need t > 0");
  switch (cls.kind) {
    case TailKind::BoundedEdge:
      return {M - std::pow(lambda * cls.p * cls.c * t, -1 / cls.p), 0.0};
    case TailKind::ExponentialTail:
      return {std::log(t) / cls.c, 0.0};
    case TailKind::PowerLaw:
      return {std::nullopt, 1 / (cls.p + 2)};
  }
  return {std::nullopt, 0.0};
}

inline double mu_asymptotic_value(const TailClass& cls, double lambda, double M, double t) {
  auto a = mu_asymptotic(cls, lambda, M, t);
  if (!a.value) throw NotApplicable("power-law tails determine only the regular variation exponent of mu");
  return *a.value;
}

/// Var[S_t] as t -> inf. The p < 1 constant needs the curve and residual.
inline Asymptote var_asymptotic(const TailClass& cls, const PolicyCurve& curve, const ResidualSpec& residual,
                                double t) {
  if (!(t > 0)) throw DomainError("asymptotics need t > 0");
  const double l = curve.lambda();
  switch (cls.kind) {
    case TailKind::BoundedEdge: {
      const double p = cls.p, c = cls.c;
      if (p < 1) {
        const OfferModel& F = curve.offer();
        const double mu0 = curve.mu0(), M = curve.top();
        auto integrand = [&](double w) {
          const double ph = F.phi(w);
          return ph > 0 ? F.var_excess(w) / (ph * ph) : 0.0;
        };
        numerics::QuadOptions opt;
        opt.rel_tol = 1e-10;
        const double tail = numerics::integrate_partition(integrand, curve.cuts(mu0, M), opt).value;
        const double bracket = (M - mu0) + residual.variance() / curve.phi_mu0() + tail;
        return {bracket / (std::pow(l * p, (p + 1) / p) * std::pow(c, 1 / p)) * std::pow(t, -(p + 1) / p),
                -(p + 1) / p};
      }
      if (p == 1) return {2 / (3 * l * l * c * c) * std::log(t) / (t * t), -2.0};
      return {2 / ((p - 1) * (p + 2)) * std::pow(l * p * c, -2 / p) * std::pow(t, -2 / p), -2 / p};
    }
    case TailKind::ExponentialTail:
      return {2 / (cls.c * cls.c), 0.0};
    case TailKind::PowerLaw:
      return {std::nullopt, 2 / (cls.p + 2)};
  }
  return {std::nullopt, 0.0};
}

inline double that_limit(const TailClass& cls, double s) {
  if (s <= 0) return 0.0;
  if (s >= 1) return 1.0;
  return 1 - std::pow(1 - s, cls.gamma);
}

struct LimitMoments {
  double mean, var;
};

inline LimitMoments that_limit_moments(const TailClass& cls) {
  const double g = cls.gamma;
  return {1 / (g + 1), g / ((g + 1) * (g + 1) * (g + 2))};
}

struct RvDiagnostic {
  std::vector<double> sequence;  // log2(fn(2^{k+1} t) / fn(2^k t))
  double estimate;
};

inline RvDiagnostic rv_diagnostic(const std::function<double(double)>& fn, double t, int doublings) {
  if (doublings < 1) throw DomainError("need at least one doubling");
  RvDiagnostic out;
  double prev = fn(t);
  if (!(prev > 0)) throw NonPositiveValue("fn(" + io::fmt(t) + ") is not positive");
  for (int k = 0; k < doublings; ++k) {
    t *= 2;
    const double next = fn(t);
    if (!(next > 0)) throw NonPositiveValue("fn(" + io::fmt(t) + ") is not positive");
    out.sequence.push_back(std::log2(next / prev));
    prev = next;
  }
  out.estimate = out.sequence.back();
  return out;
}

/// Report `{family, class, p?, c?, gamma, checks:[...]}`.
inline io::json asymptotics_report(const PolicyCurve& curve, const ResidualSpec& residual) {
  const OfferModel& F = curve.offer();
  const TailClass cls = classify_tail(F);
  io::json rep;
  rep["family"] = F.describe();
  rep["class"] = to_string(cls.kind);
  if (cls.kind != TailKind::ExponentialTail) rep["p"] = cls.p;
  if (cls.kind != TailKind::PowerLaw) rep["c"] = cls.c;
  rep["gamma"] = cls.gamma;
  const auto lim = that_limit_moments(cls);
  rep["limit_mean"] = lim.mean;
  rep["limit_var"] = lim.var;

  io::json checks = io::json::array();
  auto add = [&](const std::string& name, double stat, double thr) {
    checks.push_back({{"name", name}, {"statistic", io::num(stat)}, {"threshold", thr}, {"pass", stat <= thr}});
  };
  const double t_mom = 1e5;
  add("stop_mean_over_t_rel_err", std::fabs(stop_mean(curve, t_mom) / t_mom / lim.mean - 1), 0.01);
  add("stop_var_over_t2_rel_err", std::fabs(stop_var(curve, t_mom) / (t_mom * t_mom) / lim.var - 1), 0.01);
  double sup = 0;
  const double t_cdf = 1e4;
  for (int i = 0; i <= 200; ++i) {
    const double s = i / 200.0;
    sup = std::max(sup, std::fabs(that_cdf(curve, t_cdf, s) - that_limit(cls, s)));
  }
  add("that_cdf_sup_distance", sup, 0.02);
  switch (cls.kind) {
    case TailKind::BoundedEdge: {
      const double M = curve.top();
      auto d = rv_diagnostic([&](double t) { return M - curve.mu(t); }, 1e3, 6);
      add("rv_exponent_of_M_minus_mu", std::fabs(d.estimate + 1 / cls.p), 0.02);
      break;
    }
    case TailKind::ExponentialTail: {
      auto d = rv_diagnostic([&](double t) { return curve.mu_prime(t); }, 1e3, 6);
      add("rv_exponent_of_mu_prime", std::fabs(d.estimate + 1), 0.02);
      // Gamma-type tails approach the limit only like 1 + O(1 / mu(t)).
      if (F.as<family::Exponential>() && std::isfinite(residual.variance())) {
        const double t_var = 1e6;
        const double limit = *var_asymptotic(cls, curve, residual, t_var).value;
        add("price_var_limit_rel_err", std::fabs(price_var(curve, residual, t_var) / limit - 1), 0.02);
      }
      break;
    }
    case TailKind::PowerLaw: {
      auto d = rv_diagnostic([&](double t) { return curve.mu(t); }, 1e3, 6);
      add("rv_exponent_of_mu", std::fabs(d.estimate - 1 / (cls.p + 2)), 0.02);
      break;
    }
  }
  rep["checks"] = checks;
  return rep;
}

}  // namespace sellopt
