#pragma once

// Offer and residual (salvage) distributions.
//
// Every family exposes its CDF, density, mean, support, the excess-value
// function phi(x) = E[(X - x)_+] = int_x^inf (1 - F(u)) du and the tail
// integral I(x) = int_x^inf phi(u) du = E[(X - x)_+^2] / 2. Below the support
// minimum s, phi(x) = E[X] - x exactly, which every family uses.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "sellopt/errors.hpp"
#include "sellopt/numerics/quadrature.hpp"

namespace sellopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace family {

struct Uniform {
  double a, b;

  double sf(double x) const { return 1.0 - cdf(x); }

  double cdf(double x) const {
    if (x < a) return 0.0;
    if (x >= b) return 1.0;
    return (x - a) / (b - a);
  }
  double pdf(double x) const { return (x >= a && x < b) ? 1.0 / (b - a) : 0.0; }
  double phi(double x) const {
    if (x < a) return 0.5 * (a + b) - x;
    if (x >= b) return 0.0;
    return (b - x) * (b - x) / (2.0 * (b - a));
  }
  std::optional<double> tail_integral(double x) const {
    if (x >= b) return 0.0;
    if (x >= a) return std::pow(b - x, 3) / (6.0 * (b - a));
    const double m = 0.5 * (a + b);
    return (b - a) * (b - a) / 6.0 + m * (a - x) - 0.5 * (a * a - x * x);
  }
  double quantile(double u) const { return a + u * (b - a); }
  double mean() const { return 0.5 * (a + b); }
  double variance() const { return (b - a) * (b - a) / 12.0; }
  double support_min() const { return a; }
  double support_max() const { return b; }
  double scale() const { return b - a; }
  std::vector<double> breakpoints() const { return {a, b}; }
};

struct Exponential {
  double eta;

  double sf(double x) const { return x < 0 ? 1.0 : std::exp(-x / eta); }

  double cdf(double x) const { return x < 0 ? 0.0 : -std::expm1(-x / eta); }
  double pdf(double x) const { return x < 0 ? 0.0 : std::exp(-x / eta) / eta; }
  double phi(double x) const { return x < 0 ? eta - x : eta * std::exp(-x / eta); }
  std::optional<double> tail_integral(double x) const {
    if (x >= 0) return eta * eta * std::exp(-x / eta);
    return eta * eta - eta * x + 0.5 * x * x;
  }
  double quantile(double u) const { return -eta * std::log1p(-u); }
  double mean() const { return eta; }
  double variance() const { return eta * eta; }
  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double scale() const { return eta; }
  std::vector<double> breakpoints() const { return {0.0}; }
};

struct Pareto {
  double xm, alpha;

  double sf(double x) const { return x < xm ? 1.0 : std::pow(xm / x, alpha); }

  void require_mean() const {
    if (!(alpha > 1)) throw TailNotIntegrable("Pareto needs alpha > 1 for a finite mean");
  }
  void require_second_moment() const {
    if (!(alpha > 2)) throw SecondMomentInfinite("Pareto needs alpha > 2 for a finite variance");
  }
  double cdf(double x) const { return x < xm ? 0.0 : -std::expm1(alpha * std::log(xm / x)); }
  double pdf(double x) const { return x < xm ? 0.0 : alpha * std::pow(xm, alpha) / std::pow(x, alpha + 1); }
  double phi(double x) const {
    require_mean();
    if (x < xm) return mean() - x;
    return xm / (alpha - 1) * std::pow(xm / x, alpha - 1);
  }
  std::optional<double> tail_integral(double x) const {
    require_second_moment();
    const double at_xm = xm * xm / ((alpha - 1) * (alpha - 2));
    if (x >= xm) return at_xm * std::pow(xm / x, alpha - 2);
    return at_xm + mean() * (xm - x) - 0.5 * (xm * xm - x * x);
  }
  double quantile(double u) const { return xm * std::pow(1.0 - u, -1.0 / alpha); }
  double mean() const {
    require_mean();
    return alpha * xm / (alpha - 1);
  }
  double variance() const {
    require_second_moment();
    return alpha * xm * xm / ((alpha - 1) * (alpha - 1) * (alpha - 2));
  }
  double support_min() const { return xm; }
  double support_max() const { return kInf; }
  double scale() const { return xm; }
  std::vector<double> breakpoints() const { return {xm}; }
};

struct Beta {
  double alpha, beta;

  double sf(double x) const {
    if (x <= 0) return 1.0;
    if (x >= 1) return 0.0;
    return boost::math::ibetac(alpha, beta, x);
  }

  double cdf(double x) const {
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    return boost::math::ibeta(alpha, beta, x);
  }
  double pdf(double x) const {
    if (x <= 0 || x >= 1) return 0.0;
    return boost::math::ibeta_derivative(alpha, beta, x);
  }
  // Above the mean the mirrored form d I_d(beta, alpha) - E[1-X] I_d(beta+1, alpha)
  // with d = 1 - x keeps full relative precision as x -> 1.
  double phi(double x) const {
    if (x <= 0) return mean() - x;
    if (x >= 1) return 0.0;
    if (x <= mean()) {
      return mean() * boost::math::ibetac(alpha + 1, beta, x) - x * boost::math::ibetac(alpha, beta, x);
    }
    const double d = 1.0 - x;
    const double v = d * boost::math::ibeta(beta, alpha, d) -
                     beta / (alpha + beta) * boost::math::ibeta(beta + 1, alpha, d);
    return std::max(v, 0.0);
  }
  double quantile(double u) const { return boost::math::ibeta_inv(alpha, beta, u); }
  double mean() const { return alpha / (alpha + beta); }
  double variance() const {
    const double s = alpha + beta;
    return alpha * beta / (s * s * (s + 1));
  }
  double support_min() const { return 0.0; }
  double support_max() const { return 1.0; }
  double scale() const { return 1.0; }
  std::vector<double> breakpoints() const { return {0.0, 1.0}; }
};

struct Gamma {
  double alpha, eta;

  double sf(double x) const { return x <= 0 ? 1.0 : boost::math::gamma_q(alpha, x / eta); }

  double cdf(double x) const { return x <= 0 ? 0.0 : boost::math::gamma_p(alpha, x / eta); }
  double pdf(double x) const {
    if (x <= 0) return 0.0;
    return boost::math::gamma_p_derivative(alpha, x / eta) / eta;
  }
  double phi(double x) const {
    if (x <= 0) return mean() - x;
    const double z = x / eta;
    const double v = alpha * eta * boost::math::gamma_q(alpha + 1, z) - x * boost::math::gamma_q(alpha, z);
    return std::max(v, 0.0);
  }
  double quantile(double u) const { return eta * boost::math::gamma_p_inv(alpha, u); }
  double mean() const { return alpha * eta; }
  double variance() const { return alpha * eta * eta; }
  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double scale() const { return alpha * eta; }
  std::vector<double> breakpoints() const { return {0.0}; }
};

struct Frechet {
  double alpha;

  double sf(double x) const { return x <= 0 ? 1.0 : -std::expm1(-std::pow(x, -alpha)); }

  void require_mean() const {
    if (!(alpha > 1)) throw TailNotIntegrable("Frechet needs alpha > 1 for a finite mean");
  }
  double cdf(double x) const { return x <= 0 ? 0.0 : std::exp(-std::pow(x, -alpha)); }
  double pdf(double x) const {
    if (x <= 0) return 0.0;
    const double z = std::pow(x, -alpha);
    return alpha * z / x * std::exp(-z);
  }
  // E[X; X > x] = lower incomplete gamma(1 - 1/alpha, x^-alpha).
  double phi(double x) const {
    require_mean();
    if (x <= 0) return mean() - x;
    const double z = std::pow(x, -alpha);
    const double v = boost::math::tgamma_lower(1.0 - 1.0 / alpha, z) + x * std::expm1(-z);
    return std::max(v, 0.0);
  }
  double quantile(double u) const { return std::pow(-std::log(u), -1.0 / alpha); }
  double mean() const {
    require_mean();
    return std::tgamma(1.0 - 1.0 / alpha);
  }
  double variance() const {
    if (!(alpha > 2)) throw SecondMomentInfinite("Frechet needs alpha > 2 for a finite variance");
    const double g1 = std::tgamma(1.0 - 1.0 / alpha);
    return std::tgamma(1.0 - 2.0 / alpha) - g1 * g1;
  }
  double support_min() const { return 0.0; }
  double support_max() const { return kInf; }
  double scale() const { return 1.0; }
  std::vector<double> breakpoints() const { return {0.0}; }
};

/// Piecewise-linear CDF through (x_i, F_i). F jumps from 0 to F_0 at x_0 and
/// from F_last to 1 at x_last when those ends are not 0 and 1.
struct Tabulated {
  struct Data {
    std::vector<double> x, F;
    std::vector<double> phi_at;   // phi(x_i)
    std::vector<double> tail_at;  // I(x_i)
    double top = 0.0;             // sup{x : F(x) < 1}
  };
  std::shared_ptr<const Data> data;

  static Tabulated make(std::vector<double> x, std::vector<double> F) {
    if (x.size() != F.size() || x.size() < 2) throw DomainError("tabulated CDF needs >= 2 points");
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]) || !(F[i] >= 0.0 && F[i] <= 1.0)) {
        throw DomainError("tabulated CDF values must be finite with F in [0,1]");
      }
      if (i > 0 && !(x[i] > x[i - 1])) throw DomainError("tabulated x must be strictly increasing");
      if (i > 0 && F[i] < F[i - 1]) throw DomainError("tabulated F must be nondecreasing");
    }
    auto d = std::make_shared<Data>();
    const std::size_t n = x.size();
    d->phi_at.assign(n, 0.0);
    d->tail_at.assign(n, 0.0);
    // phi is quadratic on each segment, so Simpson's rule integrates it exactly.
    for (std::size_t i = n - 1; i-- > 0;) {
      const double h = x[i + 1] - x[i];
      const double s0 = 1.0 - F[i], s1 = 1.0 - F[i + 1];
      d->phi_at[i] = d->phi_at[i + 1] + 0.5 * h * (s0 + s1);
      const double phi_mid = d->phi_at[i + 1] + 0.25 * h * (0.5 * (s0 + s1) + s1);
      d->tail_at[i] = d->tail_at[i + 1] + h / 6.0 * (d->phi_at[i] + 4.0 * phi_mid + d->phi_at[i + 1]);
    }
    d->top = x.back();
    for (std::size_t i = 0; i < n; ++i) {
      if (F[i] >= 1.0) {
        d->top = x[i];
        break;
      }
    }
    d->x = std::move(x);
    d->F = std::move(F);
    return Tabulated{std::move(d)};
  }

  const std::vector<double>& xs() const { return data->x; }
  const std::vector<double>& Fs() const { return data->F; }

  // Index i with x_i <= x < x_{i+1}; requires x_0 <= x < x_last.
  std::size_t segment(double x) const {
    const auto& g = data->x;
    auto it = std::upper_bound(g.begin(), g.end(), x);
    return static_cast<std::size_t>(it - g.begin()) - 1;
  }
  double cdf(double x) const {
    const auto& g = data->x;
    const auto& F = data->F;
    if (x < g.front()) return 0.0;
    if (x >= g.back()) return 1.0;
    const std::size_t i = segment(x);
    return F[i] + (F[i + 1] - F[i]) * (x - g[i]) / (g[i + 1] - g[i]);
  }
  double sf(double x) const { return 1.0 - cdf(x); }
  bool has_atoms() const { return data->F.front() > 0.0 || data->F.back() < 1.0; }
  double pdf(double x) const {
    if (has_atoms()) throw NoDensity("tabulated CDF has point masses");
    const auto& g = data->x;
    if (x < g.front() || x >= g.back()) return 0.0;
    const std::size_t i = segment(x);
    return (data->F[i + 1] - data->F[i]) / (g[i + 1] - g[i]);
  }
  double phi(double x) const {
    const auto& g = data->x;
    if (x < g.front()) return data->phi_at.front() + (g.front() - x);
    if (x >= g.back()) return 0.0;
    const std::size_t i = segment(x);
    const double s_x = 1.0 - cdf(x), s1 = 1.0 - data->F[i + 1];
    return data->phi_at[i + 1] + 0.5 * (g[i + 1] - x) * (s_x + s1);
  }
  std::optional<double> tail_integral(double x) const {
    const auto& g = data->x;
    if (x < g.front()) {
      const double d = g.front() - x;
      return data->tail_at.front() + data->phi_at.front() * d + 0.5 * d * d;
    }
    if (x >= g.back()) return 0.0;
    const std::size_t i = segment(x);
    const double mid = 0.5 * (x + g[i + 1]);
    return data->tail_at[i + 1] + (g[i + 1] - x) / 6.0 * (phi(x) + 4.0 * phi(mid) + data->phi_at[i + 1]);
  }
  // Inverse of the piecewise-linear CDF: binary search for the bracketing
  // grid cell, then invert the linear piece.
  double quantile(double u) const {
    const auto& g = data->x;
    const auto& F = data->F;
    if (u <= F.front()) return g.front();
    auto it = std::lower_bound(F.begin(), F.end(), u);
    if (it == F.end()) return g.back();
    const std::size_t i = static_cast<std::size_t>(it - F.begin());
    return g[i - 1] + (u - F[i - 1]) / (F[i] - F[i - 1]) * (g[i] - g[i - 1]);
  }
  double mean() const { return data->x.front() + data->phi_at.front(); }
  double variance() const {
    const double p = data->phi_at.front();
    return std::max(0.0, 2.0 * data->tail_at.front() - p * p);
  }
  double support_min() const { return data->x.front(); }
  double support_max() const { return data->top; }
  double scale() const { return std::max(1e-300, data->x.back() - data->x.front()); }
  std::vector<double> breakpoints() const { return data->x; }
};

}  // namespace family

using Family = std::variant<family::Uniform, family::Exponential, family::Pareto, family::Beta,
                            family::Gamma, family::Frechet, family::Tabulated>;

enum class FamilyKind { Uniform, Exponential, Pareto, Beta, Gamma, Frechet, Tabulated };

/// Offer distribution F of the i.i.d. bids. Immutable value type.
class OfferModel {
 public:
  static OfferModel uniform(double a, double b) {
    if (!(std::isfinite(a) && std::isfinite(b) && b > a)) throw DomainError("uniform needs finite a < b");
    return OfferModel(family::Uniform{a, b});
  }
  static OfferModel exponential(double eta) {
    if (!(eta > 0 && std::isfinite(eta))) throw DomainError("exponential needs eta > 0");
    return OfferModel(family::Exponential{eta});
  }
  static OfferModel pareto(double xm, double alpha) {
    if (!(xm > 0 && alpha > 0)) throw DomainError("pareto needs x_m > 0 and alpha > 0");
    return OfferModel(family::Pareto{xm, alpha});
  }
  static OfferModel beta(double alpha, double beta) {
    if (!(alpha > 0 && beta > 0)) throw DomainError("beta needs alpha, beta > 0");
    return OfferModel(family::Beta{alpha, beta});
  }
  static OfferModel gamma(double alpha, double eta) {
    if (!(alpha > 0 && eta > 0)) throw DomainError("gamma needs alpha, eta > 0");
    return OfferModel(family::Gamma{alpha, eta});
  }
  static OfferModel frechet(double alpha) {
    if (!(alpha > 0)) throw DomainError("frechet needs alpha > 0");
    return OfferModel(family::Frechet{alpha});
  }
  static OfferModel tabulated(std::vector<double> x, std::vector<double> F) {
    return OfferModel(family::Tabulated::make(std::move(x), std::move(F)));
  }

  const Family& family() const { return family_; }
  FamilyKind kind() const { return static_cast<FamilyKind>(family_.index()); }
  template <class T>
  const T* as() const { return std::get_if<T>(&family_); }

  double cdf(double x) const {
    return std::visit([x](const auto& f) { return f.cdf(x); }, family_);
  }
  /// 1 - F(x), accurate far into the right tail.
  double sf(double x) const {
    return std::visit([x](const auto& f) { return f.sf(x); }, family_);
  }
  double pdf(double x) const {
    return std::visit([x](const auto& f) { return f.pdf(x); }, family_);
  }
  bool has_density() const {
    if (auto t = as<family::Tabulated>()) return !t->has_atoms();
    return true;
  }
  double phi(double x) const {
    return std::visit([x](const auto& f) { return f.phi(x); }, family_);
  }

  /// int_x^inf phi(u) du. Closed form for the elementary families and the
  /// tabulated model; adaptive quadrature of phi otherwise.
  double phi_tail_integral(double x) const {
    require_second_moment();
    return std::visit(
        [&](const auto& f) -> double {
          if constexpr (requires { f.tail_integral(x); }) {
            return *f.tail_integral(x);
          } else {
            const double s = f.support_min();
            if (x < s) {
              const double base = quad_tail_integral(f, s);
              return base + f.mean() * (s - x) - 0.5 * (s * s - x * x);
            }
            return quad_tail_integral(f, x);
          }
        },
        family_);
  }

  double quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile needs 0 < u < 1");
    return std::visit([u](const auto& f) { return f.quantile(u); }, family_);
  }

  /// Var[(X - w)_+] = 2 I(w) - phi(w)^2.
  double var_excess(double w) const {
    const double p = phi(w);
    return std::max(0.0, 2.0 * phi_tail_integral(w) - p * p);
  }

  double mean() const {
    return std::visit([](const auto& f) { return f.mean(); }, family_);
  }
  double variance() const {
    return std::visit([](const auto& f) { return f.variance(); }, family_);
  }
  double support_min() const {
    return std::visit([](const auto& f) { return f.support_min(); }, family_);
  }
  /// M = sup{x : F(x) < 1}.
  double support_max() const {
    return std::visit([](const auto& f) { return f.support_max(); }, family_);
  }
  double scale() const {
    return std::visit([](const auto& f) { return f.scale(); }, family_);
  }
  std::vector<double> breakpoints() const {
    return std::visit([](const auto& f) { return f.breakpoints(); }, family_);
  }

  bool second_moment_finite() const {
    if (auto p = as<family::Pareto>()) return p->alpha > 2;
    if (auto f = as<family::Frechet>()) return f->alpha > 2;
    return true;
  }
  void require_second_moment() const {
    if (!second_moment_finite()) {
      throw SecondMomentInfinite("E[X_+^2] is infinite for this offer distribution");
    }
  }

  /// E[(X - x0)_+^p] = p int_{x0}^inf (u - x0)^{p-1} (1 - F(u)) du, p > 0.
  double excess_moment(double p, double x0) const {
    if (auto pa = as<family::Pareto>(); pa && !(p < pa->alpha)) {
      throw MomentInfinite("Pareto moment of order p >= alpha");
    }
    if (auto fr = as<family::Frechet>(); fr && !(p < fr->alpha)) {
      throw MomentInfinite("Frechet moment of order p >= alpha");
    }
    const double top = support_max();
    if (!(x0 < top)) return 0.0;
    auto integrand = [&](double u) { return p * std::pow(u - x0, p - 1) * sf(u); };
    return integrate_excess(integrand, x0, 1e-12);
  }

  /// E[exp(delta (X - x0)_+)] = 1 + delta int_{x0}^inf e^{delta(u-x0)} (1-F(u)) du.
  double excess_mgf(double delta, double x0) const {
    if (!(delta > 0)) throw DomainError("mgf needs delta > 0");
    const bool bounded = std::isfinite(support_max());
    if (!bounded) {
      if (auto e = as<family::Exponential>(); e && !(delta < 1.0 / e->eta)) {
        throw MgfInfinite("exponential mgf needs delta < 1/eta");
      }
      if (auto g = as<family::Gamma>(); g && !(delta < 1.0 / g->eta)) {
        throw MgfInfinite("gamma mgf needs delta < 1/eta");
      }
      if (as<family::Pareto>() || as<family::Frechet>()) {
        throw MgfInfinite("power-law tails have no exponential moments");
      }
    }
    if (!(x0 < support_max())) return 1.0;
    auto integrand = [&](double u) {
      const double s = sf(u);
      return s == 0.0 ? 0.0 : std::exp(delta * (u - x0) + std::log(s));
    };
    return 1.0 + delta * integrate_excess(integrand, x0, 1e-12);
  }

  /// Short human-readable identifier, e.g. "uniform(a=1,b=3)".
  std::string describe() const;

 private:
  explicit OfferModel(Family f) : family_(std::move(f)) {}

  template <class Fam>
  static double quad_tail_integral(const Fam& f, double x) {
    const double top = f.support_max();
    if (!(x < top)) return 0.0;
    numerics::QuadOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-300;
    opt.tail_scale = std::max(f.scale(), std::fabs(x) * 0.25);
    auto g = [&](double u) { return f.phi(u); };
    return numerics::integrate(g, x, top, opt).value;
  }

  template <class G>
  double integrate_excess(G& g, double x0, double rel_tol) const {
    numerics::QuadOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-300;
    opt.tail_scale = std::max(scale(), 0.25 * std::fabs(x0));
    std::vector<double> cuts{x0, support_max()};
    cuts = numerics::merge_breaks(cuts, breakpoints());
    return numerics::integrate_partition(g, cuts, opt).value;
  }

  Family family_;
};


inline std::string OfferModel::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Uniform>) {
          os << "uniform(a=" << f.a << ",b=" << f.b << ")";
        } else if constexpr (std::is_same_v<T, family::Exponential>) {
          os << "exponential(eta=" << f.eta << ")";
        } else if constexpr (std::is_same_v<T, family::Pareto>) {
          os << "pareto(xm=" << f.xm << ",alpha=" << f.alpha << ")";
        } else if constexpr (std::is_same_v<T, family::Beta>) {
          os << "beta(alpha=" << f.alpha << ",beta=" << f.beta << ")";
        } else if constexpr (std::is_same_v<T, family::Gamma>) {
          os << "gamma(alpha=" << f.alpha << ",eta=" << f.eta << ")";
        } else if constexpr (std::is_same_v<T, family::Frechet>) {
          os << "frechet(alpha=" << f.alpha << ")";
        } else {
          os << "tabulated(n=" << f.xs().size() << ")";
        }
      },
      family_);
  return os.str();
}

/// Reads a two-column `x,F` CSV with a header row.
inline OfferModel load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  {
    char* end = nullptr;
    std::strtod(line.c_str(), &end);
    if (end != line.c_str()) throw ParseError(path + ": header row x,F required");
  }
  std::vector<double> xs, Fs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected two columns");
    }
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
      xs.push_back(std::stod(a, &used));
      Fs.push_back(std::stod(b, &used));
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  return OfferModel::tabulated(std::move(xs), std::move(Fs));
}

enum class ResidualKind { Zero, SameAsOffer, Custom };

/// Salvage-value distribution F_0: what the seller gets when the deadline
/// passes without an accepted offer.
class ResidualSpec {
 public:
  /// Sale is lost: X_0 = 0 almost surely.
  static ResidualSpec zero() { return ResidualSpec(ResidualKind::Zero, std::nullopt); }
  /// Accept the first offer after the deadline: F_0 = F.
  static ResidualSpec same_as(const OfferModel& offer) {
    return ResidualSpec(ResidualKind::SameAsOffer, offer);
  }
  static ResidualSpec custom(const OfferModel& model) { return ResidualSpec(ResidualKind::Custom, model); }

  ResidualKind kind() const { return kind_; }
  double mean() const { return model_ ? model_->mean() : 0.0; }
  double variance() const { return model_ ? model_->variance() : 0.0; }
  double cdf(double x) const {
    if (!model_) return x >= 0.0 ? 1.0 : 0.0;
    return model_->cdf(x);
  }
  bool has_density() const { return model_ && model_->has_density(); }
  double pdf(double x) const {
    if (!model_) throw NoDensity("zero residual is a point mass");
    return model_->pdf(x);
  }
  double sample(double u) const { return model_ ? model_->quantile(u) : 0.0; }
  const std::optional<OfferModel>& model() const { return model_; }

 private:
  ResidualSpec(ResidualKind k, std::optional<OfferModel> m) : kind_(k), model_(std::move(m)) {}
  ResidualKind kind_;
  std::optional<OfferModel> model_;
};

}  // namespace sellopt
