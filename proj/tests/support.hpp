#pragma once

// Test-side oracles, written independently of the library's numerics, and
// seeded generators for property tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sellopt.hpp"

namespace oracle {

/// Recursive adaptive Simpson with Richardson correction.
inline double simpson(const std::function<double(double)>& f, double a, double b, double eps = 1e-12,
                      int depth = 48) {
  struct Rec {
    const std::function<double(double)>& f;
    double step(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) const {
      const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6 * (fa + 4 * flm + fm);
      const double right = (b - m) / 6 * (fm + 4 * frm + fb);
      const double diff = left + right - whole;
      if (depth <= 0 || std::fabs(diff) <= 15 * eps) return left + right + diff / 15;
      return step(a, m, fa, flm, fm, left, eps / 2, depth - 1) + step(m, b, fm, frm, fb, right, eps / 2, depth - 1);
    }
  } rec{f};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec.step(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), eps, depth);
}

/// Sum of adaptive Simpson over consecutive cuts.
inline double simpson_cuts(const std::function<double(double)>& f, const std::vector<double>& cuts,
                           double eps = 1e-12) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s += simpson(f, cuts[i], cuts[i + 1], eps);
  return s;
}

/// int_a^inf f over doubling blocks [a + w(2^k - 1), a + w(2^{k+1} - 1)] until
/// a block contributes less than eps.
inline double simpson_tail(const std::function<double(double)>& f, double a, double w, double eps = 1e-13) {
  double s = 0, lo = a, width = w;
  for (int k = 0; k < 200; ++k) {
    const double part = simpson(f, lo, lo + width, eps);
    s += part;
    if (std::fabs(part) <= eps * std::max(1.0, std::fabs(s)) && k > 3) break;
    lo += width;
    width *= 2;
  }
  return s;
}

/// Composite trapezoid with n panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, long n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (long i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

/// x in [lo, hi] with f(x) = target for increasing f, by bisection.
inline double bisect(const std::function<double(double)>& f, double target, double lo, double hi) {
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++i) {
    const double m = 0.5 * (lo + hi);
    (f(m) < target ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle

namespace gen {

/// Hand-rolled random parameter generator with a fixed seed per test.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  /// One of the six built-in families with parameters in a moderate range.
  /// Tail-heavy families keep alpha > 2 so variances exist.
  sellopt::OfferModel offer() {
    switch (index(6)) {
      case 0: {
        const double a = uniform(0, 2);
        return sellopt::OfferModel::uniform(a, a + uniform(0.5, 3));
      }
      case 1: return sellopt::OfferModel::exponential(uniform(0.5, 3));
      case 2: return sellopt::OfferModel::pareto(uniform(0.5, 2), uniform(2.2, 5));
      case 3: return sellopt::OfferModel::beta(uniform(1, 4), uniform(1, 4));
      case 4: return sellopt::OfferModel::gamma(uniform(1, 4), uniform(0.5, 2));
      default: return sellopt::OfferModel::frechet(uniform(2.5, 5));
    }
  }

  std::vector<double> sorted_points(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    std::sort(v.begin(), v.end());
    return v;
  }
};

}  // namespace gen

/// Upper end of a reasonable evaluation range for x.
inline double probe_hi(const sellopt::OfferModel& F) {
  return std::isfinite(F.support_max()) ? F.support_max() : F.quantile(1 - 1e-6);
}
