#pragma once

#include <cmath>
#include <utility>

#include "sellopt/errors.hpp"

namespace sellopt::numerics {

/// Newton iteration kept inside a bracket for an increasing function g with
/// known derivative: falls back to bisection whenever the Newton step leaves
/// the bracket. `g` returns {value, derivative}.
template <class G>
double newton_bracketed(G&& g, double lo, double hi, double x_tol = 1e-15, int max_iter = 100) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const auto [val, der] = g(x);
    if (val == 0.0) return x;
    if (val > 0) hi = x; else lo = x;
    double next = (der > 0 && std::isfinite(der)) ? x - val / der : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::fabs(next - x);
    x = next;
    if (step <= x_tol * std::max(1.0, std::fabs(x)) || hi - lo <= x_tol * std::max(1.0, std::fabs(x))) {
      return x;
    }
  }
  return x;
}

}  // namespace sellopt::numerics
