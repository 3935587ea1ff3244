#pragma once

// Scalar initial value problems y' = f(t, y) on odeint's Dormand-Prince 5(4)
// controlled stepper.

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "sellopt/errors.hpp"

namespace sellopt::numerics {

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  // Steps below min_step_factor * |t_end - t0| raise StepUnderflow.
  double min_step_factor = 1e-14;
  long max_steps = 10'000'000;
};

template <class F>
double dormand_prince(F&& f, double t0, double y0, double t_end, const OdeOptions& opt = {}) {
  namespace odeint = boost::numeric::odeint;
  using Stepper = odeint::runge_kutta_dopri5<double, double, double, double, odeint::vector_space_algebra>;
  if (t_end == t0) return y0;
  const double span = t_end - t0;
  const double dir = span > 0 ? 1.0 : -1.0;
  const double h_min = opt.min_step_factor * std::fabs(span);

  auto stepper = odeint::make_controlled<Stepper>(opt.abs_tol, opt.rel_tol);
  auto rhs = [&](const double& y, double& dy, double t) { dy = f(t, y); };
  double t = t0, y = y0;
  double h = dir * std::min(std::fabs(span), 1e-3 * std::max(1.0, std::fabs(span)));
  for (long step = 0; step < opt.max_steps; ++step) {
    if (dir * (t_end - t) <= h_min) return y;
    if (dir * (t + h - t_end) > 0) h = t_end - t;
    if (stepper.try_step(rhs, y, t, h) == odeint::fail && std::fabs(h) < h_min) {
      throw StepUnderflow("adaptive step fell below " + std::to_string(h_min) + " at t=" + std::to_string(t));
    }
  }
  throw StepUnderflow("step budget exhausted");
}

}  // namespace sellopt::numerics
