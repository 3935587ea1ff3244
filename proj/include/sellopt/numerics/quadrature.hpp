#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature with global error control.
//
// Infinite ranges are mapped onto finite ones with u = a + L*s/(1-s), which
// never evaluates the integrand at s = 1. Interior breakpoints start the
// adaptive loop from a caller-chosen partition; `geometric_breaks` builds
// such a partition for integrands that blow up (integrably or not) just past
// the upper limit.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace sellopt::numerics {

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_intervals = 4000;
  // Length scale of the s/(1-s) map used for infinite limits.
  double tail_scale = 1.0;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  int evaluations = 0;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One 15-point Kronrod rule with the QUADPACK error heuristic.
template <class F>
Panel gk15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::fabs(half);
  double fv1[7], fv2[7];
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::fabs(resk);
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::fabs(f1) + std::fabs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  }
  const double result = resk * half;
  resabs *= abs_half;
  resasc *= abs_half;
  double err = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return {a, b, result, err};
}

template <class F>
QuadResult adaptive(F& f, const std::vector<double>& cuts, const QuadOptions& opt) {
  std::priority_queue<Panel> heap;
  QuadResult out;
  double total = 0.0, total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] == cuts[i]) continue;
    Panel p = gk15(f, cuts[i], cuts[i + 1]);
    out.evaluations += 15;
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  int intervals = static_cast<int>(heap.size());
  // Panels only a few hundred ulps wide resolve nothing but rounding noise in
  // the abscissae; they are frozen and excluded from the error budget.
  std::vector<Panel> frozen;
  double frozen_err = 0.0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  while (!heap.empty()) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::fabs(total));
    if (total_err - frozen_err <= target) break;
    if (intervals >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double width = std::fabs(worst.b - worst.a);
    if (width <= 512 * eps * std::max(std::fabs(worst.a), std::fabs(worst.b)) ||
        !(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      frozen.push_back(worst);
      frozen_err += worst.error;
      out.converged = false;
      continue;
    }
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed the drift of the running update.
  total = 0.0;
  total_err = 0.0;
  for (const Panel& p : frozen) {
    total += p.value;
    total_err += p.error;
  }
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = total_err;
  return out;
}

}  // namespace detail

/// Integrates f over the partition `cuts` (sorted, first and last entries are
/// the limits). Either limit may be infinite; interior cuts must be finite.
template <class F>
QuadResult integrate_partition(F&& f, std::vector<double> cuts, const QuadOptions& opt = {}) {
  if (cuts.size() < 2) return {};
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double a = cuts.front();
  const double b = cuts.back();
  if (a == b) return {};
  if (std::isinf(a) && std::isinf(b)) {
    // Split at an interior finite point.
    std::vector<double> interior(cuts.begin() + 1, cuts.end() - 1);
    const double pivot = interior.empty() ? 0.0 : interior.front();
    std::vector<double> lo{-inf, pivot}, hi{pivot};
    hi.insert(hi.end(), interior.begin() + (interior.empty() ? 0 : 1), interior.end());
    hi.push_back(inf);
    QuadResult r1 = integrate_partition(f, lo, opt);
    QuadResult r2 = integrate_partition(f, hi, opt);
    return {r1.value + r2.value, r1.error + r2.error, r1.converged && r2.converged,
            r1.evaluations + r2.evaluations};
  }
  const double L = opt.tail_scale;
  if (std::isinf(b)) {
    // u = c + L s/(1-s) on the last panel [c, inf).
    const double c = cuts[cuts.size() - 2];
    std::vector<double> head(cuts.begin(), cuts.end() - 1);
    QuadResult r1 = head.size() >= 2 ? integrate_partition(f, head, opt) : QuadResult{};
    auto g = [&](double s) {
      const double om = 1.0 - s;
      const double fx = f(c + L * s / om);
      return fx == 0.0 ? 0.0 : fx * L / (om * om);
    };
    std::vector<double> unit{0.0, 0.5, 0.75, 0.875, 1.0};
    QuadResult r2 = detail::adaptive(g, unit, opt);
    return {r1.value + r2.value, r1.error + r2.error, r1.converged && r2.converged,
            r1.evaluations + r2.evaluations};
  }
  if (std::isinf(a)) {
    const double c = cuts[1];
    std::vector<double> tail(cuts.begin() + 1, cuts.end());
    QuadResult r1 = tail.size() >= 2 ? integrate_partition(f, tail, opt) : QuadResult{};
    auto g = [&](double s) {
      const double om = 1.0 - s;
      const double fx = f(c - L * s / om);
      return fx == 0.0 ? 0.0 : fx * L / (om * om);
    };
    std::vector<double> unit{0.0, 0.5, 0.75, 0.875, 1.0};
    QuadResult r2 = detail::adaptive(g, unit, opt);
    return {r1.value + r2.value, r1.error + r2.error, r1.converged && r2.converged,
            r1.evaluations + r2.evaluations};
  }
  return detail::adaptive(f, cuts, opt);
}

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  if (a > b) {
    QuadResult r = integrate(f, b, a, opt);
    r.value = -r.value;
    return r;
  }
  return integrate_partition(f, std::vector<double>{a, b}, opt);
}

/// Partition of [a, b] whose panels halve in width toward `singular`
/// (singular > b is the point where the integrand blows up). Panel k spans
/// [s - d 2^-k, s - d 2^-(k+1)] with d = s - a, truncated at b.
inline std::vector<double> geometric_breaks(double a, double b, double singular,
                                            double ratio = 0.5) {
  std::vector<double> cuts{a};
  if (!(singular > b) || !std::isfinite(singular)) {
    cuts.push_back(b);
    return cuts;
  }
  double gap = singular - a;
  for (int k = 0; k < 200; ++k) {
    gap *= ratio;
    const double x = singular - gap;
    if (!(x < b) || !(x > cuts.back())) break;
    cuts.push_back(x);
  }
  cuts.push_back(b);
  return cuts;
}

/// Merges extra breakpoints lying strictly inside (front, back) into `cuts`.
inline std::vector<double> merge_breaks(std::vector<double> cuts, const std::vector<double>& extra) {
  if (cuts.size() < 2) return cuts;
  const double lo = cuts.front(), hi = cuts.back();
  for (double x : extra) {
    if (x > lo && x < hi) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace sellopt::numerics
