// Simulates the threshold policy and compares sample moments of the sale
// price and time to sale with their analytic values.

#include <cstdio>
#include <cstdlib>

#include "sellopt/simulator.hpp"
#include "sellopt/stop_time.hpp"

int main(int argc, char** argv) {
  using namespace sellopt;
  const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 200000;
  const OfferModel F = OfferModel::exponential(2);
  const ResidualSpec residual = ResidualSpec::same_as(F);
  const PolicyCurve curve(F, F.mean(), 1.0);
  const double t = 10;

  const SimSummary s = summarize(simulate_batch({curve, residual, t, n, 1, 0}));
  auto row = [](const char* what, double sample, double se, double exact) {
    std::printf("%-16s %12.6f +- %-10.6f %12.6f  z=%+.2f\n", what, sample, se, exact, (sample - exact) / se);
  };
  std::printf("%s, t=%g, n=%zu\n%-16s %26s %12s\n", F.describe().c_str(), t, n, "", "sample", "analytic");
  row("E[S_t]", s.price.mean, s.price.se_mean, curve.mu(t));
  row("Var[S_t]", s.price.var, s.price.se_var, price_var(curve, residual, t));
  row("E[T_t]", s.time.mean, s.time.se_mean, stop_mean(curve, t));
  row("Var[T_t]", s.time.var, s.time.se_var, stop_var(curve, t));
  row("P(T_t = t)", s.atom_freq, s.atom_se, atom_prob(curve, t));
}
