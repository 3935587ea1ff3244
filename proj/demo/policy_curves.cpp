// Prints the optimal threshold mu(t) and the expected time to sale for a few
// offer laws, each with salvage value equal to the mean offer.

#include <cstdio>

#include "sellopt/policy.hpp"
#include "sellopt/stop_time.hpp"

int main() {
  using sellopt::OfferModel;
  const OfferModel models[] = {OfferModel::uniform(1, 3), OfferModel::exponential(2), OfferModel::pareto(1, 3),
                               OfferModel::beta(2, 2), OfferModel::gamma(2, 1)};
  std::printf("%-28s %8s %12s %12s %12s\n", "offer law", "t", "mu(t)", "E[T_t]", "P(T_t = t)");
  for (const auto& F : models) {
    const sellopt::PolicyCurve curve(F, F.mean(), 1.0);
    for (double t : {1.0, 10.0, 100.0}) {
      std::printf("%-28s %8g %12.6f %12.6f %12.6f\n", F.describe().c_str(), t, curve.mu(t),
                  sellopt::stop_mean(curve, t), sellopt::atom_prob(curve, t));
    }
  }
}
