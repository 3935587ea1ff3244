#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace sellopt;

namespace {

// E[T] and E[T^2] from the survival function, P(T > r) = 1 - H(r) on [0, t).
std::pair<double, double> moments_from_cdf(const PolicyCurve& c, double t) {
  const StopLaw law(c, t);
  auto s1 = [&](double r) { return 1 - law.cdf(r); };
  auto s2 = [&](double r) { return 2 * r * (1 - law.cdf(r)); };
  return {oracle::simpson(s1, 0, t, 1e-11), oracle::simpson(s2, 0, t, 1e-11)};
}

}  // namespace

TEST(StopTime, UniformExamples) {
  const PolicyCurve c(OfferModel::uniform(1, 3), 2.0, 1.0);
  EXPECT_DOUBLE_EQ(c.uniform_k(), 4.0);
  EXPECT_NEAR(atom_prob(c, 4), 0.25, 1e-15);
  EXPECT_NEAR(stop_mean(c, 4), 7.0 / 3, 1e-14);
  EXPECT_NEAR(stop_cdf(c, 4, 2), 0.4375, 1e-15);
  // E[T^2] = int_0^4 2r (1 - r/8)^2 dr = 22/3, so Var = 22/3 - 49/9.
  EXPECT_NEAR(stop_var(c, 4), 17.0 / 9, 1e-14);
}

TEST(StopTime, ExponentialExamples) {
  const PolicyCurve c(OfferModel::exponential(2), 2.0, 1.0);
  const double e = std::exp(1.0);
  EXPECT_NEAR(atom_prob(c, 10), e / (10 + e), 1e-15);
  EXPECT_NEAR(atom_prob(c, 10), 0.2137302715195763, 1e-15);
  EXPECT_NEAR(stop_mean(c, 10), 5 * (1 + e / (10 + e)), 1e-14);
  EXPECT_NEAR(stop_mean(c, 10), 6.068651357597882, 1e-13);
  EXPECT_NEAR(stop_var(c, 10), 10.753488801230475, 1e-12);
}

TEST(StopTime, ExponentialCdfIsLinear) {
  const PolicyCurve c(OfferModel::exponential(2), 2.0, 1.0);
  const double e = std::exp(1.0);
  for (double r : io::linspace(0, 10, 101)) {
    if (r >= 10) continue;
    EXPECT_NEAR(stop_cdf(c, 10, r), r / (10 + e), 1e-12);
    EXPECT_NEAR(StopLaw(c, 10).cdf(r), r / (10 + e), 1e-12);
  }
}

TEST(StopTime, ParetoMatchesGenericPath) {
  const PolicyCurve c(OfferModel::pareto(1, 3), 1.5, 1.0);
  for (double t : {0.5, 2.0, 10.0, 30.0, 100.0}) {
    const StopLaw law(c, t), num(c, t, Path::Numeric);
    const auto m = *closed::time_moments(c, t);
    EXPECT_NEAR(law.atom(), m.atom, 1e-12);
    EXPECT_NEAR(law.mean(), m.mean, 1e-10 * m.mean);
    EXPECT_NEAR(law.var(), m.var, 1e-8 * m.var) << t;
    EXPECT_NEAR(num.atom(), m.atom, 1e-8);
    EXPECT_NEAR(num.mean(), m.mean, 1e-6 * m.mean);
    EXPECT_NEAR(num.var(), m.var, 1e-6 * m.var) << t;
  }
}

TEST(StopTime, FrozenGenericValues) {
  // 20-digit quadrature with closed-form phi.
  const PolicyCurve b(OfferModel::beta(2, 2), 0.5, 1.0);
  EXPECT_NEAR(atom_prob(b, 10), 0.09925070869197884, 1e-12);
  EXPECT_NEAR(stop_mean(b, 10), 4.9023069686375048, 1e-10);
  EXPECT_NEAR(stop_var(b, 10), 9.84972609428049, 1e-8);
  const PolicyCurve g(OfferModel::gamma(2, 1), 2.0, 1.0);
  EXPECT_NEAR(atom_prob(g, 10), 0.18564292751287466, 1e-12);
  EXPECT_NEAR(stop_mean(g, 10), 5.8676767737891782, 1e-10);
  EXPECT_NEAR(stop_var(g, 10), 10.6263555160443, 1e-8);
}

TEST(StopTime, CdfPlusAtomIsOne) {
  gen::Gen g(41);
  for (int trial = 0; trial < 20; ++trial) {
    const OfferModel F = g.offer();
    const PolicyCurve c(F, F.mean(), g.uniform(0.5, 2));
    const double t = g.uniform(0.5, 50);
    const double below = stop_cdf(c, t, std::nextafter(t, 0.0));
    EXPECT_NEAR(below + atom_prob(c, t), 1.0, 1e-9) << F.describe() << " t=" << t;
    EXPECT_EQ(stop_cdf(c, t, t), 1.0);
    EXPECT_EQ(stop_cdf(c, t, -1e-9), 0.0);
    EXPECT_EQ(stop_cdf(c, t, 0), 0.0);
  }
}

TEST(StopTime, CdfIsNondecreasing) {
  gen::Gen g(42);
  for (int trial = 0; trial < 20; ++trial) {
    const OfferModel F = g.offer();
    const PolicyCurve c(F, F.mean(), 1.0);
    const double t = g.uniform(0.5, 50);
    double prev = 0;
    for (double r : g.sorted_points(0, t, 100)) {
      const double v = stop_cdf(c, t, r);
      EXPECT_GE(v, prev) << F.describe();
      prev = v;
    }
  }
}

TEST(StopTime, MomentsMatchIntegratedSurvival) {
  gen::Gen g(43);
  for (int trial = 0; trial < 12; ++trial) {
    const OfferModel F = g.offer();
    const double lambda = g.uniform(0.5, 2);
    const PolicyCurve c(F, F.mean(), lambda);
    const double t = g.uniform(0.5, 30);
    const auto [m1, m2] = moments_from_cdf(c, t);
    const double a = atom_prob(c, t);
    const double mean = m1, var = m2 - m1 * m1;
    EXPECT_NEAR(stop_mean(c, t), mean, 1e-7 * mean) << F.describe() << " t=" << t;
    EXPECT_NEAR(stop_var(c, t), var, 1e-6 * std::max(var, 1e-3)) << F.describe() << " t=" << t;
    EXPECT_GT(a, 0);
    EXPECT_LE(a, 1);
  }
}

TEST(StopTime, ZeroHorizon) {
  const PolicyCurve c(OfferModel::uniform(1, 3), 2.0, 1.0);
  EXPECT_EQ(atom_prob(c, 0), 1.0);
  EXPECT_EQ(stop_mean(c, 0), 0.0);
  EXPECT_EQ(stop_var(c, 0), 0.0);
  const PolicyCurve b(OfferModel::beta(2, 2), 0.5, 1.0);
  EXPECT_EQ(StopLaw(b, 0).atom(), 1.0);
  EXPECT_EQ(StopLaw(b, 0).var(), 0.0);
}

TEST(StopTime, NormalizedCdf) {
  const PolicyCurve c(OfferModel::exponential(2), 2.0, 1.0);
  EXPECT_NEAR(that_cdf(c, 10, 0.5), 5 / (10 + std::exp(1.0)), 1e-15);
  EXPECT_EQ(that_cdf(c, 10, 1), 1.0);
  EXPECT_THROW(that_cdf(c, 0, 0.5), DomainError);
}

TEST(StopTime, CsvAndRecord) {
  const PolicyCurve c(OfferModel::uniform(1, 3), 2.0, 1.0);
  std::ostringstream os;
  write_stop_csv(os, c, 4, {0, 2, 4});
  EXPECT_EQ(os.str().substr(0, 4), "r,H\n");
  const auto rec = stop_record(c, 4);
  EXPECT_DOUBLE_EQ(rec["atom"].get<double>(), 0.25);
  EXPECT_NEAR(rec["mean"].get<double>(), 7.0 / 3, 1e-14);
  EXPECT_TRUE(rec.contains("var"));
  EXPECT_TRUE(rec.contains("t"));
}
