#include <gtest/gtest.h>

#include "support.hpp"

using namespace sellopt;

namespace {

std::vector<OfferModel> worked_families() {
  return {OfferModel::uniform(1, 3), OfferModel::exponential(2), OfferModel::pareto(1, 3)};
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

// Past the last sample the law is unidentified; the table parks the
// remaining mass on the last knot, so compare on [lo, hi) and at the knots.
double round_trip_error(const OfferModel& R, const std::function<double(double)>& truth, double lo, double hi) {
  double err = 0;
  auto grid = io::linspace(lo, hi, 2001);
  grid.pop_back();
  for (double x : grid) err = std::max(err, std::fabs(R.cdf(x) - truth(x)));
  const auto& tab = *R.as<family::Tabulated>();
  for (std::size_t i = 0; i < tab.xs().size(); ++i) err = std::max(err, std::fabs(tab.Fs()[i] - truth(tab.xs()[i])));
  return err;
}

}  // namespace

TEST(Policy, ClosedFormExamples) {
  const PolicyCurve u(OfferModel::uniform(0, 1), 0.5, 1.0);
  EXPECT_EQ(u.method(), PolicyMethod::ClosedFormUniform);
  for (double t : {0.0, 1.0, 4.0, 10.0, 100.0}) EXPECT_NEAR(u.mu(t), 1 - 2 / (t + 4), 1e-15);
  EXPECT_DOUBLE_EQ(u.mu(4), 0.75);

  const PolicyCurve e(OfferModel::exponential(1), 0.0, 1.0);
  EXPECT_NEAR(e.mu(std::exp(1.0) - 1), 1.0, 1e-15);
  EXPECT_NEAR(e.psi(1.0), std::exp(1.0) - 1, 1e-15);

  const PolicyCurve p(OfferModel::pareto(1, 3), 1.5, 1.0);
  EXPECT_NEAR(*p.pareto_c(), 4.0 / 9, 1e-15);
  EXPECT_EQ(p.mu(0), 1.5);
  for (double t : {1.0, 4.0, 10.0, 100.0}) EXPECT_NEAR(p.mu(t), 1.5 * std::cbrt(4 * t / 9 + 1), 1e-14);
}

TEST(Policy, PsiAtMu0IsZero) {
  for (const auto& F : worked_families()) {
    const PolicyCurve c(F, F.mean(), 1.0);
    EXPECT_EQ(c.psi(F.mean()), 0.0);
    EXPECT_EQ(c.mu(0), F.mean());
  }
}

TEST(Policy, BetaPsiMatchesTrapezoidOracle) {
  const PolicyCurve c(OfferModel::beta(2, 2), 0.5, 1.0);
  EXPECT_EQ(c.method(), PolicyMethod::NumericPsi);
  // phi(x) = (1 - x)^3 (1 + x) / 2 for Beta(2,2).
  auto inv_phi = [](double x) { return 2 / ((1 - x) * (1 - x) * (1 - x) * (1 + x)); };
  const double oracle_value = oracle::trapezoid(inv_phi, 0.5, 0.8, 1000000);
  EXPECT_NEAR(c.psi(0.8), oracle_value, 1e-9);
  EXPECT_NEAR(c.psi(0.8), 12.274653072167034, 1e-11);
}

TEST(Policy, FrozenNumericValues) {
  // 20-digit quadrature and bisection with closed-form phi.
  EXPECT_NEAR(PolicyCurve(OfferModel::beta(2, 2), 0.5, 1.0).mu(10), 0.78139598204619788, 1e-12);
  EXPECT_NEAR(PolicyCurve(OfferModel::gamma(2, 1), 2.0, 1.0).mu(10), 4.1070854859436569, 1e-11);
}

TEST(Policy, OdeExamples) {
  const PolicyCurve u(OfferModel::uniform(0, 1), 0.5, 1.0);
  EXPECT_NEAR(u.mu_ode(4), 0.75, 1e-8);
  EXPECT_EQ(u.mu_ode(0), 0.5);
  const PolicyCurve g(OfferModel::gamma(2, 1), 0.0, 1.0);
  EXPECT_NEAR(g.mu_ode(10), g.mu(10), 1e-7);
}

TEST(Policy, DerivativeAndHazardExamples) {
  const PolicyCurve u(OfferModel::uniform(0, 1), 0.5, 1.0);
  EXPECT_DOUBLE_EQ(u.mu_prime(0), 0.125);
  EXPECT_DOUBLE_EQ(u.h(0), 0.5);
  const PolicyCurve e(OfferModel::exponential(1), 0.0, 1.0);
  EXPECT_DOUBLE_EQ(e.mu_prime(0), 1.0);
  EXPECT_DOUBLE_EQ(e.h(0), 1.0);
  EXPECT_NEAR(u.mu_prime(1e6), 2 / ((1e6 + 4) * (1e6 + 4)), 1e-24);
}

TEST(Policy, LowSalvageUniformBreakpoint) {
  const PolicyCurve c(OfferModel::uniform(1, 3), 0.2, 1.3);
  ASSERT_EQ(c.method(), PolicyMethod::ClosedFormUniformLowSalvage);
  const double ts = std::log((1 + 3 - 2 * 0.2) / 2.0) / 1.3;
  EXPECT_NEAR(*c.t_star(), ts, 1e-15);
  EXPECT_NEAR(c.mu(ts), 1.0, 1e-14);
  const PolicyCurve n(OfferModel::uniform(1, 3), 0.2, 1.3, true);
  for (double t : {0.1, ts, 1.0, 5.0, 50.0}) EXPECT_LE(rel(n.mu(t), c.mu(t)), 1e-8) << t;
}

TEST(Policy, Validation) {
  const auto F = OfferModel::uniform(0, 1);
  EXPECT_THROW(PolicyCurve(F, 0.5, 0.0), DomainError);
  EXPECT_THROW(PolicyCurve(F, 1.0, 1.0), DomainError);
  EXPECT_THROW(PolicyCurve(F, 0.5, 1.0).mu(-1), DomainError);
  EXPECT_THROW(PolicyCurve(F, 0.5, 1.0).psi(1.0), DomainError);
}

TEST(Policy, SaturationNearTopIsReported) {
  // M - mu(t) ~ t^-10 falls below double resolution of M.
  const PolicyCurve c(OfferModel::beta(1, 0.1), OfferModel::beta(1, 0.1).mean(), 1.0);
  EXPECT_NO_THROW(c.mu(1));
  EXPECT_THROW(c.mu(1e4), PrecisionLoss);
}

TEST(Policy, NumericPathMatchesClosedForms) {
  gen::Gen g(21);
  for (int trial = 0; trial < 9; ++trial) {
    OfferModel F = worked_families()[trial % 3];
    if (trial >= 3) {
      if (trial % 3 == 0) {
        const double a = g.uniform(0, 2);
        F = OfferModel::uniform(a, a + g.uniform(0.5, 3));
      } else if (trial % 3 == 1) {
        F = OfferModel::exponential(g.uniform(0.5, 3));
      } else {
        F = OfferModel::pareto(g.uniform(0.5, 2), g.uniform(1.5, 5));
      }
    }
    const double lambda = g.uniform(0.5, 2);
    const PolicyCurve closed(F, F.mean(), lambda), numeric(F, F.mean(), lambda, true);
    ASSERT_TRUE(closed.closed_form());
    for (double t : io::linspace(0, 100, 41)) {
      EXPECT_LE(rel(numeric.mu(t), closed.mu(t)), 1e-8) << F.describe() << " t=" << t;
      EXPECT_LE(rel(closed.mu_ode(t), closed.mu(t)), 1e-7) << F.describe() << " t=" << t;
    }
  }
}

TEST(Policy, OdeAgreesOnEveryFamily) {
  gen::Gen g(22);
  for (int trial = 0; trial < 12; ++trial) {
    const OfferModel F = g.offer();
    const PolicyCurve c(F, F.mean(), 1.0);
    for (double t : {0.5, 3.0, 20.0, 100.0}) EXPECT_LE(rel(c.mu_ode(t), c.mu(t)), 1e-7) << F.describe() << " t=" << t;
  }
}

TEST(Policy, PsiInvertsMu) {
  gen::Gen g(23);
  for (int trial = 0; trial < 12; ++trial) {
    const OfferModel F = g.offer();
    const double lambda = g.uniform(0.5, 2);
    const PolicyCurve c(F, F.mean(), lambda);
    for (double t : io::logspace(1e-3, 1e3, 13)) {
      EXPECT_LE(rel(c.psi(c.mu(t)), lambda * t), 1e-8) << F.describe() << " t=" << t;
    }
  }
}

TEST(Policy, CharacterizationProperties) {
  gen::Gen g(24);
  for (int trial = 0; trial < 12; ++trial) {
    const OfferModel F = g.offer();
    const double lambda = g.uniform(0.5, 2);
    const double mu0 = F.support_min() + g.uniform(0, 1) * (F.mean() - F.support_min());
    const PolicyCurve c(F, mu0, lambda);
    EXPECT_EQ(c.mu(0), mu0);
    EXPECT_LE(c.h(0), lambda);
    const auto ts = io::linspace(0, 30, 121);
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
      const double a = c.mu(ts[i - 1]), b = c.mu(ts[i]), d = c.mu(ts[i + 1]);
      EXPECT_LT(a, b) << F.describe();
      EXPECT_GT(b - a, d - b) << F.describe() << " t=" << ts[i];
      EXPECT_GE(c.h(ts[i - 1]), c.h(ts[i])) << F.describe();
    }
    const double far = c.mu(1e8);
    if (std::isfinite(F.support_max())) {
      EXPECT_LT(F.support_max() - far, 5e-2 * F.scale()) << F.describe();
    } else {
      EXPECT_GT(far, F.quantile(0.999)) << F.describe();
    }
  }
}

TEST(Policy, MomentBoundExamples) {
  const PolicyCurve u(OfferModel::uniform(0, 1), 0.0, 1.0);
  EXPECT_NEAR(bound_moment_p(u, 2, 3), 1.0, 1e-11);
  EXPECT_NEAR(u.mu(3), 0.6, 1e-15);
  EXPECT_EQ(bound_moment_p(u, 2, 0), 0.0);
  EXPECT_NEAR(bound_exponential(u, 1.0, 5), std::log((std::exp(1.0) - 1) * 5 + 1), 1e-11);
  EXPECT_NEAR(u.mu(5), 5.0 / 7, 1e-15);

  const PolicyCurve e(OfferModel::exponential(1), 0.0, 1.0);
  EXPECT_NEAR(bound_exponential(e, 0.5, 10), 2 * std::log(21.0), 1e-10);
  EXPECT_NEAR(e.mu(10), std::log(11.0), 1e-15);
  EXPECT_THROW(bound_moment_p(e, 1.0, 1), DomainError);

  const PolicyCurve p(OfferModel::pareto(1, 3), 1.5, 1.0);
  EXPECT_GE(bound_moment_p(p, 2, 10), p.mu(10));
}

TEST(Policy, MomentBoundsDominateMu) {
  struct Case {
    OfferModel F;
    double mu0;
    std::vector<double> ps, deltas;
  };
  const std::vector<Case> cases{
      {OfferModel::uniform(0, 1), 0.0, {1.5, 2, 4}, {0.5, 1, 3}},
      {OfferModel::uniform(1, 3), 2.0, {2, 3}, {1, 2}},
      {OfferModel::exponential(2), 2.0, {1.5, 2, 3}, {0.1, 0.25, 0.45}},
      {OfferModel::pareto(1, 3), 1.5, {1.5, 2, 2.9}, {}},
      {OfferModel::beta(2, 2), 0.5, {2, 3}, {1, 5}},
      {OfferModel::gamma(2, 1), 2.0, {2, 4}, {0.3, 0.8}},
      {OfferModel::frechet(4), OfferModel::frechet(4).mean(), {2, 3.5}, {}},
  };
  for (const auto& cs : cases) {
    const PolicyCurve c(cs.F, cs.mu0, 1.0);
    for (double t : io::linspace(0, 100, 51)) {
      const double mu = c.mu(t);
      for (double p : cs.ps) EXPECT_LE(mu, bound_moment_p(c, p, t) + 1e-12) << cs.F.describe() << " p=" << p;
      for (double d : cs.deltas) EXPECT_LE(mu, bound_exponential(c, d, t) + 1e-12) << cs.F.describe() << " d=" << d;
    }
  }
}

TEST(Policy, ReconstructExponentialFromSamples) {
  const auto ts = io::linspace(0, 50, 10000);
  std::vector<double> mu(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) mu[i] = 2 * std::log(ts[i] + std::exp(1.0));
  const OfferModel R = reconstruct_offer_cdf(ts, mu, 1.0);
  EXPECT_LE(round_trip_error(R, [](double x) { return -std::expm1(-x / 2); }, mu.front(), mu.back()), 1e-3);
  EXPECT_EQ(R.cdf(mu.back()), 1.0);
}

TEST(Policy, ReconstructUniformFromSamples) {
  const auto ts = io::linspace(0, 100, 10000);
  std::vector<double> mu(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) mu[i] = 1 - 2 / (ts[i] + 4);
  const OfferModel R = reconstruct_offer_cdf(ts, mu, 1.0);
  EXPECT_LE(round_trip_error(R, [](double x) { return x; }, mu.front(), mu.back()), 1e-3);
}

TEST(Policy, ReconstructRoundTripEveryWorkedFamily) {
  for (const auto& F : worked_families()) {
    const PolicyCurve c(F, F.mean(), 1.0);
    const auto ts = io::linspace(0, 50, 10000);
    const OfferModel R = reconstruct_offer_cdf(c, ts);
    EXPECT_LE(round_trip_error(R, [&](double x) { return F.cdf(x); }, c.mu(0), c.mu(50)), 1e-3) << F.describe();
  }
}

TEST(Policy, ReconstructRejectsBadInput) {
  const auto ts = io::linspace(0, 10, 100);
  std::vector<double> convex(ts.size()), flat(ts.size()), falling(ts.size()), steep(ts.size());
  const auto short_ts = io::linspace(0, 2, 100);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    convex[i] = ts[i] * ts[i];
    flat[i] = 1.0;
    falling[i] = -ts[i];
    steep[i] = 1 - std::exp(-5 * short_ts[i]);
  }
  EXPECT_THROW(reconstruct_offer_cdf(ts, convex, 1.0), NotConcave);
  EXPECT_THROW(reconstruct_offer_cdf(ts, flat, 1.0), NotIncreasing);
  EXPECT_THROW(reconstruct_offer_cdf(ts, falling, 1.0), NotIncreasing);
  // -mu''/mu' = 5 exceeds lambda = 1.
  EXPECT_THROW(reconstruct_offer_cdf(short_ts, steep, 1.0), RateTooSmall);
}
