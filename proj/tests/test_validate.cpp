#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace sellopt;

TEST(Validate, DkwThreshold) {
  EXPECT_NEAR(dkw_threshold(100000), 0.0061647, 1e-6);
  EXPECT_NEAR(dkw_threshold(100), std::sqrt(std::log(2000.0) / 200), 1e-15);
}

TEST(Validate, NullCaseStaysInsideEnvelope) {
  PhiloxStream rng(10, 0);
  std::vector<double> s(100000);
  for (auto& x : s) x = rng.uniform();
  const auto d = cdf_distance(s, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_LT(d.sup, dkw_threshold(s.size()));
  EXPECT_FALSE(d.atom_freq);
}

TEST(Validate, ShiftedSampleIsDetected) {
  PhiloxStream rng(11, 0);
  std::vector<double> s(10000);
  for (auto& x : s) x = rng.uniform() + 0.05;
  const auto d = cdf_distance(s, [](double x) { return std::clamp(x, 0.0, 1.0); });
  EXPECT_GE(d.sup, 0.05 - 0.02);
  EXPECT_GT(d.sup, dkw_threshold(s.size()));
}

TEST(Validate, AtomIsSeparated) {
  // Half the mass sits at 1; below 1 the law is Uniform(0, 1) with weight 1/2.
  PhiloxStream rng(12, 0);
  std::vector<double> s(50000);
  for (auto& x : s) {
    const double u = rng.uniform();
    x = u < 0.5 ? 1.0 : rng.uniform();
  }
  const auto d = cdf_distance(s, [](double x) { return 0.5 * std::clamp(x, 0.0, 1.0); }, Atom{1.0, 0.5});
  EXPECT_LT(d.sup, dkw_threshold(s.size()));
  ASSERT_TRUE(d.atom_freq);
  EXPECT_LT(std::fabs(*d.atom_freq - 0.5) / *d.atom_se, 4);
}

TEST(Validate, TooFewSamples) {
  EXPECT_THROW(cdf_distance(std::vector<double>(99, 0.5), [](double) { return 0.5; }), TooFewSamples);
  EXPECT_THROW(figure_replication("f2", 9999, 1), TooFewSamples);
}

TEST(Validate, UnknownFigure) {
  EXPECT_THROW(figure_setup("f8"), UnknownFigure);
  EXPECT_THROW(figure_replication("f1", 100000, 1), UnknownFigure);
}

TEST(Validate, FiguresPassAtModerateSize) {
  for (const std::string id : {"f2", "f3", "f4", "f5", "f6", "f7"}) {
    const auto r = figure_replication(id, 20000, 42);
    EXPECT_TRUE(r.report.pass()) << r.report.to_json().dump();
    EXPECT_EQ(r.plots.size(), figure_setup(id).t.size());
    for (const auto& p : r.plots) {
      EXPECT_EQ(p.x.size(), p.analytic.size());
      EXPECT_EQ(p.x.size(), p.empirical.size());
    }
  }
}

TEST(Validate, FigureReportIsThreadIndependent) {
  const auto a = figure_replication("f6", 20000, 5, 1).report.to_json();
  const auto b = figure_replication("f6", 20000, 5, 3).report.to_json();
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Validate, OracleSuitesPass) {
  for (const auto& F : {OfferModel::uniform(1, 3), OfferModel::exponential(2), OfferModel::pareto(1, 3),
                        OfferModel::uniform(0, 1), OfferModel::exponential(0.7), OfferModel::pareto(2, 4)}) {
    const auto rep = oracle_suite(F, 1.0, {0.5, 2, 10, 100});
    EXPECT_TRUE(rep.pass()) << rep.to_json().dump();
  }
  const auto heavy = oracle_suite(OfferModel::pareto(1, 1.5), 1.0, {2, 10});
  EXPECT_TRUE(heavy.pass()) << heavy.to_json().dump();
  int skipped = 0;
  for (const auto& c : heavy.checks) skipped += !c.skipped.empty();
  EXPECT_EQ(skipped, 2);
  EXPECT_THROW(oracle_suite(OfferModel::beta(2, 2), 1.0, {1}), DomainError);
}

TEST(Validate, ReportSchema) {
  const auto j = figure_replication("f5", 10000, 1).report.to_json();
  for (const char* k : {"figure", "family", "params", "lambda", "t", "n", "seed", "checks"}) EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["figure"], "f5");
  EXPECT_EQ(j["family"], "uniform");
  EXPECT_EQ(j["params"]["a"], 1.0);
  EXPECT_TRUE(j["t"].is_array());
  EXPECT_EQ(j["n"], 10000);
  for (const auto& c : j["checks"]) {
    for (const char* k : {"name", "statistic", "threshold", "pass"}) EXPECT_TRUE(c.contains(k)) << k;
  }
  const auto o = oracle_suite(OfferModel::pareto(1, 1.5), 1.0, {2}).to_json();
  EXPECT_TRUE(o["figure"].is_null());
  bool saw_skip = false;
  for (const auto& c : o["checks"]) {
    if (c.contains("skipped")) {
      saw_skip = true;
      EXPECT_TRUE(c["statistic"].is_null());
      EXPECT_EQ(c["skipped"], "SecondMomentInfinite");
    }
  }
  EXPECT_TRUE(saw_skip);
}

TEST(Validate, PlotWriters) {
  const PlotData p{"demo", "cumulative", {0, 1}, {0, 1}, {0, 0.9}};
  std::ostringstream csv, svg;
  write_plot_csv(csv, p);
  write_plot_svg(svg, p);
  EXPECT_EQ(csv.str().substr(0, 21), "x,analytic,empirical\n");
  EXPECT_NE(svg.str().find("<svg"), std::string::npos);
  EXPECT_NE(svg.str().find("</svg>"), std::string::npos);
}
