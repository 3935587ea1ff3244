#pragma once

// Pass/fail reports comparing simulation against the analytic laws, and the
// closed-form paths against the all-numeric chain. Histograms are emitted
// for plotting only; every pass/fail decision is CDF-, moment- or
// atom-level.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sellopt/dist_core.hpp"
#include "sellopt/io.hpp"
#include "sellopt/policy.hpp"
#include "sellopt/price_dist.hpp"
#include "sellopt/simulator.hpp"
#include "sellopt/stop_time.hpp"

namespace sellopt {

/// Two-sided DKW radius: P(sup |F_n - F| > r) <= alpha.
inline double dkw_threshold(std::size_t n, double alpha = 1e-3) {
  return std::sqrt(std::log(2 / alpha) / (2.0 * static_cast<double>(n)));
}

struct Atom {
  double location;
  double mass;
};

struct CdfDistance {
  double sup;   // over samples off the atom
  std::size_t n;
  std::optional<double> atom_freq, atom_se;
};

/// `cdf` is P(X <= x) for x below a declared atom. Samples equal to the atom
/// location are counted separately; the sup is taken over the remaining
/// sample points against the unnormalized full-sample ECDF, so the DKW
/// radius for n samples still applies.
inline CdfDistance cdf_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                                std::optional<Atom> atom = std::nullopt) {
  if (samples.size() < 100) throw TooFewSamples("cdf_distance needs at least 100 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  CdfDistance out{0.0, samples.size(), std::nullopt, std::nullopt};
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double x = samples[i];
    if (atom && x == atom->location) {
      const double f = static_cast<double>(j - i) / n;
      out.atom_freq = f;
      i = j;
      continue;
    }
    const double F = cdf(x);
    out.sup = std::max({out.sup, std::fabs(j / n - F), std::fabs(i / n - F)});
    i = j;
  }
  if (atom) {
    if (!out.atom_freq) out.atom_freq = 0.0;
    out.atom_se = std::sqrt(std::max(atom->mass * (1 - atom->mass), 1e-300) / n);
  }
  return out;
}

struct Check {
  std::string name;
  std::optional<double> statistic;  // empty when skipped
  double threshold;
  bool pass;
  std::string skipped;  // error name when skipped
};

struct ValidationReport {
  std::string figure;
  std::string family;
  io::json params = io::json::object();
  double lambda = 1.0;
  std::vector<double> t;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  void add(std::string name, double stat, double threshold) {
    checks.push_back({std::move(name), stat, threshold, stat <= threshold, {}});
  }
  void skip(std::string name, double threshold, std::string why) {
    checks.push_back({std::move(name), std::nullopt, threshold, true, std::move(why)});
  }
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }

  io::json to_json() const {
    io::json j;
    j["figure"] = figure.empty() ? io::json(nullptr) : io::json(figure);
    j["family"] = family;
    j["params"] = params;
    j["lambda"] = lambda;
    j["t"] = t;
    j["n"] = n;
    j["seed"] = seed;
    io::json cs = io::json::array();
    for (const auto& c : checks) {
      io::json e{{"name", c.name},
                 {"statistic", c.statistic ? io::num(*c.statistic) : io::json(nullptr)},
                 {"threshold", c.threshold},
                 {"pass", c.pass}};
      if (!c.skipped.empty()) e["skipped"] = c.skipped;
      cs.push_back(e);
    }
    j["checks"] = cs;
    return j;
  }
};

inline std::string family_name(const OfferModel& F) {
  const std::string d = F.describe();
  return d.substr(0, d.find('('));
}

inline io::json family_params(const OfferModel& F) {
  if (auto u = F.as<family::Uniform>()) return {{"a", u->a}, {"b", u->b}};
  if (auto e = F.as<family::Exponential>()) return {{"eta", e->eta}};
  if (auto p = F.as<family::Pareto>()) return {{"xm", p->xm}, {"alpha", p->alpha}};
  if (auto b = F.as<family::Beta>()) return {{"alpha", b->alpha}, {"beta", b->beta}};
  if (auto g = F.as<family::Gamma>()) return {{"alpha", g->alpha}, {"eta", g->eta}};
  if (auto f = F.as<family::Frechet>()) return {{"alpha", f->alpha}};
  return io::json::object();
}

/// Closed form vs the numeric chain for the offer families with closed
/// forms, residual law equal to the offer law.
inline ValidationReport oracle_suite(const OfferModel& F, double lambda, const std::vector<double>& ts) {
  const ResidualSpec R = ResidualSpec::same_as(F);
  const PolicyCurve closed_curve(F, F.mean(), lambda);
  if (!closed_curve.closed_form()) throw DomainError("oracle_suite needs a family with closed forms");
  const PolicyCurve numeric_curve(F, F.mean(), lambda, true);

  ValidationReport rep;
  rep.family = family_name(F);
  rep.params = family_params(F);
  rep.lambda = lambda;
  rep.t = ts;
  auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); };

  for (double t : ts) {
    const std::string at = "@t=" + io::fmt(t);
    const double mu = closed_curve.mu(t);
    rep.add("mu_numeric" + at, rel(numeric_curve.mu(t), mu), 1e-8);
    rep.add("mu_ode" + at, rel(closed_curve.mu_ode(t), mu), 1e-7);
    rep.add("psi_identity" + at, rel(numeric_curve.psi(numeric_curve.mu(t)), lambda * t), 1e-8);

    const PriceLaw num_price(numeric_curve, R, t, Path::Numeric);
    const PriceLaw auto_price(closed_curve, R, t);
    const double lo = F.quantile(1e-4), hi = F.quantile(1 - 1e-4);
    double g_cdf = 0, g_pdf = 0;
    for (double x : io::linspace(lo, hi, 401)) {
      g_cdf = std::max(g_cdf, std::fabs(num_price.cdf(x) - auto_price.cdf(x)));
      const double g = price_pdf(closed_curve, R, t, x);
      g_pdf = std::max(g_pdf, std::fabs(num_price.pdf(x) - g) / std::max(g, 1e-300));
    }
    rep.add("price_cdf_sup" + at, g_cdf, 1e-8);
    rep.add("price_pdf_rel" + at, g_pdf, 1e-6);
    try {
      rep.add("price_var_rel" + at, rel(num_price.var(), price_var(closed_curve, R, t)), 1e-6);
    } catch (const SecondMomentInfinite&) {
      rep.skip("price_var_rel" + at, 1e-6, "SecondMomentInfinite");
    }

    const StopLaw num_stop(numeric_curve, t, Path::Numeric);
    double h_sup = 0;
    for (double r : io::linspace(0, t, 201)) h_sup = std::max(h_sup, std::fabs(num_stop.cdf(r) - stop_cdf(closed_curve, t, r)));
    rep.add("stop_cdf_sup" + at, h_sup, 1e-8);
    rep.add("stop_atom" + at, std::fabs(num_stop.atom() - atom_prob(closed_curve, t)), 1e-8);
    rep.add("stop_mean_rel" + at, rel(num_stop.mean(), stop_mean(closed_curve, t)), 1e-6);
    rep.add("stop_var_rel" + at, rel(num_stop.var(), stop_var(closed_curve, t)), 1e-6);
  }
  return rep;
}

/// One overlay panel: `x,analytic,empirical`.
struct PlotData {
  std::string name;
  std::string kind;  // "density" or "cumulative"
  std::vector<double> x, analytic, empirical;
};

inline void write_plot_csv(std::ostream& out, const PlotData& p) {
  io::CsvWriter csv(out, {"x", "analytic", "empirical"});
  for (std::size_t i = 0; i < p.x.size(); ++i) csv.row({p.x[i], p.analytic[i], p.empirical[i]});
}

inline void write_plot_svg(std::ostream& out, const PlotData& p) {
  io::write_svg(out, p.name + " (" + p.kind + ")",
                {{"#1f77b4", p.x, p.empirical}, {"#d62728", p.x, p.analytic}});
}

struct FigureResult {
  ValidationReport report;
  std::vector<PlotData> plots;
};

struct FigureSetup {
  OfferModel offer;
  std::vector<double> t;
  bool time_to_sale;  // otherwise sale price
};

inline FigureSetup figure_setup(const std::string& id) {
  if (id == "f2") return {OfferModel::uniform(1, 3), {2, 10}, false};
  if (id == "f3") return {OfferModel::exponential(2), {2, 10}, false};
  if (id == "f4") return {OfferModel::pareto(1, 3), {2, 10}, false};
  if (id == "f5") return {OfferModel::uniform(1, 3), {10}, true};
  if (id == "f6") return {OfferModel::exponential(2), {10}, true};
  if (id == "f7") return {OfferModel::pareto(1, 1.5), {30}, true};
  throw UnknownFigure("unknown figure id '" + id + "' (expected f2..f7)");
}

namespace detail {

inline PlotData price_histogram(const std::string& name, const PolicyCurve& curve, const ResidualSpec& R, double t,
                                const SimBatch& b) {
  std::vector<double> s = b.prices;
  std::sort(s.begin(), s.end());
  const double lo = s.front();
  const double hi = s[static_cast<std::size_t>(0.995 * (s.size() - 1))];
  constexpr int bins = 80;
  const double w = (hi - lo) / bins;
  std::vector<double> counts(bins, 0.0);
  for (double x : s) {
    if (x > hi) break;
    counts[std::min(bins - 1, static_cast<int>((x - lo) / w))] += 1;
  }
  PlotData p{name, "density", {}, {}, {}};
  for (int k = 0; k < bins; ++k) {
    const double c = lo + (k + 0.5) * w;
    p.x.push_back(c);
    p.analytic.push_back(price_pdf(curve, R, t, c));
    p.empirical.push_back(counts[k] / (s.size() * w));
  }
  return p;
}

inline PlotData time_cumulative(const std::string& name, const PolicyCurve& curve, double t, const SimBatch& b) {
  const EmpiricalCdf ecdf(b.times);
  PlotData p{name, "cumulative", {}, {}, {}};
  for (double r : io::linspace(0, t, 201)) {
    p.x.push_back(r);
    p.analytic.push_back(stop_cdf(curve, t, r));
    p.empirical.push_back(ecdf(r));
  }
  return p;
}

}  // namespace detail

/// Reruns one histogram-vs-analytic figure setup with lambda = 1.
inline FigureResult figure_replication(const std::string& id, std::size_t n, std::uint64_t seed,
                                       unsigned threads = 1) {
  const FigureSetup fs = figure_setup(id);
  if (n < 10000) throw TooFewSamples("figure replication needs n >= 10000");
  const OfferModel& F = fs.offer;
  const ResidualSpec R = ResidualSpec::same_as(F);
  const PolicyCurve curve(F, F.mean(), 1.0);

  FigureResult out;
  ValidationReport& rep = out.report;
  rep.figure = id;
  rep.family = family_name(F);
  rep.params = family_params(F);
  rep.lambda = 1.0;
  rep.t = fs.t;
  rep.n = n;
  rep.seed = seed;
  const double dkw = dkw_threshold(n);

  for (double t : fs.t) {
    const std::string at = "@t=" + io::fmt(t);
    const std::string panel = id + "_t" + io::fmt(t);
    const SimBatch b = simulate_batch({curve, R, t, n, seed, threads});
    const SimSummary s = summarize(b);
    if (fs.time_to_sale) {
      const double atom = atom_prob(curve, t);
      const auto d = cdf_distance(b.times, [&](double r) { return stop_cdf(curve, t, r); }, Atom{t, atom});
      rep.add("time_cdf_sup" + at, d.sup, dkw);
      rep.add("time_atom_z" + at, std::fabs(*d.atom_freq - atom) / *d.atom_se, 4.0);
      rep.add("time_mean_z" + at, std::fabs(s.time.mean - stop_mean(curve, t)) / s.time.se_mean, 4.0);
      out.plots.push_back(detail::time_cumulative(panel, curve, t, b));
    } else {
      const PriceLaw law(curve, R, t);
      const auto d = cdf_distance(b.prices, [&](double x) { return law.cdf(x); });
      rep.add("price_cdf_sup" + at, d.sup, dkw);
      rep.add("price_mean_z" + at, std::fabs(s.price.mean - curve.mu(t)) / s.price.se_mean, 4.0);
      out.plots.push_back(detail::price_histogram(panel, curve, R, t, b));
    }
  }
  return out;
}

}  // namespace sellopt
