#pragma once

// Monte Carlo replay of the bidding process under the optimal threshold.
// Offers arrive with exponential(lambda) gaps; an offer X arriving with r
// time left is accepted iff X >= mu(r). If no offer is accepted before the
// deadline, the price is a residual draw and T = t exactly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <thread>
#include <vector>

#include "sellopt/dist_core.hpp"
#include "sellopt/io.hpp"
#include "sellopt/policy.hpp"
#include "sellopt/random.hpp"

namespace sellopt {

/// mu on [0, t] for the hot loop. Closed forms are evaluated directly;
/// numeric curves use cubic Hermite interpolation with exact slopes
/// mu' = lambda phi(mu) on a log-spaced grid, refined until the midpoint
/// error is at most max_error.
class Threshold {
 public:
  static constexpr std::size_t kNodes = 4096;

  Threshold(const PolicyCurve& curve, double horizon, double max_error = 1e-6) : curve_(curve) {
    if (!(horizon >= 0)) throw DomainError("horizon must be nonnegative");
    if (curve.closed_form() || horizon == 0) return;
    for (std::size_t n = kNodes; ; n *= 2) {
      build(horizon, n);
      if (err_ <= max_error || n >= 16 * kNodes) break;
    }
  }

  double operator()(double r) const {
    if (t_.empty()) return curve_.mu(r);
    if (r <= 0) return mu_.front();
    if (r >= t_.back()) return r == t_.back() ? mu_.back() : curve_.mu(r);
    const std::size_t i = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), r) - t_.begin()) - 1;
    return hermite(i, r);
  }

  bool interpolated() const { return !t_.empty(); }
  std::size_t nodes() const { return t_.size(); }
  /// Largest midpoint deviation from mu() seen when the grid was accepted.
  double max_error() const { return err_; }

 private:
  void build(double horizon, std::size_t n) {
    t_ = io::logspace(horizon * 1e-8, horizon, n - 1);
    t_.insert(t_.begin(), 0.0);
    mu_.resize(n);
    d_.resize(n);
    const double l = curve_.lambda();
    for (std::size_t i = 0; i < n; ++i) {
      mu_[i] = curve_.mu(t_[i]);
      d_[i] = l * curve_.offer().phi(mu_[i]);
    }
    err_ = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double m = 0.5 * (t_[i] + t_[i + 1]);
      err_ = std::max(err_, std::fabs(hermite(i, m) - curve_.mu(m)));
    }
  }

  double hermite(std::size_t i, double r) const {
    const double h = t_[i + 1] - t_[i], s = (r - t_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double v = (2 * s3 - 3 * s2 + 1) * mu_[i] + (s3 - 2 * s2 + s) * h * d_[i] + (-2 * s3 + 3 * s2) * mu_[i + 1] +
                     (s3 - s2) * h * d_[i + 1];
    return std::clamp(v, mu_[i], mu_[i + 1]);
  }

  const PolicyCurve& curve_;
  std::vector<double> t_, mu_, d_;
  double err_ = 0.0;
};

/// lambda, mu0 and the offer law are those of `policy`, so they agree by construction.
struct SimConfig {
  const PolicyCurve& policy;
  const ResidualSpec& residual;
  double t;
  std::size_t n_runs = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // 0: hardware concurrency
};

struct SimRun {
  double price;
  double time;
  bool hit_deadline;
};

struct SimBatch {
  double t = 0.0;
  std::vector<double> prices, times;
  std::vector<std::uint8_t> hit_deadline;
  std::size_t atom_count = 0;

  std::size_t size() const { return prices.size(); }
};

inline void check_config(const SimConfig& cfg) {
  if (cfg.n_runs < 1) throw DomainError("n_runs must be at least 1");
  if (!(cfg.t >= 0 && std::isfinite(cfg.t))) throw DomainError("t must be finite and nonnegative");
  const double m0 = cfg.residual.mean();
  if (std::fabs(m0 - cfg.policy.mu0()) > 1e-9 * std::max(1.0, std::fabs(m0))) {
    throw DomainError("residual mean does not match the policy's mu0");
  }
}

inline SimRun simulate_run(const SimConfig& cfg, const Threshold& mu, PhiloxStream& rng) {
  const double lambda = cfg.policy.lambda();
  const OfferModel& F = cfg.policy.offer();
  double left = cfg.t;
  for (;;) {
    const double gap = -std::log(rng.uniform()) / lambda;
    if (!(gap < left)) return {cfg.residual.sample(rng.uniform()), cfg.t, true};
    left -= gap;
    const double x = F.quantile(rng.uniform());
    if (x >= mu(left)) return {x, cfg.t - left, false};
  }
}

/// Run i draws from substream i of `seed`, so the batch does not depend on
/// the thread count or scheduling.
inline SimBatch simulate_batch(const SimConfig& cfg) {
  check_config(cfg);
  const Threshold mu(cfg.policy, cfg.t);
  SimBatch b;
  b.t = cfg.t;
  const std::size_t n = cfg.n_runs;
  b.prices.resize(n);
  b.times.resize(n);
  b.hit_deadline.resize(n);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      PhiloxStream rng(cfg.seed, i);
      const SimRun r = simulate_run(cfg, mu, rng);
      b.prices[i] = r.price;
      b.times[i] = r.time;
      b.hit_deadline[i] = r.hit_deadline;
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work, n * k / threads, n * (k + 1) / threads);
    for (auto& th : pool) th.join();
  }
  b.atom_count = static_cast<std::size_t>(std::count(b.hit_deadline.begin(), b.hit_deadline.end(), 1));
  return b;
}

class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> xs) : xs_(std::move(xs)) { std::sort(xs_.begin(), xs_.end()); }
  /// Fraction of samples <= x.
  double operator()(double x) const {
    return static_cast<double>(std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin()) / xs_.size();
  }
  const std::vector<double>& sorted() const { return xs_; }

 private:
  std::vector<double> xs_;
};

struct SampleStats {
  double mean, var, se_mean, se_var;
};

inline SampleStats sample_stats(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0;
  for (double x : v) mean += x;
  mean /= n;
  double m2 = 0, m4 = 0;
  for (double x : v) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  const double var = v.size() > 1 ? m2 / (n - 1) : 0.0;
  const double pm2 = m2 / n;
  return {mean, var, std::sqrt(var / n), std::sqrt(std::max(0.0, m4 / n - pm2 * pm2) / n)};
}

struct SimSummary {
  std::size_t n;
  SampleStats price, time;
  double atom_freq, atom_se;
  EmpiricalCdf price_cdf, time_cdf;
};

inline SimSummary summarize(const SimBatch& b) {
  if (b.size() == 0) throw EmptyBatch("cannot summarize an empty batch");
  const double n = static_cast<double>(b.size());
  const double freq = b.atom_count / n;
  return {b.size(), sample_stats(b.prices), sample_stats(b.times), freq, std::sqrt(freq * (1 - freq) / n),
          EmpiricalCdf(b.prices), EmpiricalCdf(b.times)};
}

inline io::json summary_json(const SimSummary& s) {
  auto stats = [](const SampleStats& st) {
    return io::json{{"mean", io::num(st.mean)}, {"var", io::num(st.var)}, {"se_mean", io::num(st.se_mean)},
                    {"se_var", io::num(st.se_var)}};
  };
  return {{"n", s.n}, {"price", stats(s.price)}, {"time", stats(s.time)}, {"atom_freq", s.atom_freq},
          {"atom_se", s.atom_se}};
}

/// CSV `run,S,T,hit_deadline`.
inline void write_batch_csv(std::ostream& out, const SimBatch& b) {
  io::CsvWriter csv(out, {"run", "S", "T", "hit_deadline"});
  for (std::size_t i = 0; i < b.size(); ++i) {
    csv.row({static_cast<double>(i), b.prices[i], b.times[i], static_cast<double>(b.hit_deadline[i])});
  }
}

}  // namespace sellopt
