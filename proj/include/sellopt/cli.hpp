#pragma once

// Command-line front end. run() is the whole program minus process setup so
// it can be driven in-process by tests.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 a validation
// report with a failing check.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sellopt/asymptotics.hpp"
#include "sellopt/dist_core.hpp"
#include "sellopt/io.hpp"
#include "sellopt/policy.hpp"
#include "sellopt/price_dist.hpp"
#include "sellopt/simulator.hpp"
#include "sellopt/stop_time.hpp"
#include "sellopt/validate.hpp"

namespace sellopt::cli {

namespace fs = std::filesystem;

struct FamilyArgs {
  std::string family;
  double a = 0, b = 1, eta = 1, xm = 1, alpha = 2, beta = 1;
  std::string table;
  std::string residual = "same";
  std::optional<double> mu0;
  double lambda = 1.0;
  bool numeric = false;

  void bind(CLI::App* app, bool with_residual = true) {
    app->add_option("--family", family, "uniform|exponential|pareto|beta|gamma|frechet|tabulated")->required();
    app->add_option("--a", a, "uniform lower end");
    app->add_option("--b", b, "uniform upper end");
    app->add_option("--eta", eta, "exponential mean / gamma scale");
    app->add_option("--xm", xm, "Pareto scale");
    app->add_option("--alpha", alpha, "shape (Pareto, Beta, Gamma, Frechet)");
    app->add_option("--beta", beta, "Beta second shape");
    app->add_option("--table", table, "CSV with header x,F for --family tabulated");
    if (with_residual) app->add_option("--residual", residual, "same|zero|table:PATH");
    app->add_option("--mu0", mu0, "salvage mean; defaults to the residual mean");
    app->add_option("--lambda", lambda, "offer arrival rate");
    app->add_flag("--numeric", numeric, "force the numeric policy path");
  }

  OfferModel offer() const {
    if (family == "uniform") return OfferModel::uniform(a, b);
    if (family == "exponential") return OfferModel::exponential(eta);
    if (family == "pareto") return OfferModel::pareto(xm, alpha);
    if (family == "beta") return OfferModel::beta(alpha, beta);
    if (family == "gamma") return OfferModel::gamma(alpha, eta);
    if (family == "frechet") return OfferModel::frechet(alpha);
    if (family == "tabulated") {
      if (table.empty()) throw ParseError("--family tabulated needs --table");
      return load_tabulated_csv(table);
    }
    throw ParseError("unknown family '" + family + "'");
  }

  ResidualSpec residual_spec(const OfferModel& F) const {
    if (residual == "same") return ResidualSpec::same_as(F);
    if (residual == "zero") return ResidualSpec::zero();
    if (residual.rfind("table:", 0) == 0) return ResidualSpec::custom(load_tabulated_csv(residual.substr(6)));
    throw ParseError("--residual must be same, zero or table:PATH");
  }
};

/// `key = value` lines, `#` comments. Keys are long option names without dashes.
inline std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path);
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    args.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  return args;
}

inline fs::path default_out_dir() {
  const char* env = std::getenv("SELLOPT_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

class Program {
 public:
  Program(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(std::vector<std::string> args) {
    CLI::App app{"Optimal selling with a deadline: policy, price and time-to-sale laws, simulation"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    build(app);

    try {
      args = expand_config(std::move(args));
      std::vector<std::string> rev(args.rbegin(), args.rend());
      app.parse(rev);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e, out_, err_);
      err_ << "error: " << e.what() << "\n";
      err_ << "run with --help for usage\n";
      return 1;
    } catch (const sellopt::error& e) {
      err_ << "error: " << e.what() << "\n";
      return 1;
    }

    try {
      return dispatch_();
    } catch (const sellopt::error& e) {
      err_ << "error: " << e.what() << "\n";
      return 1;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return 1;
    }
  }

 private:
  // Config values go right after the subcommand name so later flags win.
  static std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::vector<std::string> file_args, rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config") {
        if (i + 1 >= args.size()) throw ParseError("--config needs a path");
        auto more = read_config(args[++i]);
        file_args.insert(file_args.end(), more.begin(), more.end());
      } else if (args[i].rfind("--config=", 0) == 0) {
        auto more = read_config(args[i].substr(9));
        file_args.insert(file_args.end(), more.begin(), more.end());
      } else {
        rest.push_back(args[i]);
      }
    }
    if (file_args.empty() || rest.empty()) {
      rest.insert(rest.end(), file_args.begin(), file_args.end());
      return rest;
    }
    std::vector<std::string> out{rest.front()};
    out.insert(out.end(), file_args.begin(), file_args.end());
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
  }

  void common(CLI::App* sub, bool with_residual = true) {
    fam_.bind(sub, with_residual);
    sub->add_option("--out-dir", out_dir_, "output directory (default: $SELLOPT_OUT_DIR or .)");
    sub->add_option("--config", config_unused_, "key=value file; flags override it");
  }

  void build(CLI::App& app) {
    auto* policy = app.add_subcommand("policy", "mu, mu' and h over a t grid -> policy.csv");
    common(policy, true);
    policy->add_option("--t", t_grid_, "t grid: value, a,b,c, lo:hi:n or log:lo:hi:n")->default_val("0:10:11");
    policy->callback([this] { dispatch_ = [this] { return cmd_policy(); }; });

    auto* price = app.add_subcommand("price", "sale price law -> price.csv, price.json");
    common(price);
    price->add_option("--t", t_, "marketing period")->required();
    price->add_option("--x", x_grid_, "x grid (default: offer quantiles 0.001..0.999)");
    price->callback([this] { dispatch_ = [this] { return cmd_price(); }; });

    auto* stop = app.add_subcommand("stoptime", "time to sale law -> stoptime.csv, stoptime.json");
    common(stop);
    stop->add_option("--t", t_, "marketing period")->required();
    stop->add_option("--r", x_grid_, "r grid (default 0:t:201)");
    stop->callback([this] { dispatch_ = [this] { return cmd_stoptime(); }; });

    auto* asym = app.add_subcommand("asymptotics", "tail class and large-t limits -> asymptotics.json");
    common(asym);
    asym->callback([this] { dispatch_ = [this] { return cmd_asymptotics(); }; });

    auto* sim = app.add_subcommand("simulate", "Monte Carlo batch -> simulate.csv, simulate_summary.json");
    common(sim);
    sim->add_option("--t", t_, "marketing period")->required();
    sim->add_option("--n", n_, "number of runs")->default_val(10000);
    sim->add_option("--seed", seed_, "64-bit seed")->default_val(0);
    sim->add_option("--threads", threads_, "worker threads, 0 = all cores")->default_val(1);
    sim->callback([this] { dispatch_ = [this] { return cmd_simulate(); }; });

    auto* val = app.add_subcommand("validate", "figure replication or oracle suite -> report JSON, plot CSV/SVG");
    val->add_option("--figure", figure_, "f2..f7");
    val->add_flag("--oracle", oracle_, "closed form vs numeric chain for --family");
    val->add_option("--family", fam_.family, "uniform|exponential|pareto (with --oracle)");
    val->add_option("--a", fam_.a);
    val->add_option("--b", fam_.b);
    val->add_option("--eta", fam_.eta);
    val->add_option("--xm", fam_.xm);
    val->add_option("--alpha", fam_.alpha);
    val->add_option("--lambda", fam_.lambda);
    val->add_option("--t", t_grid_, "t grid for --oracle")->default_val("2,10");
    val->add_option("--n", n_, "runs per panel")->default_val(100000);
    val->add_option("--seed", seed_, "64-bit seed")->default_val(0);
    val->add_option("--threads", threads_, "worker threads, 0 = all cores")->default_val(1);
    val->add_option("--out-dir", out_dir_, "output directory (default: $SELLOPT_OUT_DIR or .)");
    val->add_option("--config", config_unused_, "key=value file; flags override it");
    val->callback([this] { dispatch_ = [this] { return cmd_validate(); }; });

    auto* rec = app.add_subcommand("reconstruct", "offer CDF from sampled mu -> reconstruct.csv");
    rec->add_option("--input", input_, "CSV with header t,mu")->required();
    rec->add_option("--lambda", fam_.lambda, "offer arrival rate");
    rec->add_option("--out-dir", out_dir_, "output directory (default: $SELLOPT_OUT_DIR or .)");
    rec->add_option("--config", config_unused_, "key=value file; flags override it");
    rec->callback([this] { dispatch_ = [this] { return cmd_reconstruct(); }; });
  }

  fs::path out_path(const std::string& name) const {
    return (out_dir_.empty() ? default_out_dir() : fs::path(out_dir_)) / name;
  }

  void wrote(const fs::path& p) { err_ << "wrote " << p.string() << "\n"; }

  void write_json(const std::string& name, const io::json& j) {
    const auto p = out_path(name);
    auto f = io::open_output(p);
    f << j.dump(2) << "\n";
    wrote(p);
    out_ << j.dump(2) << "\n";
  }

  struct Setup {
    OfferModel offer;
    ResidualSpec residual;
    double mu0;
  };

  Setup setup() const {
    OfferModel F = fam_.offer();
    ResidualSpec R = fam_.residual_spec(F);
    return {F, R, fam_.mu0.value_or(R.mean())};
  }

  io::json header(const Setup& s, const PolicyCurve& curve) const {
    return {{"family", family_name(s.offer)},
            {"params", family_params(s.offer)},
            {"residual", fam_.residual},
            {"mu0", s.mu0},
            {"lambda", fam_.lambda},
            {"method", to_string(curve.method())}};
  }

  int cmd_policy() {
    const Setup s = setup();
    const PolicyCurve curve(s.offer, s.mu0, fam_.lambda, fam_.numeric);
    const auto p = out_path("policy.csv");
    auto f = io::open_output(p);
    std::ostringstream buf;
    io::CsvWriter csv(buf, {"t", "mu", "mu_prime", "h"});
    for (double t : io::parse_grid(t_grid_)) csv.row({t, curve.mu(t), curve.mu_prime(t), curve.h(t)});
    f << buf.str();
    out_ << buf.str();
    wrote(p);
    return 0;
  }

  int cmd_price() {
    const Setup s = setup();
    const PolicyCurve curve(s.offer, s.mu0, fam_.lambda, fam_.numeric);
    const auto xs = x_grid_.empty() ? io::linspace(s.offer.quantile(1e-3), s.offer.quantile(0.999), 201)
                                    : io::parse_grid(x_grid_);
    const auto p = out_path("price.csv");
    auto f = io::open_output(p);
    write_price_csv(f, curve, s.residual, t_, xs);
    wrote(p);
    io::json j = header(s, curve);
    j["t"] = t_;
    j["mean"] = price_mean(curve, t_);
    try {
      j["var"] = io::num(price_var(curve, s.residual, t_));
    } catch (const SecondMomentInfinite& e) {
      j["var"] = nullptr;
      j["var_note"] = e.what();
    }
    write_json("price.json", j);
    return 0;
  }

  int cmd_stoptime() {
    const Setup s = setup();
    const PolicyCurve curve(s.offer, s.mu0, fam_.lambda, fam_.numeric);
    const auto rs = x_grid_.empty() ? io::linspace(0, t_, 201) : io::parse_grid(x_grid_);
    const auto p = out_path("stoptime.csv");
    auto f = io::open_output(p);
    write_stop_csv(f, curve, t_, rs);
    wrote(p);
    io::json j = header(s, curve);
    const io::json rec = stop_record(curve, t_);
    for (const auto& [k, v] : rec.items()) j[k] = v;
    write_json("stoptime.json", j);
    return 0;
  }

  int cmd_asymptotics() {
    const Setup s = setup();
    const PolicyCurve curve(s.offer, s.mu0, fam_.lambda, fam_.numeric);
    const io::json rep = asymptotics_report(curve, s.residual);
    write_json("asymptotics.json", rep);
    for (const auto& c : rep["checks"]) {
      if (!c["pass"].get<bool>()) return 2;
    }
    return 0;
  }

  int cmd_simulate() {
    const Setup s = setup();
    const PolicyCurve curve(s.offer, s.mu0, fam_.lambda, fam_.numeric);
    if (n_ < 1) throw DomainError("--n must be at least 1");
    const SimBatch b = simulate_batch({curve, s.residual, t_, static_cast<std::size_t>(n_), seed_, threads_});
    const auto p = out_path("simulate.csv");
    auto f = io::open_output(p);
    write_batch_csv(f, b);
    wrote(p);
    io::json j = header(s, curve);
    j["t"] = t_;
    j["seed"] = seed_;
    const io::json summary = summary_json(summarize(b));
    for (const auto& [k, v] : summary.items()) j[k] = v;
    write_json("simulate_summary.json", j);
    return 0;
  }

  int cmd_validate() {
    if (figure_.empty() == !oracle_) throw ParseError("validate needs exactly one of --figure or --oracle");
    if (oracle_) {
      const ValidationReport rep = oracle_suite(fam_.offer(), fam_.lambda, io::parse_grid(t_grid_));
      write_json("oracle_" + rep.family + "_report.json", rep.to_json());
      return rep.pass() ? 0 : 2;
    }
    if (n_ < 1) throw DomainError("--n must be at least 1");
    const FigureResult res = figure_replication(figure_, static_cast<std::size_t>(n_), seed_, threads_);
    for (const auto& plot : res.plots) {
      const auto pc = out_path(plot.name + ".csv");
      auto fc = io::open_output(pc);
      write_plot_csv(fc, plot);
      wrote(pc);
      const auto ps = out_path(plot.name + ".svg");
      auto fsvg = io::open_output(ps);
      write_plot_svg(fsvg, plot);
      wrote(ps);
    }
    write_json(figure_ + "_report.json", res.report.to_json());
    return res.report.pass() ? 0 : 2;
  }

  int cmd_reconstruct() {
    std::ifstream in(input_);
    if (!in) throw ParseError("cannot open " + input_);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,mu", 0) != 0) throw ParseError(input_ + ": expected header t,mu");
    std::vector<double> ts, mus;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      std::istringstream row(line);
      std::string a, b;
      if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) throw ParseError(input_ + ": bad row " + line);
      ts.push_back(std::stod(a));
      mus.push_back(std::stod(b));
    }
    const OfferModel F = reconstruct_offer_cdf(ts, mus, fam_.lambda);
    const auto& tab = *F.as<family::Tabulated>();
    const auto p = out_path("reconstruct.csv");
    auto f = io::open_output(p);
    io::CsvWriter csv(f, {"x", "F"});
    for (std::size_t i = 0; i < tab.data->x.size(); ++i) csv.row({tab.data->x[i], tab.data->F[i]});
    wrote(p);
    return 0;
  }

  std::ostream& out_;
  std::ostream& err_;
  std::function<int()> dispatch_;
  FamilyArgs fam_;
  std::string out_dir_, config_unused_, t_grid_, x_grid_, figure_, input_;
  double t_ = 0;
  long long n_ = 0;
  std::uint64_t seed_ = 0;
  unsigned threads_ = 1;
  bool oracle_ = false;
};

/// argv without the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Program(out, err).run(args);
}

}  // namespace sellopt::cli
