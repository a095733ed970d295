#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "photocount/analytic_fpt.hpp"
#include "photocount/fokker_planck.hpp"
#include "photocount/json_io.hpp"
#include "photocount/montecarlo.hpp"
#include "photocount/stats.hpp"
#include "photocount/verify.hpp"

namespace {

using nlohmann::json;
using namespace photocount;

std::string fmt_double(double v) {
  char buf[40];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// Flags override the config file; the file fills in whatever was not given on
// the command line. Unknown file fields are schema errors.
class Settings {
public:
  Settings(CLI::App* cmd, const std::string& config_path) : cmd_(cmd) {
    if (config_path.empty())
      return;
    std::ifstream in(config_path);
    if (!in)
      throw UsageError("config: cannot open '" + config_path + "'");
    try {
      cfg_ = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
    if (!cfg_.is_object())
      throw UsageError("config: top level must be an object");
  }

  void number(const std::string& flag, const std::string& key, double& v) {
    known_.insert(key);
    if (cmd_->count(flag) > 0 || !cfg_.contains(key))
      return;
    if (!cfg_[key].is_number())
      throw UsageError("config: field '/" + key + "' must be a number");
    v = cfg_[key].get<double>();
  }

  void integer(const std::string& flag, const std::string& key, int& v) {
    known_.insert(key);
    if (cmd_->count(flag) > 0 || !cfg_.contains(key))
      return;
    if (!cfg_[key].is_number_integer())
      throw UsageError("config: field '/" + key + "' must be an integer");
    v = cfg_[key].get<int>();
  }

  void seed(const std::string& flag, const std::string& key,
            std::uint64_t& v) {
    known_.insert(key);
    if (cmd_->count(flag) > 0 || !cfg_.contains(key))
      return;
    if (!cfg_[key].is_number_unsigned() && !cfg_[key].is_number_integer())
      throw UsageError("config: field '/" + key + "' must be an integer");
    v = cfg_[key].get<std::uint64_t>();
  }

  void text(const std::string& flag, const std::string& key, std::string& v) {
    known_.insert(key);
    if (cmd_->count(flag) > 0 || !cfg_.contains(key))
      return;
    if (!cfg_[key].is_string())
      throw UsageError("config: field '/" + key + "' must be a string");
    v = cfg_[key].get<std::string>();
  }

  // the signal model may come from an inline JSON flag or the config file
  SignalModel signal(const std::string& inline_json, double constant_fallback) {
    known_.insert("signal");
    if (!inline_json.empty()) {
      try {
        return signal_model_from_json(json::parse(inline_json));
      } catch (const json::exception& e) {
        throw UsageError(std::string("config: field '/signal' ") + e.what());
      }
    }
    if (cfg_.contains("signal")) {
      try {
        return signal_model_from_json(cfg_["signal"]);
      } catch (const UsageError& e) {
        throw UsageError(std::string("config: field '/signal': ") + e.what());
      }
    }
    return SignalModel::constant(constant_fallback);
  }

  void done() const {
    for (const auto& item : cfg_.items())
      if (known_.find(item.key()) == known_.end())
        throw UsageError("config: unknown field '/" + item.key() + "'");
  }

private:
  CLI::App* cmd_;
  json cfg_ = json::object();
  std::set<std::string> known_;
};

// Every artifact starts with the resolved configuration, seed included, so a
// run can be reproduced from the file alone.
std::ofstream open_csv(const std::string& path, const std::string& subcommand,
                       const json& config) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw UsageError("cannot open output file '" + path + "'");
  out << "# photocount " << subcommand << "\n";
  out << "# config: " << config.dump() << "\n";
  return out;
}

void write_json_artifact(const std::string& path, json payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw UsageError("cannot open output file '" + path + "'");
  out << payload.dump(2) << "\n";
}

void write_train_csv(const std::string& path, const std::string& subcommand,
                     const json& config, const EventTrain& train) {
  auto out = open_csv(path, subcommand, config);
  out << "t\n";
  for (double t : train.timestamps())
    out << fmt_double(t) << "\n";
}

struct AnalyticArgs {
  double em = 1.0, is = 1.0, sigma = 1.0, tmax = 5.0;
  int points = 500;
  std::string out = "analytic.csv";
  std::string config;
};

void run_analytic(CLI::App* cmd, AnalyticArgs& a) {
  Settings s(cmd, a.config);
  s.number("--em", "em", a.em);
  s.number("--is", "is", a.is);
  s.number("--sigma", "sigma", a.sigma);
  s.number("--tmax", "tmax", a.tmax);
  s.integer("--points", "points", a.points);
  s.text("--out", "out", a.out);
  s.done();
  if (a.points < 1)
    throw UsageError("config: field '/points' must be >= 1");
  if (!(a.tmax > 0.0))
    throw UsageError("config: field '/tmax' must be > 0");
  const FptLaw law(a.em, a.is, a.sigma);
  const json config{{"em", a.em},       {"is", a.is},
                    {"sigma", a.sigma}, {"tmax", a.tmax},
                    {"points", a.points}};
  auto out = open_csv(a.out, "analytic", config);
  out << "t,cdf,pdf\n";
  for (int k = 1; k <= a.points; ++k) {
    const double t = a.tmax * k / a.points;
    out << fmt_double(t) << ',' << fmt_double(cdf(law, t)) << ','
        << fmt_double(pdf(law, t)) << "\n";
  }
}

struct PdeArgs {
  double em = 1.0, is = 1.0, sigma = 1.0, tmax = 5.0, dt = 1e-3;
  int cells = 2048, rows = 11;
  std::string out = "pde.csv";
  std::string cdf_out;
  std::string config;
};

void run_pde(CLI::App* cmd, PdeArgs& a) {
  Settings s(cmd, a.config);
  s.number("--em", "em", a.em);
  s.number("--is", "is", a.is);
  s.number("--sigma", "sigma", a.sigma);
  s.number("--tmax", "tmax", a.tmax);
  s.number("--dt", "dt", a.dt);
  s.integer("--cells", "cells", a.cells);
  s.integer("--rows", "rows", a.rows);
  s.text("--out", "out", a.out);
  s.text("--cdf-out", "cdf_out", a.cdf_out);
  s.done();
  if (a.rows < 2)
    throw UsageError("config: field '/rows' must be >= 2");
  const FptLaw law(a.em, a.is, a.sigma);
  const PdeGrid grid(law, a.cells, a.dt, a.tmax);
  const auto sol = solve(law, grid);
  const json config{{"em", a.em},   {"is", a.is},     {"sigma", a.sigma},
                    {"tmax", a.tmax}, {"dt", a.dt},   {"cells", a.cells},
                    {"rows", a.rows}};
  auto out = open_csv(a.out, "pde", config);
  out << "t,E,rho\n";
  const int last = static_cast<int>(sol.densities.size()) - 1;
  for (int r = 0; r < a.rows; ++r) {
    const int k = static_cast<int>(
        std::llround(static_cast<double>(r) * last / (a.rows - 1)));
    for (int node = 0; node <= grid.n_cells(); ++node)
      out << fmt_double(sol.time(k)) << ',' << fmt_double(grid.energy(node))
          << ',' << fmt_double(sol.densities[k][node]) << "\n";
  }
  if (!a.cdf_out.empty()) {
    auto cout_file = open_csv(a.cdf_out, "pde", config);
    cout_file << "t,numeric_cdf,analytic_cdf\n";
    for (int k = 0; k <= last; ++k) {
      const double t = sol.time(k);
      cout_file << fmt_double(t) << ',' << fmt_double(sol.absorbed[k]) << ','
                << fmt_double(cdf(law, t)) << "\n";
    }
  }
}

struct SampleArgs {
  double em = 1.0, is = 1.0, sigma = 1.0, step = 1e-3, horizon = 1e3;
  int n = 1000;
  std::uint64_t seed = 1;
  std::string out = "samples.csv";
  std::string config;
};

void run_sample_fpt(CLI::App* cmd, SampleArgs& a) {
  Settings s(cmd, a.config);
  s.number("--em", "em", a.em);
  s.number("--is", "is", a.is);
  s.number("--sigma", "sigma", a.sigma);
  s.number("--step", "step", a.step);
  s.number("--horizon", "horizon", a.horizon);
  s.integer("--n", "n", a.n);
  s.seed("--seed", "seed", a.seed);
  s.text("--out", "out", a.out);
  s.done();
  if (a.n < 1)
    throw UsageError("config: field '/n' must be >= 1");
  const FptLaw law(a.em, a.is, a.sigma);
  const RunConfig cfg(a.seed, a.step, a.horizon);
  const auto samples = sample_fpt(law, cfg, static_cast<std::size_t>(a.n));
  const json config{{"em", a.em},         {"is", a.is},
                    {"sigma", a.sigma},   {"step", a.step},
                    {"horizon", a.horizon}, {"n", a.n},
                    {"seed", a.seed}};
  auto out = open_csv(a.out, "sample-fpt", config);
  out << "t\n";
  for (double t : samples)
    out << fmt_double(t) << "\n";
}

struct DetectArgs {
  double em = 1.0, sigma = 1.0, area = 1.0, dead_time = 0.0, is = 1.0;
  double step = 1e-3, horizon = 100.0;
  std::uint64_t seed = 1;
  std::string signal_json;
  std::string out = "train.csv";
  std::string json_out;
  std::string config;
};

void run_detect(CLI::App* cmd, DetectArgs& a) {
  Settings s(cmd, a.config);
  s.number("--em", "em", a.em);
  s.number("--sigma", "sigma", a.sigma);
  s.number("--area", "area", a.area);
  s.number("--dead-time", "dead_time", a.dead_time);
  s.number("--is", "is", a.is);
  s.number("--step", "step", a.step);
  s.number("--horizon", "horizon", a.horizon);
  s.seed("--seed", "seed", a.seed);
  s.text("--out", "out", a.out);
  s.text("--json", "json_out", a.json_out);
  const SignalModel signal = s.signal(a.signal_json, a.is);
  s.done();
  const DetectorParams det(a.em, a.sigma, a.area, a.dead_time);
  const RunConfig cfg(a.seed, a.step, a.horizon);
  const auto train = simulate_detector(signal, det, cfg);
  const json config{{"em", a.em},           {"sigma", a.sigma},
                    {"area", a.area},       {"dead_time", a.dead_time},
                    {"step", a.step},       {"horizon", a.horizon},
                    {"seed", a.seed},       {"signal", to_json(signal)}};
  write_train_csv(a.out, "detect", config, train);
  if (!a.json_out.empty()) {
    json payload = to_json(train);
    payload["config"] = config;
    write_json_artifact(a.json_out, std::move(payload));
  }
  std::cout << to_json(empirical_rate(train)).dump() << "\n";
}

struct CoincideArgs {
  double em = 1.0, sigma = 1.0, em2 = -1.0, sigma2 = -1.0;
  double mean = 1.0, tau = 10.0, amplitude = 0.5, rho = 0.8;
  double step = 1e-3, horizon = 1000.0, delay = 0.0, window = 0.1;
  int path_stride = 10, surrogates = 10;
  std::uint64_t seed = 1;
  std::string out_a = "train_a.csv", out_b = "train_b.csv";
  std::string paths_out, report_out;
  std::string config;
};

void run_coincide(CLI::App* cmd, CoincideArgs& a) {
  Settings s(cmd, a.config);
  s.number("--em", "em", a.em);
  s.number("--sigma", "sigma", a.sigma);
  s.number("--em2", "em2", a.em2);
  s.number("--sigma2", "sigma2", a.sigma2);
  s.number("--mean", "mean", a.mean);
  s.number("--tau", "tau", a.tau);
  s.number("--amplitude", "amplitude", a.amplitude);
  s.number("--rho", "rho", a.rho);
  s.number("--step", "step", a.step);
  s.number("--horizon", "horizon", a.horizon);
  s.number("--delay", "delay", a.delay);
  s.number("--window", "window", a.window);
  s.integer("--path-stride", "path_stride", a.path_stride);
  s.integer("--surrogates", "surrogates", a.surrogates);
  s.seed("--seed", "seed", a.seed);
  s.text("--out-a", "out_a", a.out_a);
  s.text("--out-b", "out_b", a.out_b);
  s.text("--paths", "paths_out", a.paths_out);
  s.text("--report", "report_out", a.report_out);
  s.done();
  if (a.em2 <= 0.0)
    a.em2 = a.em;
  if (a.sigma2 <= 0.0)
    a.sigma2 = a.sigma;
  const auto signal =
      SignalModel::modulated_pair(a.mean, a.tau, a.amplitude, a.rho);
  const DetectorParams det1(a.em, a.sigma);
  const DetectorParams det2(a.em2, a.sigma2);
  const RunConfig cfg(a.seed, a.step, a.horizon, a.path_stride);
  const auto run = simulate_coincidence(signal, det1, det2, cfg);
  const json config{{"em", a.em},         {"sigma", a.sigma},
                    {"em2", a.em2},       {"sigma2", a.sigma2},
                    {"step", a.step},     {"horizon", a.horizon},
                    {"delay", a.delay},   {"window", a.window},
                    {"path_stride", a.path_stride},
                    {"surrogates", a.surrogates},
                    {"seed", a.seed},     {"signal", to_json(signal)}};
  write_train_csv(a.out_a, "coincide", config, run.first);
  write_train_csv(a.out_b, "coincide", config, run.second);
  if (!a.paths_out.empty()) {
    auto out = open_csv(a.paths_out, "coincide", config);
    out << "t,I1,I2\n";
    for (std::size_t k = 0; k < run.intensity_first.size(); ++k)
      out << fmt_double(run.path_dt * static_cast<double>(k)) << ','
          << fmt_double(run.intensity_first[k]) << ','
          << fmt_double(run.intensity_second[k]) << "\n";
  }
  const auto observed = coincidence_rate(run.first, run.second, a.delay,
                                         a.window);
  const auto baseline = shuffled_coincidence_rate(
      run.first, run.second, a.delay, a.window, a.surrogates, a.seed + 1);
  json report{{"config", config},
              {"validity_warning", run.validity_warning},
              {"singles_a", to_json(empirical_rate(run.first))},
              {"singles_b", to_json(empirical_rate(run.second))},
              {"coincidence", to_json(observed)},
              {"shuffled_baseline", to_json(baseline)}};
  if (baseline.rate > 0.0)
    report["excess_ratio"] = observed.rate / baseline.rate;
  if (!a.report_out.empty())
    write_json_artifact(a.report_out, report);
  std::cout << to_json(observed).dump() << "\n";
  if (run.validity_warning)
    std::cerr << "warning: relaxation time below the typical inter-count "
                 "interval; the rate law may not apply\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"threshold photodetection counting model"};
  app.require_subcommand(1);

  AnalyticArgs analytic_args;
  auto* analytic_cmd = app.add_subcommand(
      "analytic", "closed-form first-passage cdf/pdf table");
  analytic_cmd->add_option("--em", analytic_args.em, "detection threshold");
  analytic_cmd->add_option("--is", analytic_args.is, "signal intensity");
  analytic_cmd->add_option("--sigma", analytic_args.sigma, "noise scale");
  analytic_cmd->add_option("--tmax", analytic_args.tmax, "largest time");
  analytic_cmd->add_option("--points", analytic_args.points, "rows to emit");
  analytic_cmd->add_option("--out", analytic_args.out, "output CSV");
  analytic_cmd->add_option("--config", analytic_args.config, "JSON config");

  PdeArgs pde_args;
  auto* pde_cmd =
      app.add_subcommand("pde", "finite-difference density with absorbing "
                                "barrier");
  pde_cmd->add_option("--em", pde_args.em, "detection threshold");
  pde_cmd->add_option("--is", pde_args.is, "signal intensity");
  pde_cmd->add_option("--sigma", pde_args.sigma, "noise scale");
  pde_cmd->add_option("--tmax", pde_args.tmax, "time horizon");
  pde_cmd->add_option("--dt", pde_args.dt, "time step");
  pde_cmd->add_option("--cells", pde_args.cells, "energy cells");
  pde_cmd->add_option("--rows", pde_args.rows, "time rows to emit");
  pde_cmd->add_option("--out", pde_args.out, "density CSV (t,E,rho)");
  pde_cmd->add_option("--cdf-out", pde_args.cdf_out,
                      "per-step cdf comparison CSV");
  pde_cmd->add_option("--config", pde_args.config, "JSON config");

  SampleArgs sample_args;
  auto* sample_cmd =
      app.add_subcommand("sample-fpt", "Monte Carlo first-passage samples");
  sample_cmd->add_option("--em", sample_args.em, "detection threshold");
  sample_cmd->add_option("--is", sample_args.is, "signal intensity");
  sample_cmd->add_option("--sigma", sample_args.sigma, "noise scale");
  sample_cmd->add_option("--n", sample_args.n, "number of samples");
  sample_cmd->add_option("--seed", sample_args.seed, "master seed");
  sample_cmd->add_option("--step", sample_args.step, "integrator step");
  sample_cmd->add_option("--horizon", sample_args.horizon, "sampling cap");
  sample_cmd->add_option("--out", sample_args.out, "output CSV");
  sample_cmd->add_option("--config", sample_args.config, "JSON config");

  DetectArgs detect_args;
  auto* detect_cmd =
      app.add_subcommand("detect", "simulate one detector event train");
  detect_cmd->add_option("--em", detect_args.em, "detection threshold");
  detect_cmd->add_option("--sigma", detect_args.sigma, "noise scale");
  detect_cmd->add_option("--area", detect_args.area, "entrance area");
  detect_cmd->add_option("--dead-time", detect_args.dead_time, "dead time");
  detect_cmd->add_option("--is", detect_args.is,
                         "constant signal intensity (shorthand)");
  detect_cmd->add_option("--signal", detect_args.signal_json,
                         "signal model as inline JSON");
  detect_cmd->add_option("--seed", detect_args.seed, "master seed");
  detect_cmd->add_option("--step", detect_args.step, "integrator step");
  detect_cmd->add_option("--horizon", detect_args.horizon, "run horizon");
  detect_cmd->add_option("--out", detect_args.out, "event train CSV");
  detect_cmd->add_option("--json", detect_args.json_out, "event train JSON");
  detect_cmd->add_option("--config", detect_args.config, "JSON config");

  CoincideArgs coincide_args;
  auto* coincide_cmd = app.add_subcommand(
      "coincide", "two correlated detectors and coincidence statistics");
  coincide_cmd->add_option("--em", coincide_args.em, "threshold, detector 1");
  coincide_cmd->add_option("--sigma", coincide_args.sigma,
                           "noise scale, detector 1");
  coincide_cmd->add_option("--em2", coincide_args.em2,
                           "threshold, detector 2 (default = detector 1)");
  coincide_cmd->add_option("--sigma2", coincide_args.sigma2,
                           "noise scale, detector 2 (default = detector 1)");
  coincide_cmd->add_option("--mean", coincide_args.mean, "pair mean intensity");
  coincide_cmd->add_option("--tau", coincide_args.tau, "relaxation time");
  coincide_cmd->add_option("--amplitude", coincide_args.amplitude,
                           "fluctuation amplitude");
  coincide_cmd->add_option("--rho", coincide_args.rho, "cross correlation");
  coincide_cmd->add_option("--seed", coincide_args.seed, "master seed");
  coincide_cmd->add_option("--step", coincide_args.step, "integrator step");
  coincide_cmd->add_option("--horizon", coincide_args.horizon, "run horizon");
  coincide_cmd->add_option("--delay", coincide_args.delay, "coincidence delay");
  coincide_cmd->add_option("--window", coincide_args.window,
                           "coincidence window");
  coincide_cmd->add_option("--path-stride", coincide_args.path_stride,
                           "record every k-th intensity sample");
  coincide_cmd->add_option("--surrogates", coincide_args.surrogates,
                           "shuffled-baseline surrogate count");
  coincide_cmd->add_option("--out-a", coincide_args.out_a, "train 1 CSV");
  coincide_cmd->add_option("--out-b", coincide_args.out_b, "train 2 CSV");
  coincide_cmd->add_option("--paths", coincide_args.paths_out,
                           "intensity paths CSV (t,I1,I2)");
  coincide_cmd->add_option("--report", coincide_args.report_out,
                           "estimator report JSON");
  coincide_cmd->add_option("--config", coincide_args.config, "JSON config");

  verify::Options verify_opts;
  auto* verify_cmd =
      app.add_subcommand("verify", "run the full verification suite");
  verify_cmd->add_flag("--quick", verify_opts.quick,
                       "smaller runs, SE-scaled tolerances");
  verify_cmd->add_option("--seed", verify_opts.seed, "master seed");

  bool verify_ok = true;
  analytic_cmd->callback([&] { run_analytic(analytic_cmd, analytic_args); });
  pde_cmd->callback([&] { run_pde(pde_cmd, pde_args); });
  sample_cmd->callback([&] { run_sample_fpt(sample_cmd, sample_args); });
  detect_cmd->callback([&] { run_detect(detect_cmd, detect_args); });
  coincide_cmd->callback([&] { run_coincide(coincide_cmd, coincide_args); });
  verify_cmd->callback([&] {
    const auto results = verify::run_all(verify_opts);
    verify::print_table(results, std::cout);
    verify_ok = verify::all_passed(results);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return verify_ok ? 0 : 1;
}
