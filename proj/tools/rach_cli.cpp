// Batch front end: analyze | simulate | compare | optimize | validate | sweep.
//
// Exit codes: 0 ok, 2 config error, 3 runtime error or infeasible result, 4 I/O error.
// optimize exits 3 only when every requested threshold is infeasible.
// Fatal errors go to stderr as "error[<class>]: <message>".

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rach/config.hpp"
#include "rach/metrics.hpp"
#include "rach/optimizer.hpp"
#include "rach/oracles.hpp"
#include "rach/pipeline.hpp"
#include "rach/report.hpp"
#include "rach/simulator.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  int replications = -1;
  // sweep
  std::string param = "x";
  std::string range;
  // optimize
  std::vector<double> phi;
  std::string mode;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

bool wants(const rach::ScenarioConfig& config, const std::string& report) {
  const auto& r = config.output.reports;
  return r.empty() || std::find(r.begin(), r.end(), report) != r.end();
}

rach::ScenarioConfig load(const Options& opt) {
  rach::ScenarioConfig config = rach::parse_config(opt.config_path);
  if (!opt.out_dir.empty()) config.output.directory = opt.out_dir;
  if (opt.seed >= 0) config.sim.seed = static_cast<std::uint64_t>(opt.seed);
  if (opt.replications >= 0) config.sim.replications = opt.replications;
  rach::validate(config);
  return config;
}

fs::path prepare_out_dir(const rach::ScenarioConfig& config, const std::string& command_line) {
  const fs::path dir(config.output.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  rach::write_manifest(dir / "manifest.txt", config, command_line);
  return dir;
}

void write_metrics_bundle(const fs::path& dir, const std::string& prefix,
                          const rach::ScenarioConfig& config, const rach::MetricsReport& report) {
  {
    auto out = open_output(dir / (prefix + "metrics.csv"));
    rach::write_metrics_header(out);
    rach::write_metrics_rows(out, config, report);
  }
  for (rach::Scope s : rach::kScopes) {
    auto out = open_output(dir / (prefix + "cdf_" + std::string(rach::to_string(s)) + ".csv"));
    rach::write_cdf_csv(out, report[s]);
  }
  if (report.collision_above_one)
    std::cerr << "warning: collision probability per RAO exceeds 1 ("
              << rach::format_value(report[rach::Scope::Total].collision_prob) << ")\n";
}

int run_analyze(const Options& opt, const std::string& cmd) {
  const auto config = load(opt);
  const fs::path dir = prepare_out_dir(config, cmd);
  const rach::Analysis analysis = rach::analyze(config);
  if (wants(config, "population")) {
    auto out = open_output(dir / "population.csv");
    rach::write_population_csv(out, analysis.populations, config.grid());
  }
  if (wants(config, "transition")) {
    auto out = open_output(dir / "transition.csv");
    rach::write_transition_csv(out, analysis.matrix);
  }
  write_metrics_bundle(dir, "", config, analysis.metrics);
  return kExitOk;
}

rach::BatchResult simulate_batch(const rach::ScenarioConfig& config) {
  const auto seeds = rach::consecutive_seeds(config.sim.seed, config.sim.replications);
  return rach::run_batch(config, seeds, true);
}

int run_simulate(const Options& opt, const std::string& cmd) {
  const auto config = load(opt);
  const fs::path dir = prepare_out_dir(config, cmd);
  const rach::BatchResult batch = simulate_batch(config);
  write_metrics_bundle(dir, "", config, batch.mean);
  {
    auto out = open_output(dir / "metrics_stddev.csv");
    rach::write_metrics_header(out);
    rach::write_metrics_rows(out, config, batch.stddev);
  }
  for (const rach::SimTrace& trace : batch.traces) {
    const std::string tag = "_seed" + std::to_string(trace.seed) + ".csv";
    if (wants(config, "ue_records")) {
      auto out = open_output(dir / ("ue_records" + tag));
      rach::write_ue_records_csv(out, trace);
    }
    if (wants(config, "slot_outcomes")) {
      auto out = open_output(dir / ("slot_outcomes" + tag));
      rach::write_slot_outcomes_csv(out, trace);
    }
  }
  return kExitOk;
}

double relative_error(double analysis, double simulation) {
  if (analysis == simulation) return 0.0;
  if (simulation == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(analysis - simulation) / std::abs(simulation);
}

int run_compare(const Options& opt, const std::string& cmd) {
  const auto config = load(opt);
  const fs::path dir = prepare_out_dir(config, cmd);
  const rach::Analysis analysis = rach::analyze(config);
  const rach::BatchResult batch = simulate_batch(config);
  auto out = open_output(dir / "compare.csv");
  out << "metric,class,analysis,simulation,sim_stddev,rel_error\n";
  auto row = [&](const std::string& name, rach::Scope s, double a, double sim, double sd) {
    out << name << ',' << rach::to_string(s) << ',' << rach::format_value(a) << ','
        << rach::format_value(sim) << ',' << rach::format_value(sd) << ','
        << rach::format_value(relative_error(a, sim)) << '\n';
  };
  for (rach::Scope s : rach::kScopes) {
    const auto& a = analysis.metrics[s];
    const auto& m = batch.mean[s];
    const auto& sd = batch.stddev[s];
    row("P_s", s, a.success_prob, m.success_prob, sd.success_prob);
    row("P_f", s, a.collision_prob, m.collision_prob, sd.collision_prob);
    row("E_tau_ms", s, a.expected_delay_ms, m.expected_delay_ms, sd.expected_delay_ms);
    row("blocked", s, a.blocked, m.blocked, sd.blocked);
    for (std::size_t r = 0; r < a.preamble_cdf.size() && r < m.preamble_cdf.size(); ++r)
      row("F_p(" + std::to_string(r + 1) + ")", s, a.preamble_cdf[r], m.preamble_cdf[r],
          sd.preamble_cdf[r]);
  }
  return kExitOk;
}

int run_optimize(const Options& opt, const std::string& cmd) {
  auto config = load(opt);
  if (!opt.phi.empty()) config.optimizer.phi_ms = opt.phi;
  if (!opt.mode.empty()) {
    if (opt.mode == "bound") config.optimizer.mode = rach::OptimizerMode::Bound;
    else if (opt.mode == "exact") config.optimizer.mode = rach::OptimizerMode::Exact;
    else if (opt.mode == "both") config.optimizer.mode = rach::OptimizerMode::Both;
    else throw rach::ConfigError(rach::ConfigError::Kind::TypeMismatch, "optimizer.mode",
                                 "--mode must be bound, exact or both");
  }
  rach::validate(config);
  const fs::path dir = prepare_out_dir(config, cmd);
  const auto rows = rach::optimize_sweep(config, config.optimizer.phi_ms, config.optimizer.mode);
  {
    auto out = open_output(dir / "optimizer.csv");
    rach::write_optimizer_csv(out, rows);
  }
  // Infeasible thresholds are part of the table; the run only fails when none is feasible.
  std::size_t infeasible = 0;
  for (const auto& row : rows) {
    const auto& primary = row.exact ? row.exact : row.bound;
    if (primary && !primary->feasible) {
      ++infeasible;
      std::cerr << "warning[infeasible]: no x meets phi = " << rach::format_value(row.phi_ms)
                << " ms (minimum " << rach::format_value(primary->min_value) << " ms at x = "
                << primary->argmin_x << ")\n";
    }
  }
  if (!rows.empty() && infeasible == rows.size()) {
    std::cerr << "error[infeasible]: no threshold in the phi list is attainable\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int run_validate(const Options& opt, const std::string& cmd) {
  const auto config = load(opt);
  const fs::path dir = prepare_out_dir(config, cmd);
  const auto rows = rach::validation_report(config, config.sim.seed);
  {
    auto out = open_output(dir / "validation.csv");
    rach::write_validation_csv(out, rows);
  }
  int failed = 0;
  for (const auto& r : rows) failed += r.pass() ? 0 : 1;
  if (failed > 0) {
    std::cerr << "error[validation]: " << failed << " oracle checks failed\n";
    return kExitRuntime;
  }
  return kExitOk;
}

std::pair<int, int> parse_range(const std::string& text, int M) {
  if (text.empty()) return {1, M - 1};
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw rach::ConfigError(rach::ConfigError::Kind::TypeMismatch, "--range",
                            "--range must look like lo:hi");
  }
}

int run_sweep(const Options& opt, const std::string& cmd) {
  auto config = load(opt);
  if (opt.param != "x" && opt.param != "a")
    throw rach::ConfigError(rach::ConfigError::Kind::TypeMismatch, "--param", "--param must be x or a");
  const auto [lo, hi] = parse_range(opt.range, config.rach.M);
  if (lo < 1 || hi >= config.rach.M || lo > hi)
    throw rach::ConfigError(rach::ConfigError::Kind::Constraint, "--range",
                            "--range must satisfy 1 <= lo <= hi < M");
  const fs::path dir = prepare_out_dir(config, cmd);
  auto out = open_output(dir / "sweep.csv");
  out << opt.param << ",P_s_m2m,E_tau_ms\n";
  for (int v = lo; v <= hi; ++v) {
    rach::ScenarioConfig point = config;
    if (opt.param == "x") {
      point.policy.kind = rach::PolicyKind::Joint;
      point.policy.x = v;
    } else {
      point.policy.kind = rach::PolicyKind::Disjoint;
      point.policy.a = v;
    }
    const auto analysis = rach::analyze(point);
    const auto& m = analysis.metrics[rach::Scope::M2M];
    out << v << ',' << rach::format_value(m.success_prob) << ','
        << rach::format_value(m.expected_delay_ms) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTE random-access overload toolkit (analysis, simulation, preamble split optimizer)"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Scenario config file")->required();
    sub->add_option("--out-dir", opt.out_dir, "Output directory (overrides output.directory)");
    sub->add_option("--seed", opt.seed, "Base seed (overrides sim.seed)");
    sub->add_option("--replications", opt.replications, "Replications (overrides sim.replications)");
  };

  auto* analyze = app.add_subcommand("analyze", "Analytical populations and metrics");
  auto* simulate = app.add_subcommand("simulate", "Simulation traces and empirical metrics");
  auto* compare = app.add_subcommand("compare", "Analysis vs simulation with relative errors");
  auto* optimize = app.add_subcommand("optimize", "x-dagger sweep over phi");
  auto* validate = app.add_subcommand("validate", "Oracle vs engine report");
  auto* sweep = app.add_subcommand("sweep", "Metrics vs split parameter");
  for (auto* sub : {analyze, simulate, compare, optimize, validate, sweep}) add_common(sub);
  optimize->add_option("--phi", opt.phi, "Delay thresholds in ms (overrides optimizer.phi_ms)")
      ->delimiter(',');
  optimize->add_option("--mode", opt.mode, "bound | exact | both");
  sweep->add_option("--param", opt.param, "x (joint) or a (disjoint)");
  sweep->add_option("--range", opt.range, "lo:hi, default 1:M-1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << '\n';
    return kExitConfig;
  }

  std::string cmd;
  for (int k = 0; k < argc; ++k) cmd += (k ? " " : "") + std::string(argv[k]);

  try {
    if (analyze->parsed()) return run_analyze(opt, cmd);
    if (simulate->parsed()) return run_simulate(opt, cmd);
    if (compare->parsed()) return run_compare(opt, cmd);
    if (optimize->parsed()) return run_optimize(opt, cmd);
    if (validate->parsed()) return run_validate(opt, cmd);
    if (sweep->parsed()) return run_sweep(opt, cmd);
  } catch (const rach::ConfigError& e) {
    std::cerr << "error[config." << rach::to_string(e.kind()) << "]: " << e.what() << '\n';
    return e.kind() == rach::ConfigError::Kind::Io ? kExitIo : kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "error[io]: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error[io]: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error[runtime]: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
