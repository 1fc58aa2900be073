#include "rach/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rach {

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

void write_population_csv(std::ostream& os, const PopulationGrid& pop, const SlotGrid& grid) {
  os << "slot,t_ms,class,retry_order,expected,expected_success,expected_fail\n";
  for (int i = 1; i <= pop.eta; ++i) {
    for (UeClass c : kUeClasses) {
      for (int n = 1; n <= pop.max_transmissions; ++n) {
        os << i << ',' << grid.slot_time(i) << ',' << to_string(c) << ',' << n << ','
           << format_value(pop.expected(i, n, c)) << ','
           << format_value(pop.expected_success(i, n, c)) << ','
           << format_value(pop.expected_fail(i, n, c)) << '\n';
      }
    }
  }
}

void write_transition_csv(std::ostream& os, const TransitionMatrix& matrix) {
  os << "dest,origin,prob\n";
  const auto& kernel = matrix.by_origin();
  for (int j = 0; j < kernel.outerSize(); ++j)
    for (TransitionMatrix::OriginMajor::InnerIterator it(kernel, j); it; ++it)
      os << it.row() + 1 << ',' << j + 1 << ',' << format_value(it.value()) << '\n';
}

void write_metrics_header(std::ostream& os) {
  os << "scenario_id,policy,split_param,class,P_s,P_f,E_tau_ms,blocked\n";
}

void write_metrics_rows(std::ostream& os, const ScenarioConfig& config, const MetricsReport& report) {
  for (Scope s : kScopes) {
    const ClassMetrics& m = report[s];
    os << config.scenario_id << ',' << to_string(config.policy.kind) << ',' << split_param(config)
       << ',' << to_string(s) << ',' << format_value(m.success_prob) << ','
       << format_value(m.collision_prob) << ',' << format_value(m.expected_delay_ms) << ','
       << format_value(m.blocked) << '\n';
  }
}

void write_cdf_csv(std::ostream& os, const ClassMetrics& metrics) {
  os << "kind,abscissa,value\n";
  for (std::size_t r = 0; r < metrics.preamble_cdf.size(); ++r)
    os << "preamble," << r + 1 << ',' << format_value(metrics.preamble_cdf[r]) << '\n';
  for (std::size_t w = 0; w < metrics.delay_mass_cdf.size(); ++w)
    os << "delay_mass," << w + 1 << ',' << format_value(metrics.delay_mass_cdf[w]) << '\n';
  for (const auto& [delay, fraction] : metrics.delay_cdf)
    os << "delay," << format_value(delay) << ',' << format_value(fraction) << '\n';
}

void write_ue_records_csv(std::ostream& os, const SimTrace& trace) {
  os << "ue_id,class,arrival_ms,n_attempts,final,delay_ms\n";
  for (const UeRecord& ue : trace.ues) {
    os << ue.ue_id << ',' << to_string(ue.cls) << ',' << format_value(ue.arrival_ms) << ','
       << ue.attempts.size() << ',' << to_string(ue.final_state) << ','
       << (ue.final_state == FinalState::Success ? format_value(ue.delay_ms) : "") << '\n';
  }
}

void write_slot_outcomes_csv(std::ostream& os, const SimTrace& trace) {
  os << "slot,t_ms,contenders,successes,collisions\n";
  const SlotGrid grid = trace.config.grid();
  for (const SlotOutcome& s : trace.slots)
    os << s.slot << ',' << grid.slot_time(s.slot) << ',' << s.contenders << ',' << s.successes
       << ',' << s.collided << '\n';
}

void write_optimizer_csv(std::ostream& os, const std::vector<OptimizerRow>& rows) {
  os << "phi_ms,x_dagger_bound,x_dagger_exact,J_min_ms,feasible\n";
  for (const OptimizerRow& row : rows) {
    const XDagger* primary = row.exact ? &*row.exact : (row.bound ? &*row.bound : nullptr);
    os << format_value(row.phi_ms) << ',' << (row.bound ? std::to_string(row.bound->x_dagger) : "")
       << ',' << (row.exact ? std::to_string(row.exact->x_dagger) : "") << ','
       << (row.bound ? format_value(row.bound->min_value) : "") << ','
       << (primary && primary->feasible ? 1 : 0) << '\n';
  }
}

void write_validation_csv(std::ostream& os, const std::vector<OracleResult>& rows) {
  os << "check,params,method,samples,oracle,engine,abs_error,tolerance,pass\n";
  for (const OracleResult& r : rows) {
    os << r.check << ',' << r.params << ','
       << (r.method == OracleMethod::Exhaustive ? "exhaustive" : "monte-carlo") << ',' << r.samples
       << ',' << format_value(r.oracle) << ',' << format_value(r.engine) << ','
       << format_value(r.abs_error()) << ',' << format_value(r.tolerance) << ','
       << (r.pass() ? 1 : 0) << '\n';
  }
}

void write_manifest(const std::filesystem::path& path, const ScenarioConfig& config,
                    const std::string& command_line) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# toolkit_version = " << RACH_VERSION << '\n'
      << "# command = " << command_line << '\n'
      << "# seed = " << config.sim.seed << '\n'
      << serialize(config);
}

}  // namespace rach
