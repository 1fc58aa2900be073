#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "rach/config.hpp"
#include "rach/kmc.hpp"
#include "rach/metrics.hpp"
#include "rach/optimizer.hpp"
#include "rach/oracles.hpp"
#include "rach/trace.hpp"

namespace rach {

// CSV writers. Every table starts with a header row; numbers use 9 significant digits.

std::string format_value(double v);

/// slot,t_ms,class,retry_order,expected,expected_success,expected_fail
void write_population_csv(std::ostream& os, const PopulationGrid& pop, const SlotGrid& grid);

/// dest,origin,prob
void write_transition_csv(std::ostream& os, const TransitionMatrix& matrix);

/// scenario_id,policy,split_param,class,P_s,P_f,E_tau_ms,blocked
void write_metrics_header(std::ostream& os);
void write_metrics_rows(std::ostream& os, const ScenarioConfig& config, const MetricsReport& report);

/// kind,abscissa,value with kind in {preamble, delay_mass, delay}; `delay` is the
/// empirical CDF and only appears for trace-derived metrics.
void write_cdf_csv(std::ostream& os, const ClassMetrics& metrics);

/// ue_id,class,arrival_ms,n_attempts,final,delay_ms
void write_ue_records_csv(std::ostream& os, const SimTrace& trace);

/// slot,t_ms,contenders,successes,collisions
void write_slot_outcomes_csv(std::ostream& os, const SimTrace& trace);

/// phi_ms,x_dagger_bound,x_dagger_exact,J_min_ms,feasible
void write_optimizer_csv(std::ostream& os, const std::vector<OptimizerRow>& rows);

/// check,params,method,samples,oracle,engine,abs_error,tolerance,pass
void write_validation_csv(std::ostream& os, const std::vector<OracleResult>& rows);

/// Config echo plus seed and toolkit version; enough to rerun byte-identically.
void write_manifest(const std::filesystem::path& path, const ScenarioConfig& config,
                    const std::string& command_line);

}  // namespace rach
