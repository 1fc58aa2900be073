#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rach/kmc.hpp"
#include "rach/traffic.hpp"

namespace rach {

enum class LagMode {
  SlotGap,       ///< retry delay uses the realized origin-destination gap
  OriginMaxLag,  ///< retry delay uses k_j * delta_sf of the origin slot
};

enum class OptimizerMode { Bound, Exact, Both };

enum class PolicyKind { Shared, Disjoint, Joint };

struct RachConfig {
  int M = 54;
  int W = 10;
  int w_bo_ms = 20;
  int t_rar_ms = 2;
  int w_rar_ms = 5;
  int delta_sf_ms = 10;

  bool operator==(const RachConfig&) const = default;
};

struct TrafficConfig {
  enum class M2MType { Type1, Type2 };
  M2MType m2m_type = M2MType::Type2;
  double alpha = 3.0;
  double beta = 4.0;
  long n_mtc = 0;
  /// Exactly one unit convention is recorded; the other stays unset (< 0).
  double h2h_lambda_per_slot = -1.0;
  double h2h_lambda_per_second = -1.0;

  bool operator==(const TrafficConfig&) const = default;
};

struct PolicyConfig {
  PolicyKind kind = PolicyKind::Shared;
  int a = 0;
  int x = 0;

  bool operator==(const PolicyConfig&) const = default;
};

struct SimConfig {
  int replications = 10;
  std::uint64_t seed = 1;

  bool operator==(const SimConfig&) const = default;
};

struct OptimizerConfig {
  std::vector<double> phi_ms{20.0};
  OptimizerMode mode = OptimizerMode::Both;
  bool include_delay_factor = true;

  bool operator==(const OptimizerConfig&) const = default;
};

struct ModelConfig {
  JaMode ja_mode = JaMode::Mixture;
  LagMode lag_mode = LagMode::SlotGap;
  SuccessForm m2m_success = SuccessForm::Poisson;

  bool operator==(const ModelConfig&) const = default;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> reports;  ///< empty means every report of the subcommand

  bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
  std::string scenario_id = "scenario";
  RachConfig rach;
  int horizon_ms = 10000;
  TrafficConfig traffic;
  PolicyConfig policy;
  SimConfig sim;
  OptimizerConfig optimizer;
  ModelConfig model;
  OutputConfig output;

  SlotGrid grid() const { return SlotGrid(rach.delta_sf_ms, horizon_ms); }
  BackoffGeometry geometry() const { return {rach.t_rar_ms, rach.w_rar_ms, rach.w_bo_ms}; }
  AllocationPolicy allocation() const;
  ArrivalModel m2m_model() const;
  ArrivalModel h2h_model() const;
  double h2h_lambda_slot() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Reference PRACH setup (M=54, W=10, 20 ms backoff, 10 ms RA-TS period, 10 s horizon),
/// no traffic, shared pool.
ScenarioConfig table_one_config();

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { Syntax, MissingKey, UnknownKey, TypeMismatch, Constraint, Io };

  ConfigError(Kind kind, std::string key, const std::string& message);

  Kind kind() const { return kind_; }
  const std::string& key() const { return key_; }

 private:
  Kind kind_;
  std::string key_;
};

std::string_view to_string(ConfigError::Kind kind);

/// Parse the `key = value` format. `#` starts a comment; lists are comma separated.
ScenarioConfig parse_config_string(const std::string& text);
ScenarioConfig parse_config(const std::filesystem::path& path);

/// Canonical text form; parse_config_string(serialize(c)) reproduces c.
std::string serialize(const ScenarioConfig& config);

/// Checks every bound; throws ConfigError(Constraint).
void validate(const ScenarioConfig& config);

std::string_view to_string(PolicyKind kind);
/// Split parameter of the configured policy (a, x, or M for shared).
int split_param(const ScenarioConfig& config);

}  // namespace rach
