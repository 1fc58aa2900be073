#include "rach/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace rach {

ConfigError::ConfigError(Kind kind, std::string key, const std::string& message)
    : std::runtime_error(message), kind_(kind), key_(std::move(key)) {}

std::string_view to_string(ConfigError::Kind kind) {
  switch (kind) {
    case ConfigError::Kind::Syntax: return "syntax";
    case ConfigError::Kind::MissingKey: return "missing_key";
    case ConfigError::Kind::UnknownKey: return "unknown_key";
    case ConfigError::Kind::TypeMismatch: return "type_mismatch";
    case ConfigError::Kind::Constraint: return "constraint";
    case ConfigError::Kind::Io: return "io";
  }
  return "config";
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Shared: return "shared";
    case PolicyKind::Disjoint: return "da";
    case PolicyKind::Joint: return "ja";
  }
  return "shared";
}

AllocationPolicy ScenarioConfig::allocation() const {
  switch (policy.kind) {
    case PolicyKind::Disjoint: return DisjointPolicy{policy.a, rach.M};
    case PolicyKind::Joint: return JointPolicy{policy.x, rach.M};
    case PolicyKind::Shared: break;
  }
  return SharedPolicy{rach.M};
}

ArrivalModel ScenarioConfig::m2m_model() const {
  if (traffic.m2m_type == TrafficConfig::M2MType::Type1) return M2MType1{traffic.n_mtc};
  return M2MType2{traffic.alpha, traffic.beta, traffic.n_mtc};
}

double ScenarioConfig::h2h_lambda_slot() const {
  if (traffic.h2h_lambda_per_slot >= 0.0) return traffic.h2h_lambda_per_slot;
  if (traffic.h2h_lambda_per_second >= 0.0)
    return H2HPoisson::per_second(traffic.h2h_lambda_per_second, grid()).lambda_slot;
  return 0.0;
}

ArrivalModel ScenarioConfig::h2h_model() const { return H2HPoisson{h2h_lambda_slot()}; }

int split_param(const ScenarioConfig& config) {
  switch (config.policy.kind) {
    case PolicyKind::Disjoint: return config.policy.a;
    case PolicyKind::Joint: return config.policy.x;
    case PolicyKind::Shared: break;
  }
  return config.rach.M;
}

ScenarioConfig table_one_config() { return ScenarioConfig{}; }

namespace {

using Kind = ConfigError::Kind;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last)
    throw ConfigError(Kind::TypeMismatch, key, key + ": cannot parse '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  // from_chars for double is unavailable on some standard libraries; strtod is enough here.
  char* end = nullptr;
  const double out = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    throw ConfigError(Kind::TypeMismatch, key, key + ": cannot parse '" + value + "' as number");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(Kind::TypeMismatch, key, key + ": expected true or false");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <typename E>
E parse_enum(const std::string& key, const std::string& value,
             const std::map<std::string, E>& choices) {
  auto it = choices.find(value);
  if (it == choices.end()) {
    std::string names;
    for (const auto& [name, _] : choices) names += (names.empty() ? "" : "|") + name;
    throw ConfigError(Kind::TypeMismatch, key, key + ": expected one of " + names);
  }
  return it->second;
}

const std::map<std::string, PolicyKind> kPolicyKinds{
    {"shared", PolicyKind::Shared}, {"da", PolicyKind::Disjoint}, {"ja", PolicyKind::Joint}};
const std::map<std::string, TrafficConfig::M2MType> kM2MTypes{
    {"type1", TrafficConfig::M2MType::Type1}, {"type2", TrafficConfig::M2MType::Type2}};
const std::map<std::string, OptimizerMode> kOptimizerModes{
    {"bound", OptimizerMode::Bound}, {"exact", OptimizerMode::Exact}, {"both", OptimizerMode::Both}};
const std::map<std::string, JaMode> kJaModes{{"mixture", JaMode::Mixture},
                                             {"as_written", JaMode::AsWritten}};
const std::map<std::string, SuccessForm> kSuccessForms{{"tagged", SuccessForm::Tagged},
                                                       {"poisson", SuccessForm::Poisson}};
const std::map<std::string, LagMode> kLagModes{{"slot_gap", LagMode::SlotGap},
                                               {"origin_max_lag", LagMode::OriginMaxLag}};

template <typename E>
std::string enum_name(E value, const std::map<std::string, E>& choices) {
  for (const auto& [name, v] : choices)
    if (v == value) return name;
  return {};
}

using Setter = std::function<void(ScenarioConfig&, const std::string& key, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"scenario.id", [](auto& c, auto&, auto& v) { c.scenario_id = v; }},
      {"rach.M", [](auto& c, auto& k, auto& v) { c.rach.M = parse_number<int>(k, v); }},
      {"rach.W", [](auto& c, auto& k, auto& v) { c.rach.W = parse_number<int>(k, v); }},
      {"rach.W_BO_ms", [](auto& c, auto& k, auto& v) { c.rach.w_bo_ms = parse_number<int>(k, v); }},
      {"rach.T_RAR_ms", [](auto& c, auto& k, auto& v) { c.rach.t_rar_ms = parse_number<int>(k, v); }},
      {"rach.W_RAR_ms", [](auto& c, auto& k, auto& v) { c.rach.w_rar_ms = parse_number<int>(k, v); }},
      {"time.delta_sf_ms",
       [](auto& c, auto& k, auto& v) { c.rach.delta_sf_ms = parse_number<int>(k, v); }},
      {"time.T_ms", [](auto& c, auto& k, auto& v) { c.horizon_ms = parse_number<int>(k, v); }},
      {"traffic.m2m.type",
       [](auto& c, auto& k, auto& v) { c.traffic.m2m_type = parse_enum(k, v, kM2MTypes); }},
      {"traffic.m2m.alpha", [](auto& c, auto& k, auto& v) { c.traffic.alpha = parse_double(k, v); }},
      {"traffic.m2m.beta", [](auto& c, auto& k, auto& v) { c.traffic.beta = parse_double(k, v); }},
      {"traffic.m2m.n_mtc",
       [](auto& c, auto& k, auto& v) { c.traffic.n_mtc = parse_number<long>(k, v); }},
      {"traffic.h2h.lambda_per_slot",
       [](auto& c, auto& k, auto& v) { c.traffic.h2h_lambda_per_slot = parse_double(k, v); }},
      {"traffic.h2h.lambda_per_second",
       [](auto& c, auto& k, auto& v) { c.traffic.h2h_lambda_per_second = parse_double(k, v); }},
      {"policy.kind",
       [](auto& c, auto& k, auto& v) { c.policy.kind = parse_enum(k, v, kPolicyKinds); }},
      {"policy.a", [](auto& c, auto& k, auto& v) { c.policy.a = parse_number<int>(k, v); }},
      {"policy.x", [](auto& c, auto& k, auto& v) { c.policy.x = parse_number<int>(k, v); }},
      {"sim.replications",
       [](auto& c, auto& k, auto& v) { c.sim.replications = parse_number<int>(k, v); }},
      {"sim.seed",
       [](auto& c, auto& k, auto& v) { c.sim.seed = parse_number<std::uint64_t>(k, v); }},
      {"optimizer.phi_ms",
       [](auto& c, auto& k, auto& v) {
         c.optimizer.phi_ms.clear();
         for (const auto& item : split_list(v)) c.optimizer.phi_ms.push_back(parse_double(k, item));
       }},
      {"optimizer.mode",
       [](auto& c, auto& k, auto& v) { c.optimizer.mode = parse_enum(k, v, kOptimizerModes); }},
      {"optimizer.include_delay_factor",
       [](auto& c, auto& k, auto& v) { c.optimizer.include_delay_factor = parse_bool(k, v); }},
      {"model.ja_mode", [](auto& c, auto& k, auto& v) { c.model.ja_mode = parse_enum(k, v, kJaModes); }},
      {"model.lag_mode",
       [](auto& c, auto& k, auto& v) { c.model.lag_mode = parse_enum(k, v, kLagModes); }},
      {"model.m2m_success",
       [](auto& c, auto& k, auto& v) { c.model.m2m_success = parse_enum(k, v, kSuccessForms); }},
      {"output.directory", [](auto& c, auto&, auto& v) { c.output.directory = v; }},
      {"output.reports", [](auto& c, auto&, auto& v) { c.output.reports = split_list(v); }},
  };
  return table;
}

const std::set<std::string> kRequiredKeys{
    "rach.M",         "rach.W",          "rach.W_BO_ms",     "rach.T_RAR_ms", "rach.W_RAR_ms",
    "time.delta_sf_ms", "time.T_ms",     "traffic.m2m.type", "traffic.m2m.n_mtc"};

void constraint(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(Kind::Constraint, key, key + ": " + message);
}

}  // namespace

void validate(const ScenarioConfig& c) {
  constraint(c.rach.M >= 1, "rach.M", "M must be >= 1");
  constraint(c.rach.W >= 1, "rach.W", "W must be >= 1");
  constraint(c.rach.w_bo_ms >= 0, "rach.W_BO_ms", "must be >= 0");
  constraint(c.rach.t_rar_ms >= 0, "rach.T_RAR_ms", "must be >= 0");
  constraint(c.rach.w_rar_ms >= 0, "rach.W_RAR_ms", "must be >= 0");
  constraint(c.rach.delta_sf_ms > 0, "time.delta_sf_ms", "must be > 0");
  constraint(c.horizon_ms > 0, "time.T_ms", "must be > 0");
  constraint(c.horizon_ms >= c.rach.delta_sf_ms, "time.T_ms", "horizon must hold at least one RA-TS");
  constraint(c.traffic.alpha > 0.0, "traffic.m2m.alpha", "must be > 0");
  constraint(c.traffic.beta > 0.0, "traffic.m2m.beta", "must be > 0");
  constraint(c.traffic.n_mtc >= 0, "traffic.m2m.n_mtc", "must be >= 0");
  constraint(!(c.traffic.h2h_lambda_per_slot >= 0.0 && c.traffic.h2h_lambda_per_second >= 0.0),
             "traffic.h2h.lambda_per_second", "set only one of lambda_per_slot, lambda_per_second");
  constraint(c.h2h_lambda_slot() >= 0.0, "traffic.h2h.lambda_per_slot", "must be >= 0");
  if (c.policy.kind == PolicyKind::Disjoint)
    constraint(c.policy.a > 0 && c.policy.a < c.rach.M, "policy.a", "a must satisfy 0 < a < M");
  if (c.policy.kind == PolicyKind::Joint)
    constraint(c.policy.x > 0 && c.policy.x < c.rach.M, "policy.x", "x must satisfy 0 < x < M");
  constraint(c.sim.replications >= 1, "sim.replications", "must be >= 1");
  for (double phi : c.optimizer.phi_ms) constraint(phi > 0.0, "optimizer.phi_ms", "must be > 0");
}

ScenarioConfig parse_config_string(const std::string& text) {
  ScenarioConfig config;
  // Negative sentinels mean "not given"; a config must state its unit explicitly.
  config.traffic.h2h_lambda_per_slot = -1.0;
  config.traffic.h2h_lambda_per_second = -1.0;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ConfigError(Kind::Syntax, "", "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(Kind::UnknownKey, key, "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(Kind::Syntax, key, "duplicate key '" + key + "'");
    it->second(config, key, value);
  }
  for (const auto& key : kRequiredKeys)
    if (!seen.count(key)) throw ConfigError(Kind::MissingKey, key, "missing required key '" + key + "'");
  if (config.policy.kind == PolicyKind::Disjoint && !seen.count("policy.a"))
    throw ConfigError(Kind::MissingKey, "policy.a", "missing required key 'policy.a' for policy da");
  if (config.policy.kind == PolicyKind::Joint && !seen.count("policy.x"))
    throw ConfigError(Kind::MissingKey, "policy.x", "missing required key 'policy.x' for policy ja");
  validate(config);
  return config;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(Kind::Io, "", "cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_string(buffer.str());
}

std::string serialize(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "scenario.id = " << c.scenario_id << '\n'
     << "rach.M = " << c.rach.M << '\n'
     << "rach.W = " << c.rach.W << '\n'
     << "rach.W_BO_ms = " << c.rach.w_bo_ms << '\n'
     << "rach.T_RAR_ms = " << c.rach.t_rar_ms << '\n'
     << "rach.W_RAR_ms = " << c.rach.w_rar_ms << '\n'
     << "time.delta_sf_ms = " << c.rach.delta_sf_ms << '\n'
     << "time.T_ms = " << c.horizon_ms << '\n'
     << "traffic.m2m.type = " << enum_name(c.traffic.m2m_type, kM2MTypes) << '\n'
     << "traffic.m2m.alpha = " << format_double(c.traffic.alpha) << '\n'
     << "traffic.m2m.beta = " << format_double(c.traffic.beta) << '\n'
     << "traffic.m2m.n_mtc = " << c.traffic.n_mtc << '\n';
  if (c.traffic.h2h_lambda_per_second >= 0.0)
    os << "traffic.h2h.lambda_per_second = " << format_double(c.traffic.h2h_lambda_per_second) << '\n';
  else if (c.traffic.h2h_lambda_per_slot >= 0.0)
    os << "traffic.h2h.lambda_per_slot = " << format_double(c.traffic.h2h_lambda_per_slot) << '\n';
  os << "policy.kind = " << to_string(c.policy.kind) << '\n';
  if (c.policy.kind == PolicyKind::Disjoint) os << "policy.a = " << c.policy.a << '\n';
  if (c.policy.kind == PolicyKind::Joint) os << "policy.x = " << c.policy.x << '\n';
  os << "sim.replications = " << c.sim.replications << '\n' << "sim.seed = " << c.sim.seed << '\n';
  os << "optimizer.phi_ms = ";
  for (std::size_t k = 0; k < c.optimizer.phi_ms.size(); ++k)
    os << (k ? ", " : "") << format_double(c.optimizer.phi_ms[k]);
  os << '\n'
     << "optimizer.mode = " << enum_name(c.optimizer.mode, kOptimizerModes) << '\n'
     << "optimizer.include_delay_factor = " << (c.optimizer.include_delay_factor ? "true" : "false")
     << '\n'
     << "model.ja_mode = " << enum_name(c.model.ja_mode, kJaModes) << '\n'
     << "model.lag_mode = " << enum_name(c.model.lag_mode, kLagModes) << '\n'
     << "model.m2m_success = " << enum_name(c.model.m2m_success, kSuccessForms) << '\n'
     << "output.directory = " << c.output.directory << '\n';
  if (!c.output.reports.empty()) {
    os << "output.reports = ";
    for (std::size_t k = 0; k < c.output.reports.size(); ++k)
      os << (k ? ", " : "") << c.output.reports[k];
    os << '\n';
  }
  return os.str();
}

}  // namespace rach
