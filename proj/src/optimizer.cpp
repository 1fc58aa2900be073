#include "rach/optimizer.hpp"

#include <algorithm>
#include <limits>

#include "rach/metrics.hpp"
#include "rach/pipeline.hpp"

namespace rach {

double expected_state_delay(const BackoffGeometry& geom, double delta_sf_ms, int k) {
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  return (k * (k + 1) / 2.0) * delta_sf_ms + geom.rar_wait();
}

double objective(double x, const OptimizerInput& in) {
  const double M = in.M;
  const double numerator = bound_A_m2m(x, M, in.lambda, in.n_m2m);
  const double denominator = bound_B(x, M, in.W * in.lambda, in.W * in.n_m2m);
  if (numerator == 0.0) return 0.0;
  const double factor =
      in.include_delay_factor ? expected_state_delay(in.geom, in.delta_sf_ms, in.k) : 1.0;
  return factor * numerator / denominator;
}

XDagger pick_x_dagger(const Eigen::VectorXd& curve, double phi_ms) {
  XDagger out;
  out.curve = curve;
  out.min_value = std::numeric_limits<double>::infinity();
  for (int x = 1; x <= curve.size(); ++x) {
    const double v = curve(x - 1);
    if (std::isnan(v)) continue;
    if (v < out.min_value) {
      out.min_value = v;
      out.argmin_x = x;
    }
    if (v <= phi_ms) {
      out.feasible = true;
      out.x_dagger = x;
    }
  }
  return out;
}

XDagger solve_x_dagger(const OptimizerInput& input) {
  if (input.M < 2) throw std::invalid_argument("optimizer needs M >= 2");
  if (!(input.phi_ms > input.geom.rar_wait()))
    throw std::invalid_argument("phi must exceed T_RAR + W_RAR");
  Eigen::VectorXd curve(input.M - 1);
  for (int x = 1; x < input.M; ++x) curve(x - 1) = objective(double(x), input);
  return pick_x_dagger(curve, input.phi_ms);
}

OptimizerInput optimizer_input(const ScenarioConfig& config, double phi_ms) {
  const SlotGrid grid = config.grid();
  OptimizerInput in;
  in.M = config.rach.M;
  in.W = config.rach.W;
  in.lambda = config.h2h_lambda_slot();
  in.n_m2m = m2m_arrival_profile(config.m2m_model(), grid).maxCoeff();
  in.phi_ms = phi_ms;
  in.geom = config.geometry();
  in.delta_sf_ms = config.rach.delta_sf_ms;
  for (int i = 1; i <= grid.eta(); ++i) in.k = std::max(in.k, max_lag(i, in.geom, grid));
  in.include_delay_factor = config.optimizer.include_delay_factor;
  return in;
}

Eigen::VectorXd policy_delay_curve(const ScenarioConfig& config, PolicyKind kind) {
  if (kind == PolicyKind::Shared) throw std::invalid_argument("shared policy has no split parameter");
  const SlotGrid grid = config.grid();
  const BackoffGeometry geom = config.geometry();
  const TransitionMatrix matrix = build_matrix(geom, grid);
  const NewArrivals arrivals = scenario_arrivals(config);
  const int M = config.rach.M;
  Eigen::VectorXd curve = Eigen::VectorXd::Constant(std::max(M - 1, 0),
                                                    std::numeric_limits<double>::quiet_NaN());
  for (int s = 1; s < M; ++s) {
    const AllocationPolicy policy = kind == PolicyKind::Disjoint
                                        ? AllocationPolicy{DisjointPolicy{s, M}}
                                        : AllocationPolicy{JointPolicy{s, M}};
    const PopulationGrid pop = propagate(policy, matrix, arrivals, config.rach.W,
                                         config.model.ja_mode, config.model.m2m_success);
    if (pop[UeClass::M2M].success.sum() > 0.0)
      curve(s - 1) = expected_access_delay(pop, matrix, geom, grid, Scope::M2M, config.model.lag_mode);
  }
  return curve;
}

std::vector<OptimizerRow> optimize_sweep(const ScenarioConfig& config,
                                         const std::vector<double>& phis, OptimizerMode mode) {
  std::optional<Eigen::VectorXd> exact_curve;
  if (mode != OptimizerMode::Bound) exact_curve = policy_delay_curve(config, PolicyKind::Joint);
  std::vector<OptimizerRow> rows;
  for (double phi : phis) {
    OptimizerRow row;
    row.phi_ms = phi;
    if (mode != OptimizerMode::Exact) row.bound = solve_x_dagger(optimizer_input(config, phi));
    if (exact_curve) row.exact = pick_x_dagger(*exact_curve, phi);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rach
