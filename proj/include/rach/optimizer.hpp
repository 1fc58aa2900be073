#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "rach/config.hpp"
#include "rach/kmc.hpp"

namespace rach {

/// Representative per-slot loads for choosing the H2H share x under joint allocation.
struct OptimizerInput {
  int M = 54;
  int W = 10;
  double lambda = 0.0;  ///< mean H2H new arrivals per slot
  double n_m2m = 0.0;   ///< mean M2M new arrivals per slot
  double phi_ms = 20.0;
  BackoffGeometry geom;
  int delta_sf_ms = 10;
  int k = 0;            ///< steady-state max lag
  bool include_delay_factor = true;
};

/// (k(k+1)/2) * delta_sf + T_RAR + W_RAR
double expected_state_delay(const BackoffGeometry& geom, double delta_sf_ms, int k);

namespace detail {

template <typename Scalar>
void check_split(const Scalar& x, const Scalar& M) {
  if (!(x > Scalar(0) && x < M)) throw std::domain_error("x must satisfy 0 < x < M");
}

}  // namespace detail

/// Jensen lower bound on expected successes when lambda H2H and N M2M arrivals split
/// over x shared and M - x M2M-only preambles.
template <typename Scalar>
Scalar bound_A(const Scalar& x, const Scalar& M, const Scalar& lambda, const Scalar& N) {
  detail::check_split(x, M);
  const Scalar shared_load = lambda + N * x / M;
  const Scalar own_load = N * (M - x) / M;
  return shared_load * detail::tagged_term(shared_load, x) +
         own_load * detail::tagged_term(own_load, Scalar(M - x));
}

/// M2M share of bound_A: only the N x / M machine contenders of the shared partition count.
template <typename Scalar>
Scalar bound_A_m2m(const Scalar& x, const Scalar& M, const Scalar& lambda, const Scalar& N) {
  detail::check_split(x, M);
  const Scalar shared_load = lambda + N * x / M;
  const Scalar own_load = N * (M - x) / M;
  return N * x / M * detail::tagged_term(shared_load, x) +
         own_load * detail::tagged_term(own_load, Scalar(M - x));
}

template <typename Scalar>
Scalar bound_B(const Scalar& x, const Scalar& M, const Scalar& lambda, const Scalar& N) {
  using std::exp;
  return bound_A(x, M, lambda, N) + lambda * exp(-lambda / x);
}

/// Bound-based M2M delay objective J(x) in ms: the state delay times the ratio of the
/// M2M success bound at offered load to the all-class bound at W-times (steady-state) load.
double objective(double x, const OptimizerInput& input);

struct XDagger {
  bool feasible = false;
  int x_dagger = 0;       ///< largest x with curve(x) <= phi; 0 when infeasible
  int argmin_x = 0;
  double min_value = 0.0;
  Eigen::VectorXd curve;  ///< entry x - 1 for x = 1..M-1
};

/// Largest x whose curve value meets phi. NaN entries never qualify.
XDagger pick_x_dagger(const Eigen::VectorXd& curve, double phi_ms);

XDagger solve_x_dagger(const OptimizerInput& input);

/// Loads from a scenario: lambda per slot as configured, N at the busiest slot, k the
/// largest lag over the horizon.
OptimizerInput optimizer_input(const ScenarioConfig& config, double phi_ms);

/// Full-pipeline M2M expected access delay for every split value 1..M-1 under the given
/// policy kind (Disjoint sweeps a, Joint sweeps x). NaN where no M2M success exists.
Eigen::VectorXd policy_delay_curve(const ScenarioConfig& config, PolicyKind kind);

struct OptimizerRow {
  double phi_ms = 0.0;
  std::optional<XDagger> bound;
  std::optional<XDagger> exact;
};

/// x-dagger for every phi; the exact curve is computed once and reused.
std::vector<OptimizerRow> optimize_sweep(const ScenarioConfig& config,
                                         const std::vector<double>& phis, OptimizerMode mode);

}  // namespace rach
