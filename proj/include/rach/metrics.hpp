#pragma once

#include <array>
#include <limits>
#include <utility>
#include <vector>

#include "rach/config.hpp"
#include "rach/kmc.hpp"
#include "rach/trace.hpp"
#include "rach/types.hpp"

namespace rach {

/// The five access metrics for one scope. Analytical values are expected counts;
/// trace values are observed counts.
struct ClassMetrics {
  double offered = 0.0;    ///< active UEs (made at least one attempt)
  double successes = 0.0;
  double failures = 0.0;   ///< collided attempts
  double blocked = 0.0;
  double in_flight = 0.0;
  double success_prob = std::numeric_limits<double>::quiet_NaN();
  double collision_prob = 0.0;
  double expected_delay_ms = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> preamble_cdf;    ///< r = 1..W
  std::vector<double> delay_mass_cdf;  ///< omega = 1..W, in ms
  std::vector<std::pair<double, double>> delay_cdf;  ///< trace only: (delay ms, fraction)
};

struct MetricsReport {
  std::array<ClassMetrics, 3> scopes;
  /// Collision probability per RAO can exceed 1 at extreme load; it is reported, not clamped.
  bool collision_above_one = false;

  const ClassMetrics& operator[](Scope s) const { return scopes[index_of(s)]; }
  ClassMetrics& operator[](Scope s) { return scopes[index_of(s)]; }
};

// Analytical path. Functions throw std::domain_error when the ratio is undefined
// (no arrivals, no successes) and std::out_of_range for bad indices.

double access_success_probability(const PopulationGrid& pop, Scope scope);
double collision_probability(const PopulationGrid& pop, int M, int eta, Scope scope);
double preamble_tx_cdf(const PopulationGrid& pop, int r, Scope scope);

/// Delay mass (ms * users) of first-attempt successes at slot i.
double delay_mass_new(const PopulationGrid& pop, int i, const BackoffGeometry& geom,
                      const SlotGrid& grid, Scope scope);

/// Delay mass (ms * users) of n-th attempt successes at slot i, summed over feeding origins.
double delay_mass_retx(const PopulationGrid& pop, const TransitionMatrix& matrix, int i, int n,
                       const BackoffGeometry& geom, const SlotGrid& grid, Scope scope,
                       LagMode lag = LagMode::SlotGap);

double expected_access_delay(const PopulationGrid& pop, const TransitionMatrix& matrix,
                             const BackoffGeometry& geom, const SlotGrid& grid, Scope scope,
                             LagMode lag = LagMode::SlotGap);

/// Delay mass of successes within omega attempts over all successes. Units are ms;
/// at omega = W it equals expected_access_delay.
double access_delay_cdf(const PopulationGrid& pop, const TransitionMatrix& matrix,
                        const BackoffGeometry& geom, const SlotGrid& grid, int omega, Scope scope,
                        LagMode lag = LagMode::SlotGap);

MetricsReport analyze_metrics(const PopulationGrid& pop, const TransitionMatrix& matrix,
                              const BackoffGeometry& geom, const SlotGrid& grid, int M,
                              LagMode lag = LagMode::SlotGap);

// Trace path.

double access_success_probability(const SimTrace& trace, Scope scope);
double collision_probability(const SimTrace& trace, Scope scope);
double preamble_tx_cdf(const SimTrace& trace, int r, Scope scope);
double expected_access_delay(const SimTrace& trace, Scope scope);
double access_delay_cdf(const SimTrace& trace, int omega, Scope scope);
/// Fraction of successful UEs whose delay is at most d_ms.
double empirical_delay_cdf(const SimTrace& trace, double d_ms, Scope scope);

MetricsReport trace_metrics(const SimTrace& trace);

}  // namespace rach
