#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rach/config.hpp"
#include "rach/metrics.hpp"
#include "rach/trace.hpp"

namespace rach {

/// Seeds one replication's independent streams: M2M arrivals, H2H arrivals, contention.
std::seed_seq::result_type stream_seed(std::uint64_t seed, int stream);

/// Preamble counts for a set of picks; index = preamble.
std::vector<int> count_picks(std::span<const int> picks, int M);

/// Slot-driven simulation of preamble contention with backoff and a retry limit.
///
/// Each slot, every pending UE (in ascending id order) picks a preamble uniformly from
/// the range its policy allows; a preamble chosen by exactly one UE succeeds and that UE
/// completes at t_i + T_RAR + W_RAR. Collided UEs (again in id order) draw an integer
/// backoff in [0, W_BO] ms after the RAR wait and reattempt at the first RA-TS at or after
/// expiry. A UE that collides on its W-th attempt is blocked; one whose next attempt
/// falls after the last slot is left in flight.
SimTrace run_replication(const ScenarioConfig& config, std::uint64_t seed);

struct BatchResult {
  std::vector<SimTrace> traces;
  MetricsReport mean;
  MetricsReport stddev;  ///< sample standard deviation (zero for a single replication)
};

/// Independent replications, one per seed. Traces are dropped unless keep_traces.
BatchResult run_batch(const ScenarioConfig& config, std::span<const std::uint64_t> seeds,
                      bool keep_traces = true);

/// seeds base, base + 1, ..., base + count - 1
std::vector<std::uint64_t> consecutive_seeds(std::uint64_t base, int count);

/// Empirical tagged success: each trial drops n UEs on M preambles and every UE is a
/// tagged observation. Uses the simulator's pick and collision rule.
double tagged_success_trials(int n, int M, long trials, std::uint64_t seed);

}  // namespace rach
