#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/rational.hpp>

#include "rach/config.hpp"
#include "rach/kmc.hpp"
#include "rach/traffic.hpp"

namespace rach {

// Brute-force ground truth, independent of the analytical engine.

using Rational = boost::rational<std::int64_t>;

inline constexpr std::int64_t kEnumerationLimit = 10'000'000;

/// Enumerates all M^n preamble assignments and returns the exact probability that a
/// tagged UE is alone on its preamble. Throws std::length_error past the enumeration limit.
Rational exhaustive_tagged_success(int n, int M);

/// Same, with n_h2h UEs restricted to preambles [0, x) and n_m2m UEs over all M;
/// the tagged UE is an M2M one.
Rational exhaustive_ja_tagged_success(int n_h2h, int n_m2m, int x, int M);

struct BackoffLanding {
  Eigen::VectorXd mass;  ///< entry i - 1 is the share landing at slot i (1..eta)
  double beyond_horizon = 0.0;
  long samples = 0;
};

/// Monte-Carlo landing distribution for UEs colliding at slot `origin`: draws integer
/// expiries in [bo_min, bo_max] and maps each to the first later RA-TS at or after it.
BackoffLanding mc_backoff_distribution(const BackoffGeometry& geom, const SlotGrid& grid,
                                       int origin, long samples, std::uint64_t seed);

enum class OracleMethod { Exhaustive, MonteCarlo };

struct OracleResult {
  std::string check;
  std::string params;
  OracleMethod method = OracleMethod::Exhaustive;
  long samples = 0;
  double oracle = 0.0;
  double engine = 0.0;
  double tolerance = 0.0;

  double abs_error() const;
  bool pass() const { return abs_error() <= tolerance; }
};

/// Oracle-versus-engine comparisons for the given scenario geometry.
std::vector<OracleResult> validation_report(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace rach
