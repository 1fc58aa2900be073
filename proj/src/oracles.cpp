#include "rach/oracles.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rach/simulator.hpp"

namespace rach {

namespace {

std::int64_t checked_count(const std::vector<int>& ranges) {
  std::int64_t total = 1;
  for (int r : ranges) {
    if (r < 1) throw std::invalid_argument("every UE needs at least one permitted preamble");
    if (total > kEnumerationLimit / r)
      throw std::length_error("enumeration exceeds " + std::to_string(kEnumerationLimit) +
                              " assignments");
    total *= r;
  }
  return total;
}

// Counts assignments in which UE `tagged` shares its preamble with nobody.
// UE k picks from [0, ranges[k]).
Rational enumerate_alone(const std::vector<int>& ranges, std::size_t tagged) {
  const std::int64_t total = checked_count(ranges);
  std::vector<int> pick(ranges.size(), 0);
  std::int64_t alone = 0;
  for (std::int64_t a = 0; a < total; ++a) {
    bool ok = true;
    for (std::size_t k = 0; k < pick.size() && ok; ++k)
      if (k != tagged && pick[k] == pick[tagged]) ok = false;
    alone += ok;
    for (std::size_t k = 0; k < pick.size(); ++k) {
      if (++pick[k] < ranges[k]) break;
      pick[k] = 0;
    }
  }
  return Rational(alone, total);
}

}  // namespace

Rational exhaustive_tagged_success(int n, int M) {
  if (n < 1 || M < 1) throw std::invalid_argument("need n >= 1 and M >= 1");
  return enumerate_alone(std::vector<int>(static_cast<std::size_t>(n), M), 0);
}

Rational exhaustive_ja_tagged_success(int n_h2h, int n_m2m, int x, int M) {
  if (n_m2m < 1 || n_h2h < 0) throw std::invalid_argument("need n_m2m >= 1 and n_h2h >= 0");
  if (!(x > 0 && x < M)) throw std::invalid_argument("x must satisfy 0 < x < M");
  std::vector<int> ranges(static_cast<std::size_t>(n_m2m), M);
  ranges.insert(ranges.end(), static_cast<std::size_t>(n_h2h), x);
  return enumerate_alone(ranges, 0);
}

BackoffLanding mc_backoff_distribution(const BackoffGeometry& geom, const SlotGrid& grid,
                                       int origin, long samples, std::uint64_t seed) {
  if (origin < 1 || origin > grid.eta()) throw std::out_of_range("origin outside [1, eta]");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  BackoffLanding out;
  out.mass = Eigen::VectorXd::Zero(grid.eta());
  out.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> expiry(geom.bo_min(grid, origin), geom.bo_max(grid, origin));
  const long delta = grid.delta_sf();
  std::vector<long> counts(static_cast<std::size_t>(grid.eta()) + 1, 0);
  long beyond = 0;
  for (long s = 0; s < samples; ++s) {
    const long u = expiry(rng);
    long slot = (u + delta - 1) / delta;
    if (slot <= origin) slot = origin + 1;
    if (slot > grid.eta())
      ++beyond;
    else
      ++counts[static_cast<std::size_t>(slot)];
  }
  for (int i = 1; i <= grid.eta(); ++i) out.mass(i - 1) = double(counts[i]) / double(samples);
  out.beyond_horizon = double(beyond) / double(samples);
  return out;
}

double OracleResult::abs_error() const { return std::abs(oracle - engine); }

std::vector<OracleResult> validation_report(const ScenarioConfig& config, std::uint64_t seed) {
  std::vector<OracleResult> rows;
  auto params = [](auto... kv) {
    std::ostringstream os;
    const char* sep = "";
    ((os << sep << kv, sep = " "), ...);
    return os.str();
  };

  for (int M = 1; M <= 6; ++M) {
    for (int n = 1; n <= 6; ++n) {
      const Rational exact = exhaustive_tagged_success(n, M);
      const double truth = boost::rational_cast<double>(exact);
      const std::string p = params("n=" + std::to_string(n), "M=" + std::to_string(M));
      // Evaluated in rational arithmetic, so agreement is exact or not at all.
      const Rational engine = success_prob_m2m(Rational(n), Rational(M));
      rows.push_back({"tagged_success_kmc", p, OracleMethod::Exhaustive, 0, truth,
                      engine == exact ? truth : boost::rational_cast<double>(engine), 0.0});
      rows.push_back({"tagged_success_sim", p, OracleMethod::MonteCarlo, 100000, truth,
                      tagged_success_trials(n, M, 100000, seed + 31 * n + M), 0.01});
    }
  }

  // The mean-field joint formula is not exact for small populations; the tolerance
  // records the size of that gap rather than a correctness bound.
  for (int M : {4, 6}) {
    for (int x : {1, M / 2}) {
      for (int n_h2h = 0; n_h2h <= 2; ++n_h2h) {
        for (int n_m2m = 1; n_m2m <= 3; ++n_m2m) {
          const double truth =
              boost::rational_cast<double>(exhaustive_ja_tagged_success(n_h2h, n_m2m, x, M));
          const auto engine = ja_success_probs(double(n_h2h), double(n_m2m), double(x), double(M));
          rows.push_back({"ja_tagged_success_mean_field",
                          params("n_h2h=" + std::to_string(n_h2h), "n_m2m=" + std::to_string(n_m2m),
                                 "x=" + std::to_string(x), "M=" + std::to_string(M)),
                          OracleMethod::Exhaustive, 0, truth, engine.m2m, 0.25});
        }
      }
    }
  }

  const SlotGrid grid = config.grid();
  const BackoffGeometry geom = config.geometry();
  const TransitionMatrix matrix = build_matrix(geom, grid);
  for (int origin : {1, 2, 3, grid.eta() / 2, grid.eta()}) {
    if (origin < 1) continue;
    const BackoffLanding mc = mc_backoff_distribution(geom, grid, origin, 1'000'000, seed + origin);
    double l1 = std::abs(mc.beyond_horizon - matrix.beyond_horizon(origin));
    for (int i = 1; i <= grid.eta(); ++i) {
      const double p = i > origin ? matrix(i, origin) : 0.0;
      l1 += std::abs(mc.mass(i - 1) - p);
    }
    rows.push_back({"backoff_kernel_l1", params("origin=" + std::to_string(origin)),
                    OracleMethod::MonteCarlo, mc.samples, 0.0, l1, 0.01});
  }
  return rows;
}

}  // namespace rach
