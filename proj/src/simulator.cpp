#include "rach/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace rach {

std::string_view to_string(FinalState s) {
  switch (s) {
    case FinalState::Success: return "success";
    case FinalState::Blocked: return "blocked";
    case FinalState::InFlight: return "in_flight";
  }
  return "in_flight";
}

std::seed_seq::result_type stream_seed(std::uint64_t seed, int stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::array<std::seed_seq::result_type, 1> out{};
  seq.generate(out.begin(), out.end());
  return out[0];
}

std::vector<int> count_picks(std::span<const int> picks, int M) {
  std::vector<int> counts(static_cast<std::size_t>(M), 0);
  for (int p : picks) ++counts.at(static_cast<std::size_t>(p));
  return counts;
}

namespace {

struct PickRange {
  int lo;
  int hi;  // inclusive
};

PickRange permitted_range(const AllocationPolicy& policy, UeClass cls) {
  if (const auto* da = std::get_if<DisjointPolicy>(&policy))
    return cls == UeClass::H2H ? PickRange{0, da->a - 1} : PickRange{da->a, da->M - 1};
  if (const auto* ja = std::get_if<JointPolicy>(&policy))
    return cls == UeClass::H2H ? PickRange{0, ja->x - 1} : PickRange{0, ja->M - 1};
  return {0, total_preambles(policy) - 1};
}

}  // namespace

SimTrace run_replication(const ScenarioConfig& config, std::uint64_t seed) {
  validate(config);
  const SlotGrid grid = config.grid();
  const BackoffGeometry geom = config.geometry();
  const AllocationPolicy policy = config.allocation();
  const int M = config.rach.M;
  const int W = config.rach.W;
  const int eta = grid.eta();

  SimTrace trace;
  trace.config = config;
  trace.seed = seed;

  {
    std::vector<std::pair<double, UeClass>> arrivals;
    for (double t : sample_arrivals(config.m2m_model(), grid, stream_seed(seed, 0)))
      arrivals.emplace_back(t, UeClass::M2M);
    if (config.h2h_lambda_slot() > 0.0)
      for (double t : sample_arrivals(config.h2h_model(), grid, stream_seed(seed, 1)))
        arrivals.emplace_back(t, UeClass::H2H);
    std::stable_sort(arrivals.begin(), arrivals.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    trace.ues.reserve(arrivals.size());
    for (const auto& [t, cls] : arrivals) {
      UeRecord ue;
      ue.ue_id = static_cast<int>(trace.ues.size());
      ue.cls = cls;
      ue.arrival_ms = t;
      trace.ues.push_back(std::move(ue));
    }
  }

  std::vector<std::vector<int>> pending(static_cast<std::size_t>(eta) + 1);
  for (const UeRecord& ue : trace.ues) {
    const int first = grid.slot_at_or_after(ue.arrival_ms);
    if (first <= eta) pending[first].push_back(ue.ue_id);
  }

  std::mt19937_64 rng(stream_seed(seed, 2));
  std::uniform_int_distribution<int> backoff(0, geom.w_bo_ms);
  const std::array<PickRange, 2> ranges{permitted_range(policy, UeClass::H2H),
                                        permitted_range(policy, UeClass::M2M)};
  trace.slots.reserve(static_cast<std::size_t>(eta));
  std::vector<int> picks;
  std::vector<int> collided;

  for (int i = 1; i <= eta; ++i) {
    std::vector<int>& ids = pending[i];
    std::sort(ids.begin(), ids.end());
    picks.clear();
    for (int id : ids) {
      const PickRange r = ranges[index_of(trace.ues[id].cls)];
      picks.push_back(std::uniform_int_distribution<int>(r.lo, r.hi)(rng));
    }

    SlotOutcome outcome;
    outcome.slot = i;
    outcome.preamble_counts = count_picks(picks, M);
    outcome.contenders = static_cast<int>(ids.size());
    const double completion = static_cast<double>(grid.slot_time(i) + geom.rar_wait());

    collided.clear();
    for (std::size_t k = 0; k < ids.size(); ++k) {
      UeRecord& ue = trace.ues[ids[k]];
      const bool alone = outcome.preamble_counts[picks[k]] == 1;
      ue.attempts.push_back({i, picks[k], alone});
      if (alone) {
        ue.final_state = FinalState::Success;
        ue.delay_ms = completion - ue.arrival_ms;
        ++outcome.successes;
      } else {
        ++outcome.collided;
        collided.push_back(ue.ue_id);
      }
    }

    for (int id : collided) {
      UeRecord& ue = trace.ues[id];
      if (static_cast<int>(ue.attempts.size()) >= W) {
        ue.final_state = FinalState::Blocked;
        continue;
      }
      const long expiry = geom.bo_min(grid, i) + backoff(rng);
      const int next = std::max(i + 1, grid.slot_at_or_after(static_cast<double>(expiry)));
      if (next <= eta) pending[next].push_back(id);
    }
    std::vector<int>().swap(ids);
    trace.slots.push_back(std::move(outcome));
  }
  return trace;
}

std::vector<std::uint64_t> consecutive_seeds(std::uint64_t base, int count) {
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(std::max(count, 0)));
  std::iota(seeds.begin(), seeds.end(), base);
  return seeds;
}

namespace {

// Replications with no UEs of a class report NaN ratios; those are skipped.
struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  double n = 0.0;
  void add(double v) {
    if (std::isnan(v)) return;
    sum += v;
    sum_sq += v * v;
    n += 1.0;
  }
  double mean() const { return n > 0.0 ? sum / n : std::numeric_limits<double>::quiet_NaN(); }
  double stddev() const {
    if (n < 2.0) return 0.0;
    const double m = sum / n;
    return std::sqrt(std::max(0.0, (sum_sq - n * m * m) / (n - 1.0)));
  }
};

template <typename Get>
void aggregate_field(const std::vector<MetricsReport>& reports, Scope s, Get get, MetricsReport& mean,
                     MetricsReport& sd) {
  Accumulator acc;
  for (const auto& r : reports) acc.add(get(r[s]));
  get(mean[s]) = acc.mean();
  get(sd[s]) = acc.stddev();
}

void aggregate_vector(const std::vector<MetricsReport>& reports, Scope s,
                      std::vector<double> ClassMetrics::*field, MetricsReport& mean,
                      MetricsReport& sd) {
  std::size_t len = 0;
  for (const auto& r : reports) len = std::max(len, (r[s].*field).size());
  (mean[s].*field).assign(len, 0.0);
  (sd[s].*field).assign(len, 0.0);
  for (std::size_t k = 0; k < len; ++k) {
    Accumulator acc;
    for (const auto& r : reports) {
      const auto& v = r[s].*field;
      acc.add(k < v.size() ? v[k] : std::numeric_limits<double>::quiet_NaN());
    }
    (mean[s].*field)[k] = acc.mean();
    (sd[s].*field)[k] = acc.stddev();
  }
}

}  // namespace

BatchResult run_batch(const ScenarioConfig& config, std::span<const std::uint64_t> seeds,
                      bool keep_traces) {
  if (seeds.empty()) throw std::invalid_argument("run_batch needs at least one seed");
  validate(config);
  const std::size_t count = seeds.size();
  std::vector<SimTrace> traces(keep_traces ? count : 0);
  std::vector<MetricsReport> reports(count);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      SimTrace trace = run_replication(config, seeds[k]);
      reports[k] = trace_metrics(trace);
      if (keep_traces) traces[k] = std::move(trace);
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  BatchResult out;
  out.traces = std::move(traces);
  for (Scope s : kScopes) {
    aggregate_field(reports, s, [](auto& m) -> auto& { return m.offered; }, out.mean, out.stddev);
    aggregate_field(reports, s, [](auto& m) -> auto& { return m.successes; }, out.mean, out.stddev);
    aggregate_field(reports, s, [](auto& m) -> auto& { return m.failures; }, out.mean, out.stddev);
    aggregate_field(reports, s, [](auto& m) -> auto& { return m.blocked; }, out.mean, out.stddev);
    aggregate_field(reports, s, [](auto& m) -> auto& { return m.in_flight; }, out.mean, out.stddev);
    aggregate_field(reports, s, [](auto& m) -> auto& { return m.success_prob; }, out.mean,
                    out.stddev);
    aggregate_field(reports, s, [](auto& m) -> auto& { return m.collision_prob; }, out.mean,
                    out.stddev);
    aggregate_field(reports, s, [](auto& m) -> auto& { return m.expected_delay_ms; }, out.mean,
                    out.stddev);
    aggregate_vector(reports, s, &ClassMetrics::preamble_cdf, out.mean, out.stddev);
    aggregate_vector(reports, s, &ClassMetrics::delay_mass_cdf, out.mean, out.stddev);
  }
  if (count == 1) {
    for (Scope s : kScopes) out.mean[s].delay_cdf = reports[0][s].delay_cdf;
  }
  out.mean.collision_above_one = out.mean[Scope::Total].collision_prob > 1.0;
  return out;
}

double tagged_success_trials(int n, int M, long trials, std::uint64_t seed) {
  if (n < 1 || M < 1 || trials < 1) throw std::invalid_argument("need n, M, trials >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, M - 1);
  std::vector<int> picks(static_cast<std::size_t>(n));
  long alone = 0;
  for (long t = 0; t < trials; ++t) {
    for (int& p : picks) p = pick(rng);
    const auto counts = count_picks(picks, M);
    for (int p : picks) alone += counts[p] == 1;
  }
  return double(alone) / (double(trials) * n);
}

}  // namespace rach
