#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "rach/metrics.hpp"
#include "rach/simulator.hpp"
#include "support.hpp"

namespace rach {
namespace {

TEST(CountPicks, TalliesPerPreamble) {
  const std::vector<int> picks{0, 2, 2, 3};
  EXPECT_EQ(count_picks(picks, 4), (std::vector<int>{1, 0, 2, 1}));
  const std::vector<int> bad{4};
  EXPECT_THROW(count_picks(bad, 4), std::out_of_range);
}

TEST(StreamSeed, StreamsDiffer) {
  EXPECT_NE(stream_seed(1, 0), stream_seed(1, 1));
  EXPECT_NE(stream_seed(1, 0), stream_seed(2, 0));
  EXPECT_EQ(stream_seed(9, 2), stream_seed(9, 2));
}

TEST(Replication, LoneUeSucceedsAfterRarWait) {
  const ScenarioConfig c = testing::single_slot(1, 54, 10);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SimTrace t = run_replication(c, seed);
    ASSERT_EQ(t.ues.size(), 1u);
    const UeRecord& ue = t.ues[0];
    EXPECT_EQ(ue.final_state, FinalState::Success);
    ASSERT_EQ(ue.attempts.size(), 1u);
    EXPECT_EQ(ue.attempts[0].slot, 1);
    // First RA-TS at 10 ms, success known at 17 ms: an arrival at 5 ms waits 12 ms.
    EXPECT_DOUBLE_EQ(ue.delay_ms, 17.0 - ue.arrival_ms);
  }
}

TEST(Replication, SinglePreambleBlocksBothUes) {
  const ScenarioConfig c = testing::single_slot(2, 1, 1);
  const SimTrace t = run_replication(c, 4);
  ASSERT_EQ(t.ues.size(), 2u);
  for (const UeRecord& ue : t.ues) {
    EXPECT_EQ(ue.final_state, FinalState::Blocked);
    EXPECT_EQ(ue.attempts.size(), 1u);
  }
  EXPECT_EQ(t.slots.at(0).collided, 2);
  EXPECT_EQ(t.slots.at(0).successes, 0);
}

bool same_trace(const SimTrace& a, const SimTrace& b) {
  if (a.ues.size() != b.ues.size() || a.slots.size() != b.slots.size()) return false;
  for (std::size_t k = 0; k < a.ues.size(); ++k) {
    const UeRecord &x = a.ues[k], &y = b.ues[k];
    if (x.arrival_ms != y.arrival_ms || x.final_state != y.final_state || x.delay_ms != y.delay_ms ||
        x.attempts.size() != y.attempts.size())
      return false;
    for (std::size_t n = 0; n < x.attempts.size(); ++n)
      if (x.attempts[n].slot != y.attempts[n].slot || x.attempts[n].preamble != y.attempts[n].preamble)
        return false;
  }
  for (std::size_t k = 0; k < a.slots.size(); ++k)
    if (a.slots[k].preamble_counts != b.slots[k].preamble_counts) return false;
  return true;
}

TEST(Replication, DeterministicForSeed) {
  const ScenarioConfig c = testing::with_policy(testing::reference(3000, 20.0), PolicyKind::Joint, 7);
  EXPECT_TRUE(same_trace(run_replication(c, 17), run_replication(c, 17)));
  EXPECT_FALSE(same_trace(run_replication(c, 17), run_replication(c, 18)));
}

class Reconciliation : public ::testing::TestWithParam<PolicyKind> {};

TEST_P(Reconciliation, SlotOutcomesMatchUeRecords) {
  const ScenarioConfig c = testing::with_policy(testing::reference(20000, 50.0), GetParam(), 10);
  const SimTrace t = run_replication(c, 5);
  std::map<int, int> attempts, successes;
  std::map<std::pair<int, int>, int> per_preamble;
  for (const UeRecord& ue : t.ues) {
    ASSERT_LE(static_cast<int>(ue.attempts.size()), c.rach.W);
    for (std::size_t n = 0; n < ue.attempts.size(); ++n) {
      const Attempt& a = ue.attempts[n];
      ++attempts[a.slot];
      successes[a.slot] += a.success;
      ++per_preamble[{a.slot, a.preamble}];
      // Only the last attempt can succeed.
      if (n + 1 < ue.attempts.size()) {
        EXPECT_FALSE(a.success);
      }
    }
    switch (ue.final_state) {
      case FinalState::Success:
        EXPECT_TRUE(ue.attempts.back().success);
        EXPECT_NEAR(ue.delay_ms, ue.attempts.back().slot * 10.0 + 7.0 - ue.arrival_ms, 1e-9);
        break;
      case FinalState::Blocked:
        EXPECT_EQ(static_cast<int>(ue.attempts.size()), c.rach.W);
        EXPECT_FALSE(ue.attempts.back().success);
        break;
      case FinalState::InFlight:
        EXPECT_TRUE(ue.attempts.empty() || !ue.attempts.back().success);
        break;
    }
  }
  for (const SlotOutcome& s : t.slots) {
    EXPECT_EQ(s.contenders, attempts[s.slot]);
    EXPECT_EQ(s.successes, successes[s.slot]);
    EXPECT_EQ(s.collided, s.contenders - s.successes);
    int singles = 0;
    for (int p = 0; p < c.rach.M; ++p) {
      const int count = s.preamble_counts[p];
      singles += count == 1;
      const auto it = per_preamble.find({s.slot, p});
      EXPECT_EQ(count, it == per_preamble.end() ? 0 : it->second);
    }
    EXPECT_EQ(s.successes, singles);
  }
}

TEST_P(Reconciliation, PicksStayInsidePartition) {
  const ScenarioConfig c = testing::with_policy(testing::reference(5000, 100.0), GetParam(), 10);
  const SimTrace t = run_replication(c, 8);
  for (const UeRecord& ue : t.ues) {
    for (const Attempt& a : ue.attempts) {
      ASSERT_GE(a.preamble, 0);
      ASSERT_LT(a.preamble, 54);
      if (GetParam() == PolicyKind::Disjoint) {
        EXPECT_EQ(a.preamble < 10, ue.cls == UeClass::H2H);
      } else if (GetParam() == PolicyKind::Joint && ue.cls == UeClass::H2H) {
        EXPECT_LT(a.preamble, 10);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Policies, Reconciliation,
                         ::testing::Values(PolicyKind::Shared, PolicyKind::Disjoint, PolicyKind::Joint));

TEST(Replication, JointMachinesLandInSharedPartitionAtRateXOverM) {
  const ScenarioConfig c = testing::with_policy(testing::reference(20000, 0.5), PolicyKind::Joint, 10);
  const SimTrace t = run_replication(c, 21);
  double shared = 0.0, total = 0.0;
  for (const UeRecord& ue : t.ues) {
    if (ue.cls != UeClass::M2M) continue;
    for (const Attempt& a : ue.attempts) {
      total += 1.0;
      shared += a.preamble < 10;
    }
  }
  ASSERT_GT(total, 10000.0);
  EXPECT_NEAR(shared / total, 10.0 / 54.0, 0.01);
}

TEST(Replication, BackoffGapsMatchKernel) {
  // One preamble, so every attempt with company collides; retry gaps follow P(j + g, j).
  ScenarioConfig c = testing::single_slot(20, 1, 2);
  c.horizon_ms = 100;
  const SlotGrid grid = c.grid();
  const BackoffGeometry geom = c.geometry();
  std::map<int, double> gaps;
  double retries = 0.0;
  for (std::uint64_t seed = 1; seed <= 2000; ++seed) {
    for (const UeRecord& ue : run_replication(c, seed).ues) {
      if (ue.attempts.size() < 2) continue;
      const int j = ue.attempts[0].slot;
      if (geom.bo_max(grid, j) > grid.slot_time(grid.eta())) continue;
      gaps[ue.attempts[1].slot - j] += 1.0;
      retries += 1.0;
    }
  }
  ASSERT_GT(retries, 10000.0);
  const TransitionMatrix m = build_matrix(geom, grid);
  double l1 = 0.0;
  for (int g = 1; g <= 3; ++g) l1 += std::abs(gaps[g] / retries - m(5 + g, 5));
  EXPECT_LT(l1, 0.02);
  EXPECT_EQ(gaps.size(), 3u);
}

TEST(Batch, SingleSeedEqualsTraceMetrics) {
  const ScenarioConfig c = testing::reference(2000, 0.5);
  const std::vector<std::uint64_t> seeds{42};
  const BatchResult b = run_batch(c, seeds);
  const MetricsReport direct = trace_metrics(run_replication(c, 42));
  for (Scope s : kScopes) {
    EXPECT_EQ(b.mean[s].collision_prob, direct[s].collision_prob);
    EXPECT_EQ(b.mean[s].offered, direct[s].offered);
    EXPECT_EQ(b.mean[s].delay_cdf, direct[s].delay_cdf);
    EXPECT_EQ(b.stddev[s].collision_prob, 0.0);
  }
  ASSERT_EQ(b.traces.size(), 1u);
}

TEST(Batch, SkipsReplicationsWithoutAClass) {
  // At 0.05 calls/s over 10 s most replications draw no H2H UE at all.
  const ScenarioConfig c = testing::reference(100, 0.05);
  const auto seeds = consecutive_seeds(1, 20);
  int with_h2h = 0;
  for (auto seed : seeds) {
    const SimTrace t = run_replication(c, seed);
    with_h2h += std::any_of(t.ues.begin(), t.ues.end(),
                            [](const UeRecord& ue) { return ue.cls == UeClass::H2H; });
  }
  ASSERT_GT(with_h2h, 0);
  ASSERT_LT(with_h2h, 20);
  const BatchResult b = run_batch(c, seeds, false);
  EXPECT_TRUE(b.traces.empty());
  EXPECT_DOUBLE_EQ(b.mean[Scope::H2H].success_prob, 1.0);
  EXPECT_FALSE(std::isnan(b.mean[Scope::M2M].success_prob));
}

TEST(Batch, TaggedSuccessMatchesEnumeration) {
  const ScenarioConfig c = testing::single_slot(4, 4, 1);
  const BatchResult b = run_batch(c, consecutive_seeds(1, 100000), false);
  EXPECT_NEAR(b.mean[Scope::M2M].success_prob, 27.0 / 64.0, 0.01 * 27.0 / 64.0);
  EXPECT_GT(b.stddev[Scope::M2M].success_prob, 0.0);
}

TEST(Batch, RequiresSeeds) {
  const std::vector<std::uint64_t> none;
  EXPECT_THROW(run_batch(testing::reference(10), none), std::invalid_argument);
}

TEST(TaggedTrials, MatchesClosedForm) {
  for (int n = 1; n <= 6; ++n)
    for (int M = 1; M <= 6; ++M)
      EXPECT_NEAR(tagged_success_trials(n, M, 100000, 7 * n + M), std::pow(1.0 - 1.0 / M, n - 1), 0.01)
          << "n=" << n << " M=" << M;
}

TEST(Replication, RejectsInvalidPolicy) {
  ScenarioConfig c = testing::with_policy(testing::reference(10), PolicyKind::Joint, 54);
  EXPECT_THROW(run_replication(c, 1), ConfigError);
}

}  // namespace
}  // namespace rach
