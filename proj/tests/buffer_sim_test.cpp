#include "fivemin/buffer_sim.hpp"

#include <random>
#include <set>
#include <sstream>

#include "fivemin/error.hpp"
#include "fivemin/trace_io.hpp"
#include "gtest/gtest.h"
#include "reference_sim.hpp"

namespace fivemin {
namespace {

using testing::pure_policy_simulate;
using testing::random_small_config;
using testing::random_small_trace;
using testing::reference_simulate;

constexpr PageId A = 0, B = 1, C = 2;
const std::vector<TraceEvent> kAba{{0, A, AccessOp::kRead}, {1, B, AccessOp::kRead}, {2, A, AccessOp::kRead}};

PoolConfig lru(std::size_t frames, double n = 0) { return {frames, BasePolicy::kLru, n, std::nullopt}; }

TEST(BufferSimTest, OneFrameEvictsOnEveryMiss) {
  const auto r = simulate(kAba, lru(1));
  EXPECT_EQ(r.logical_accesses, 3u);
  EXPECT_EQ(r.physical_reads, 3u);
  EXPECT_EQ(r.evictions, 2u);
  EXPECT_EQ(r.protected_eviction_fallbacks, 0u);
  EXPECT_EQ(r.contention_flushes, 0u);
  EXPECT_EQ(r.checkpoint_flushes, 0u);
  EXPECT_DOUBLE_EQ(r.hit_ratio, 0);
}

TEST(BufferSimTest, TwoFramesHoldEverything) {
  const auto r = simulate(kAba, lru(2));
  EXPECT_EQ(r.physical_reads, 2u);
  EXPECT_EQ(r.evictions, 0u);
  EXPECT_DOUBLE_EQ(r.hit_ratio, 1.0 / 3);
}

// A is unprotected on its first load, so B evicts it without a fallback; A's
// re-read at t=2 finds it in the history and A is protected until t=12.
TEST(BufferSimTest, LifetimeIsGrantedOnlyOnReRead) {
  std::vector<EvictionRecord> log;
  const auto r = simulate(kAba, lru(1, 10), [&](const EvictionRecord& e) { log.push_back(e); });
  EXPECT_EQ(r.physical_reads, 3u);
  EXPECT_EQ(r.evictions, 2u);
  EXPECT_EQ(r.protected_eviction_fallbacks, 0u);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log[0].victim, A);
  EXPECT_EQ(log[0].protected_until, 0);
  EXPECT_EQ(log[1].victim, B);

  BufferPool pool(lru(1, 10));
  for (const auto& e : kAba) pool.access(e);
  pool.access({3, C, AccessOp::kRead});
  const auto after = pool.report();
  EXPECT_EQ(after.protected_eviction_fallbacks, 1u);
  EXPECT_TRUE(pool.resident(C));
}

TEST(BufferSimTest, HistoryMembershipIncludesTheEdge) {
  // A last touched at 0, re-read at exactly N=2: still listed.
  std::vector<TraceEvent> trace{{0, A, AccessOp::kRead}, {1, B, AccessOp::kRead}, {2, A, AccessOp::kRead},
                                {3, C, AccessOp::kRead}};
  EXPECT_EQ(simulate(trace, lru(1, 2)).protected_eviction_fallbacks, 1u);
  // Just past the edge the page is a stranger again.
  trace[2].time_s = 2.5;
  trace[3].time_s = 3;
  EXPECT_EQ(simulate(trace, lru(1, 2)).protected_eviction_fallbacks, 0u);
}

TEST(BufferSimTest, HitsDoNotExtendProtection) {
  // A re-read at 2 is protected to 3 (N=1); hits at 2.5 and 3 do not extend it.
  const std::vector<TraceEvent> trace{{0, A, AccessOp::kRead},  {1, B, AccessOp::kRead},
                                      {2, A, AccessOp::kRead},  {2.5, A, AccessOp::kRead},
                                      {3, A, AccessOp::kRead},  {3.5, C, AccessOp::kRead}};
  const auto r = simulate(trace, lru(1, 1));
  EXPECT_EQ(r.protected_eviction_fallbacks, 0u);
  EXPECT_EQ(r.physical_reads, 4u);
}

TEST(BufferSimTest, ClockGivesASecondChance) {
  const std::vector<TraceEvent> trace{{0, A, AccessOp::kRead}, {1, B, AccessOp::kRead},
                                      {2, A, AccessOp::kRead}, {3, C, AccessOp::kRead}};
  BufferPool lru_pool(lru(2));
  BufferPool clock_pool({2, BasePolicy::kClock2, 0, std::nullopt});
  for (const auto& e : trace) {
    lru_pool.access(e);
    clock_pool.access(e);
  }
  EXPECT_TRUE(lru_pool.resident(A));
  EXPECT_FALSE(lru_pool.resident(B));
  // Both reference bits are set, so the sweep clears them and returns to A.
  EXPECT_FALSE(clock_pool.resident(A));
  EXPECT_TRUE(clock_pool.resident(B));
}

TEST(BufferSimTest, DirtyVictimIsAContentionFlush) {
  const std::vector<TraceEvent> trace{{0, A, AccessOp::kWrite}, {1, B, AccessOp::kRead}};
  const auto r = simulate(trace, lru(1));
  EXPECT_EQ(r.contention_flushes, 1u);
  EXPECT_EQ(r.checkpoint_flushes, 0u);
}

TEST(BufferSimTest, FinalCheckpointFlushesRemainingDirtyFrames) {
  const std::vector<TraceEvent> trace{{0, A, AccessOp::kWrite}, {1, B, AccessOp::kWrite}};
  const auto r = simulate(trace, lru(4));
  EXPECT_EQ(r.checkpoint_flushes, 2u);
  EXPECT_EQ(r.contention_flushes, 0u);
}

// Boundaries at 2, 4, 6: the one at 4 flushes A (dirty since 0 < 2). A is
// dirtied again at 8 and flushed by the final checkpoint.
TEST(BufferSimTest, CheckpointFlushesPagesDirtyBeforeThePreviousBoundary) {
  const std::vector<TraceEvent> trace{{0, A, AccessOp::kWrite}, {3, B, AccessOp::kRead},
                                      {7, C, AccessOp::kRead}, {8, A, AccessOp::kWrite}};
  PoolConfig config = lru(4);
  config.checkpoint_interval_s = 2;
  EXPECT_EQ(simulate(trace, config).checkpoint_flushes, 2u);
  config.checkpoint_interval_s.reset();
  EXPECT_EQ(simulate(trace, config).checkpoint_flushes, 1u);

  // Dirty since 3: survives the boundary at 4 (threshold 2), flushed at 6.
  BufferPool pool({4, BasePolicy::kLru, 0, 2.0});
  pool.access({3, B, AccessOp::kWrite});
  pool.access({5, C, AccessOp::kRead});
  EXPECT_EQ(pool.report().checkpoint_flushes, 0u);
  pool.access({6, C, AccessOp::kRead});
  EXPECT_EQ(pool.report().checkpoint_flushes, 1u);
}

TEST(BufferSimTest, Errors) {
  const std::vector<TraceEvent> backwards{{2, A, AccessOp::kRead}, {1, B, AccessOp::kRead}};
  EXPECT_THROW(simulate(backwards, lru(2)), InputError);
  EXPECT_THROW(simulate(kAba, lru(0)), ConfigError);
  EXPECT_THROW(simulate(kAba, lru(1, -1)), ConfigError);
  EXPECT_THROW(simulate(kAba, {1, BasePolicy::kLru, 0, 0.0}), ConfigError);

  BufferPool pool(lru(1));
  pool.finish();
  EXPECT_THROW(pool.access({0, A, AccessOp::kRead}), InputError);
}

TEST(BufferSimTest, EmptyTrace) {
  const auto r = simulate({}, lru(3));
  EXPECT_EQ(r, SimReport{});
}

TEST(BufferSimTest, RecommendedN) {
  EXPECT_NEAR(recommended_n({128, 64}, {2000, 15}), 266.7, 0.05);
  EXPECT_DOUBLE_EQ(recommended_n({1, 1}, {1, 1}), 1.0);
  EXPECT_NEAR(recommended_n(derive_sequential_params({65536, 5 * 1048576.0}), {2000, 15}), 26.7, 0.05);
}

TEST(BufferSimTest, MatchesReferenceSimulatorProperty) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 500; ++i) {
    const auto trace = random_small_trace(rng, 200, 12);
    const auto config = random_small_config(rng, 8);
    std::vector<EvictionRecord> expected_log, log;
    const auto expected = reference_simulate(trace, config, &expected_log);
    const auto got = simulate(trace, config, [&](const EvictionRecord& e) { log.push_back(e); });
    ASSERT_EQ(got, expected) << "trial " << i;
    ASSERT_EQ(log.size(), expected_log.size());
    for (std::size_t j = 0; j < log.size(); ++j) {
      EXPECT_EQ(log[j].victim, expected_log[j].victim);
      EXPECT_EQ(log[j].fallback, expected_log[j].fallback);
    }
  }
}

TEST(BufferSimTest, ZeroLifetimeIsThePureBasePolicyProperty) {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 200; ++i) {
    const auto trace = random_small_trace(rng, 200, 16);
    auto config = random_small_config(rng, 8);
    config.n_minute_s = 0;
    for (auto policy : {BasePolicy::kLru, BasePolicy::kClock2}) {
      config.base_policy = policy;
      const auto r = simulate(trace, config);
      EXPECT_EQ(r, pure_policy_simulate(trace, config));
      EXPECT_EQ(r.protected_eviction_fallbacks, 0u);
    }
  }
}

TEST(BufferSimTest, CountingInvariantsProperty) {
  std::mt19937_64 rng(107);
  for (int i = 0; i < 300; ++i) {
    const auto trace = random_small_trace(rng, 200, 12);
    auto config = random_small_config(rng, 8);
    std::set<PageId> distinct, dirtied;
    bool has_repeat = false;
    for (std::size_t j = 0; j < trace.size(); ++j) {
      distinct.insert(trace[j].page_id);
      if (trace[j].op == AccessOp::kWrite) dirtied.insert(trace[j].page_id);
      if (j > 0 && trace[j].page_id == trace[j - 1].page_id) has_repeat = true;
    }

    std::vector<EvictionRecord> log;
    const auto r = simulate(trace, config, [&](const EvictionRecord& e) { log.push_back(e); });
    EXPECT_LE(r.physical_reads, r.logical_accesses);
    EXPECT_GE(r.contention_flushes + r.checkpoint_flushes, dirtied.size());
    if (!trace.empty()) {
      EXPECT_DOUBLE_EQ(r.hit_ratio, 1 - static_cast<double>(r.physical_reads) / r.logical_accesses);
    }
    if (config.frames == 1) EXPECT_EQ(r.physical_reads == r.logical_accesses, !has_repeat);

    std::uint64_t fallbacks = 0;
    for (const auto& e : log) {
      if (e.protected_until > e.time_s) EXPECT_TRUE(e.fallback) << "protected frame evicted silently";
      fallbacks += e.fallback;
    }
    EXPECT_EQ(fallbacks, r.protected_eviction_fallbacks);
    EXPECT_EQ(log.size(), r.evictions);

    config.frames = std::max<std::size_t>(distinct.size(), 1);
    EXPECT_EQ(simulate(trace, config).physical_reads, distinct.size());
  }
}

TEST(BufferSimTest, DeterministicReports) {
  const auto trace = generate_trace({9, 20000, 500, 0.9, 0.3, 100});
  const PoolConfig config{64, BasePolicy::kClock2, 30, 60.0};
  std::ostringstream first, second;
  write_report_csv(first, simulate(trace, config));
  write_report_csv(second, simulate(generate_trace({9, 20000, 500, 0.9, 0.3, 100}), config));
  EXPECT_EQ(first.str(), second.str());
}

TEST(BufferSimTest, LifetimesKeepRereadPagesUnderScanPressure) {
  // A hot page re-read every 4 s competes with a one-off scan; N = 10 keeps it.
  std::vector<TraceEvent> trace;
  PageId scan = 100;
  for (int t = 0; t < 200; ++t) {
    trace.push_back({static_cast<double>(t), t % 4 == 0 ? A : scan++, AccessOp::kRead});
  }
  const auto plain = simulate(trace, lru(2));
  const auto with_lifetime = simulate(trace, lru(2, 10));
  EXPECT_LT(with_lifetime.physical_reads, plain.physical_reads);
}

}  // namespace
}  // namespace fivemin
