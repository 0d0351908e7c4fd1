#pragma once

#include <random>
#include <vector>

#include "fivemin/buffer_sim.hpp"

namespace fivemin::testing {

// Brute-force transcription of the buffer pool rules: linear scans over a
// slot array and an eagerly pruned history list. Used as an oracle for
// BufferPool.
SimReport reference_simulate(const std::vector<TraceEvent>& trace, const PoolConfig& config,
                             std::vector<EvictionRecord>* log = nullptr);

// The same pool without the lifetime policy: plain LRU or clock with dirty
// tracking and checkpoints.
SimReport pure_policy_simulate(const std::vector<TraceEvent>& trace, const PoolConfig& config);

// Small random trace over a few pages with integer-ish timestamps, so equal
// times, checkpoint boundaries and history edges all come up often.
std::vector<TraceEvent> random_small_trace(std::mt19937_64& rng, std::size_t max_events, PageId max_pages);

// Random pool config with 1..max_frames frames, either base policy, N in
// {0..12} and checkpoints disabled or every 1..8 s.
PoolConfig random_small_config(std::mt19937_64& rng, std::size_t max_frames);

}  // namespace fivemin::testing
