#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "fivemin/rules_engine.hpp"

// Trace-driven buffer pool simulator with an N-minute lifetime policy.
//
// The pool remembers every page touched within the last N seconds. A page
// that misses and is found in that history is re-read with an N-second
// lifetime: it is not a replacement candidate until the lifetime expires.
// Victims come from the base policy (LRU or a second-chance clock) restricted
// to unprotected frames. If every frame is protected the base policy picks
// among all frames and the eviction is counted as a fallback.
//
// Dirty frames are flushed when evicted (contention flush) or when they have
// stayed dirty across a whole checkpoint interval (checkpoint flush). A final
// checkpoint at the end of the trace flushes everything still dirty.
//
// Time is virtual: it comes from the trace timestamps.

namespace fivemin {

using PageId = std::uint64_t;

enum class AccessOp { kRead, kWrite };

struct TraceEvent {
  double time_s = 0;
  PageId page_id = 0;
  AccessOp op = AccessOp::kRead;

  bool operator==(const TraceEvent&) const = default;
};

enum class BasePolicy { kLru, kClock2 };

struct PoolConfig {
  std::size_t frames = 0;
  BasePolicy base_policy = BasePolicy::kLru;
  double n_minute_s = 0;
  // nullopt disables periodic checkpoints; the final flush still runs.
  std::optional<double> checkpoint_interval_s;
};

void validate(const PoolConfig& config);

struct SimReport {
  std::uint64_t logical_accesses = 0;
  std::uint64_t physical_reads = 0;
  std::uint64_t evictions = 0;
  std::uint64_t contention_flushes = 0;
  std::uint64_t checkpoint_flushes = 0;
  std::uint64_t protected_eviction_fallbacks = 0;
  double hit_ratio = 0;

  bool operator==(const SimReport&) const = default;
};

struct EvictionRecord {
  double time_s = 0;
  PageId victim = 0;
  double protected_until = 0;
  bool dirty = false;
  bool fallback = false;
};

using EvictionObserver = std::function<void(const EvictionRecord&)>;

class BufferPool {
 public:
  explicit BufferPool(PoolConfig config, EvictionObserver observer = {});

  // Throws InputError if `event` is earlier than the previous one.
  void access(const TraceEvent& event);

  // Runs the final checkpoint. Further accesses are rejected.
  void finish();

  // Snapshot; hit_ratio is filled in.
  SimReport report() const;

  bool resident(PageId page) const { return page_table_.contains(page); }

 private:
  struct Frame {
    PageId page = 0;
    bool occupied = false;
    bool dirty = false;
    bool referenced = false;
    bool eligible = false;  // in eligible_ rather than protected_
    double first_dirty_s = 0;
    double protected_until = 0;
    std::uint64_t last_use = 0;
  };

  bool in_history(PageId page, double now) const;
  void remember(PageId page, double now);
  void run_checkpoints(double now);
  void flush_dirty_before(double threshold);
  std::uint64_t order_key(std::size_t frame) const;
  void release_expired(double now);
  void place(std::size_t frame, double now);
  void unplace(std::size_t frame);
  std::size_t take_frame(double now);
  std::size_t lru_victim(bool fallback) const;
  std::size_t clock_victim(bool fallback);
  void touch(std::size_t frame);

  PoolConfig config_;
  EvictionObserver observer_;
  std::vector<Frame> frames_;
  std::size_t used_frames_ = 0;
  std::unordered_map<PageId, std::size_t> page_table_;
  // Unprotected resident frames keyed by last use (LRU) or frame index (clock).
  std::set<std::pair<std::uint64_t, std::size_t>> eligible_;
  // Protected frames keyed by expiry.
  std::set<std::pair<double, std::size_t>> protected_;
  // Every resident frame by last use; LRU fallback only.
  std::set<std::pair<std::uint64_t, std::size_t>> by_use_;
  std::uint64_t tick_ = 0;
  std::size_t hand_ = 0;
  std::unordered_map<PageId, double> history_;
  std::size_t history_prune_mark_ = 1024;
  std::size_t dirty_count_ = 0;
  std::optional<double> last_time_;
  std::int64_t next_checkpoint_ = 0;  // index k of the boundary k * interval
  bool finished_ = false;
  SimReport report_;
};

// Throws InputError for an unordered trace and ConfigError for an invalid
// configuration.
SimReport simulate(std::span<const TraceEvent> trace, const PoolConfig& config,
                   const EvictionObserver& observer = {});

struct TraceSpec {
  std::uint64_t seed = 1;
  std::uint64_t n_ops = 0;
  std::uint64_t n_pages = 1;
  double zipf_s = 0;  // 0 is uniform
  double write_fraction = 0;
  double ops_per_second = 1;
};

// 64-bit LCG (Knuth MMIX constants); each uniform is the top 53 bits of the
// advanced state.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Page ids are Zipf ranks starting at 0 (page 0 is the most popular). Each
// event draws the page first, then one uniform for the read/write choice.
std::vector<TraceEvent> generate_trace(const TraceSpec& spec);

// Economically justified lifetime N: the break-even reference interval.
double recommended_n(const TechnologyParams& tp, const EconomicParams& ep);

}  // namespace fivemin
