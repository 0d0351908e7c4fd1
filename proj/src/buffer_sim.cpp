#include "fivemin/buffer_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fivemin/error.hpp"

namespace fivemin {

void validate(const PoolConfig& config) {
  if (config.frames == 0) throw ConfigError("frames must be > 0");
  if (!(config.n_minute_s >= 0)) throw ConfigError("n_minute_s must be >= 0");
  if (config.checkpoint_interval_s && !(*config.checkpoint_interval_s > 0)) {
    throw ConfigError("checkpoint_interval_s must be > 0 when enabled");
  }
}

BufferPool::BufferPool(PoolConfig config, EvictionObserver observer)
    : config_(config), observer_(std::move(observer)) {
  validate(config_);
  frames_.resize(config_.frames);
}

bool BufferPool::in_history(PageId page, double now) const {
  auto it = history_.find(page);
  return it != history_.end() && now - it->second <= config_.n_minute_s;
}

void BufferPool::remember(PageId page, double now) {
  history_[page] = now;
  if (history_.size() < 2 * history_prune_mark_) return;
  std::erase_if(history_, [&](const auto& entry) { return now - entry.second > config_.n_minute_s; });
  history_prune_mark_ = std::max<std::size_t>(1024, history_.size());
}

void BufferPool::flush_dirty_before(double threshold) {
  for (auto& f : frames_) {
    if (f.occupied && f.dirty && f.first_dirty_s < threshold) {
      f.dirty = false;
      --dirty_count_;
      ++report_.checkpoint_flushes;
    }
  }
}

void BufferPool::run_checkpoints(double now) {
  if (!config_.checkpoint_interval_s) return;
  const double interval = *config_.checkpoint_interval_s;
  if (!last_time_) {
    next_checkpoint_ = static_cast<std::int64_t>(std::floor(now / interval)) + 1;
    return;
  }
  while (static_cast<double>(next_checkpoint_) * interval <= now) {
    if (dirty_count_ == 0) {
      // Nothing to flush at any boundary up to `now`.
      next_checkpoint_ = static_cast<std::int64_t>(std::floor(now / interval)) + 1;
      while (static_cast<double>(next_checkpoint_ - 1) * interval > now) --next_checkpoint_;
      while (static_cast<double>(next_checkpoint_) * interval <= now) ++next_checkpoint_;
      break;
    }
    flush_dirty_before(static_cast<double>(next_checkpoint_ - 1) * interval);
    ++next_checkpoint_;
  }
}

std::uint64_t BufferPool::order_key(std::size_t frame) const {
  return config_.base_policy == BasePolicy::kLru ? frames_[frame].last_use : frame;
}

void BufferPool::release_expired(double now) {
  while (!protected_.empty() && protected_.begin()->first <= now) {
    const std::size_t i = protected_.begin()->second;
    protected_.erase(protected_.begin());
    frames_[i].eligible = true;
    eligible_.emplace(order_key(i), i);
  }
}

void BufferPool::place(std::size_t frame, double now) {
  Frame& f = frames_[frame];
  if (f.protected_until <= now) {
    f.eligible = true;
    eligible_.emplace(order_key(frame), frame);
  } else {
    f.eligible = false;
    protected_.emplace(f.protected_until, frame);
  }
  if (config_.base_policy == BasePolicy::kLru) by_use_.emplace(f.last_use, frame);
}

void BufferPool::unplace(std::size_t frame) {
  Frame& f = frames_[frame];
  if (f.eligible) {
    eligible_.erase({order_key(frame), frame});
  } else {
    protected_.erase({f.protected_until, frame});
  }
  if (config_.base_policy == BasePolicy::kLru) by_use_.erase({f.last_use, frame});
}

void BufferPool::touch(std::size_t frame) {
  Frame& f = frames_[frame];
  if (config_.base_policy == BasePolicy::kLru) {
    if (f.eligible) eligible_.erase({f.last_use, frame});
    by_use_.erase({f.last_use, frame});
    f.last_use = ++tick_;
    if (f.eligible) eligible_.emplace(f.last_use, frame);
    by_use_.emplace(f.last_use, frame);
  } else {
    f.referenced = true;
  }
}

std::size_t BufferPool::lru_victim(bool fallback) const {
  return fallback ? by_use_.begin()->second : eligible_.begin()->second;
}

// The hand visits eligible frames in index order, clearing reference bits,
// and stops at the first unreferenced one. Frames it skips over are left
// alone, as if the sweep stepped past them.
std::size_t BufferPool::clock_victim(bool fallback) {
  const std::size_t n = frames_.size();
  if (fallback) {
    while (true) {
      Frame& f = frames_[hand_];
      const std::size_t i = hand_;
      hand_ = (hand_ + 1) % n;
      if (!f.referenced) return i;
      f.referenced = false;
    }
  }
  while (true) {
    auto it = eligible_.lower_bound({hand_, 0});
    if (it == eligible_.end()) it = eligible_.begin();
    const std::size_t i = it->second;
    hand_ = (i + 1) % n;
    if (!frames_[i].referenced) return i;
    frames_[i].referenced = false;
  }
}

std::size_t BufferPool::take_frame(double now) {
  if (used_frames_ < frames_.size()) return used_frames_++;

  release_expired(now);
  const bool fallback = eligible_.empty();
  const std::size_t i = config_.base_policy == BasePolicy::kLru ? lru_victim(fallback) : clock_victim(fallback);
  Frame& f = frames_[i];

  ++report_.evictions;
  if (fallback) ++report_.protected_eviction_fallbacks;
  if (f.dirty) {
    ++report_.contention_flushes;
    --dirty_count_;
  }
  if (observer_) observer_(EvictionRecord{now, f.page, f.protected_until, f.dirty, fallback});
  unplace(i);
  page_table_.erase(f.page);
  f.dirty = false;
  f.occupied = false;
  return i;
}

void BufferPool::access(const TraceEvent& event) {
  if (finished_) throw InputError("access after the final checkpoint");
  const double now = event.time_s;
  if (!std::isfinite(now)) throw InputError("non-finite event time");
  if (last_time_ && now < *last_time_) {
    throw InputError("trace is not time-ordered: event at " + std::to_string(now) + " s follows " +
                     std::to_string(*last_time_) + " s");
  }
  run_checkpoints(now);
  last_time_ = now;

  ++report_.logical_accesses;
  const bool seen_recently = in_history(event.page_id, now);

  std::size_t frame;
  if (auto it = page_table_.find(event.page_id); it != page_table_.end()) {
    frame = it->second;
    touch(frame);
  } else {
    ++report_.physical_reads;
    frame = take_frame(now);
    Frame& f = frames_[frame];
    f.page = event.page_id;
    f.occupied = true;
    f.dirty = false;
    f.referenced = true;
    f.last_use = ++tick_;
    f.protected_until = seen_recently ? now + config_.n_minute_s : now;
    place(frame, now);
    page_table_.emplace(event.page_id, frame);
  }
  remember(event.page_id, now);

  if (event.op == AccessOp::kWrite) {
    Frame& f = frames_[frame];
    if (!f.dirty) {
      f.dirty = true;
      f.first_dirty_s = now;
      ++dirty_count_;
    }
  }
}

void BufferPool::finish() {
  if (finished_) return;
  flush_dirty_before(std::numeric_limits<double>::infinity());
  finished_ = true;
}

SimReport BufferPool::report() const {
  SimReport r = report_;
  r.hit_ratio = r.logical_accesses == 0
                    ? 0.0
                    : 1.0 - static_cast<double>(r.physical_reads) / static_cast<double>(r.logical_accesses);
  return r;
}

SimReport simulate(std::span<const TraceEvent> trace, const PoolConfig& config, const EvictionObserver& observer) {
  BufferPool pool(config, observer);
  for (const auto& event : trace) pool.access(event);
  pool.finish();
  return pool.report();
}

double recommended_n(const TechnologyParams& tp, const EconomicParams& ep) {
  return break_even_interval(tp, ep).interval_s;
}

}  // namespace fivemin
