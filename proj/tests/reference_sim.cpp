#include "reference_sim.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace fivemin::testing {

namespace {

struct Slot {
  PageId page = 0;
  bool dirty = false;
  double first_dirty = 0;
  double protected_until = 0;
  std::uint64_t last_use = 0;
  bool ref = false;
};

SimReport run(const std::vector<TraceEvent>& trace, const PoolConfig& config, bool lifetimes,
              std::vector<EvictionRecord>* log) {
  if (config.frames == 0) throw std::invalid_argument("frames");
  std::vector<std::optional<Slot>> slots(config.frames);
  std::vector<std::pair<PageId, double>> history;
  std::size_t hand = 0;
  std::uint64_t tick = 0;
  SimReport rep;

  std::optional<long long> last_boundary;
  auto checkpoint = [&](double threshold) {
    for (auto& s : slots) {
      if (s && s->dirty && s->first_dirty < threshold) {
        s->dirty = false;
        ++rep.checkpoint_flushes;
      }
    }
  };

  for (const auto& ev : trace) {
    const double now = ev.time_s;
    if (config.checkpoint_interval_s) {
      const double c = *config.checkpoint_interval_s;
      if (!last_boundary) {
        last_boundary = static_cast<long long>(std::floor(now / c));
      } else {
        for (long long k = *last_boundary + 1; static_cast<double>(k) * c <= now; ++k) {
          checkpoint(static_cast<double>(k - 1) * c);
          last_boundary = k;
        }
      }
    }

    ++rep.logical_accesses;
    ++tick;

    // Prune, then look the page up.
    std::vector<std::pair<PageId, double>> kept;
    for (const auto& h : history) {
      if (now - h.second <= config.n_minute_s) kept.push_back(h);
    }
    history = kept;
    bool listed = false;
    for (const auto& h : history) listed = listed || h.first == ev.page_id;

    std::optional<std::size_t> at;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i] && slots[i]->page == ev.page_id) at = i;
    }

    if (at) {
      slots[*at]->last_use = tick;
      slots[*at]->ref = true;
    } else {
      ++rep.physical_reads;
      std::optional<std::size_t> free_slot;
      for (std::size_t i = 0; i < slots.size() && !free_slot; ++i) {
        if (!slots[i]) free_slot = i;
      }
      if (!free_slot) {
        auto eligible = [&](std::size_t i) { return !lifetimes || slots[i]->protected_until <= now; };
        bool any = false;
        for (std::size_t i = 0; i < slots.size(); ++i) any = any || eligible(i);
        const bool fallback = !any;

        std::size_t victim = 0;
        if (config.base_policy == BasePolicy::kLru) {
          std::optional<std::size_t> best;
          for (std::size_t i = 0; i < slots.size(); ++i) {
            if (!fallback && !eligible(i)) continue;
            if (!best || slots[i]->last_use < slots[*best]->last_use) best = i;
          }
          victim = *best;
        } else {
          while (true) {
            const std::size_t i = hand;
            hand = (hand + 1) % slots.size();
            if (!fallback && !eligible(i)) continue;
            if (slots[i]->ref) {
              slots[i]->ref = false;
              continue;
            }
            victim = i;
            break;
          }
        }
        ++rep.evictions;
        if (fallback) ++rep.protected_eviction_fallbacks;
        if (slots[victim]->dirty) ++rep.contention_flushes;
        if (log) {
          log->push_back({now, slots[victim]->page, slots[victim]->protected_until, slots[victim]->dirty, fallback});
        }
        slots[victim].reset();
        free_slot = victim;
      }
      Slot s;
      s.page = ev.page_id;
      s.last_use = tick;
      s.ref = true;
      s.protected_until = (lifetimes && listed) ? now + config.n_minute_s : now;
      slots[*free_slot] = s;
      at = free_slot;
    }

    bool found = false;
    for (auto& h : history) {
      if (h.first == ev.page_id) {
        h.second = now;
        found = true;
      }
    }
    if (!found) history.emplace_back(ev.page_id, now);

    if (ev.op == AccessOp::kWrite && !slots[*at]->dirty) {
      slots[*at]->dirty = true;
      slots[*at]->first_dirty = now;
    }
  }

  for (auto& s : slots) {
    if (s && s->dirty) ++rep.checkpoint_flushes;
  }
  rep.hit_ratio = rep.logical_accesses == 0
                      ? 0.0
                      : 1.0 - static_cast<double>(rep.physical_reads) / static_cast<double>(rep.logical_accesses);
  return rep;
}

}  // namespace

SimReport reference_simulate(const std::vector<TraceEvent>& trace, const PoolConfig& config,
                             std::vector<EvictionRecord>* log) {
  return run(trace, config, true, log);
}

SimReport pure_policy_simulate(const std::vector<TraceEvent>& trace, const PoolConfig& config) {
  return run(trace, config, false, nullptr);
}

std::vector<TraceEvent> random_small_trace(std::mt19937_64& rng, std::size_t max_events, PageId max_pages) {
  const std::size_t n = rng() % (max_events + 1);
  const PageId pages = 1 + rng() % max_pages;
  std::vector<TraceEvent> trace;
  double t = static_cast<double>(rng() % 5);
  for (std::size_t i = 0; i < n; ++i) {
    switch (rng() % 4) {
      case 0: break;
      case 1: t += 0.5; break;
      default: t += static_cast<double>(1 + rng() % 3); break;
    }
    trace.push_back({t, rng() % pages, rng() % 3 == 0 ? AccessOp::kWrite : AccessOp::kRead});
  }
  return trace;
}

PoolConfig random_small_config(std::mt19937_64& rng, std::size_t max_frames) {
  PoolConfig config;
  config.frames = 1 + rng() % max_frames;
  config.base_policy = rng() % 2 ? BasePolicy::kClock2 : BasePolicy::kLru;
  config.n_minute_s = static_cast<double>(rng() % 13);
  if (rng() % 3) config.checkpoint_interval_s = static_cast<double>(1 + rng() % 8);
  return config;
}

}  // namespace fivemin::testing
