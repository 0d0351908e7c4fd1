#pragma once

#include <span>
#include <vector>

#include "fivemin/device_catalog.hpp"

// Break-even reference intervals between DRAM and a slower device.
//
// The interval is the product of a technology ratio (RAM pages per MB over
// device accesses per second) and an economic ratio (device price over RAM
// price per MB). A page re-referenced more often than the interval is
// cheaper to keep in RAM than to re-fetch.
//
// Page counting in this module is binary: one MB of RAM is 2^20 bytes, so
// 8 KB pages give 128 pages/MB and 64 KB transfers give 16.

namespace fivemin {

struct TechnologyParams {
  double pages_per_mb = 0;
  double accesses_per_sec = 0;
};

struct EconomicParams {
  double device_price_dollars = 0;
  double ram_price_per_mb = 0;
};

struct BreakEvenResult {
  double technology_ratio = 0;
  double economic_ratio = 0;
  double interval_s = 0;
};

enum class RaidLevel { kNone, kRaid1, kRaid5 };

struct RaidAdjustment {
  RaidLevel level = RaidLevel::kNone;
  double read_multiplier = 1.0;
  double write_multiplier = 1.0;

  // Mirroring makes reads slightly cheaper and roughly doubles writes;
  // parity RAID quadruples small writes.
  static RaidAdjustment defaults(RaidLevel level);
};

struct SequentialParams {
  double transfer_bytes = 0;
  double bandwidth_bps = 0;
};

enum class SequentialPasses { kReadOnce, kWriteThenRead };

struct IntervalPoint {
  double page_bytes = 0;
  double interval_s = 0;
};

void validate(const TechnologyParams& tp);
void validate(const EconomicParams& ep);
void validate(const SequentialParams& sp);

double technology_ratio(const TechnologyParams& tp);
double economic_ratio(const EconomicParams& ep);
BreakEvenResult break_even_interval(const TechnologyParams& tp, const EconomicParams& ep);

TechnologyParams derive_sequential_params(const SequentialParams& sp);
double sequential_break_even(const SequentialParams& sp, const EconomicParams& ep, SequentialPasses passes);

// Large-transfer limit of the break-even interval: the technology ratio
// degenerates to 2^20 / bandwidth.
double asymptotic_sequential_interval(double bandwidth_bps, const EconomicParams& ep);

TechnologyParams apply_raid(const TechnologyParams& tp, const RaidAdjustment& adj, double write_fraction);

// Random access to pages of `page_bytes` on a device with a fixed per-access
// latency: 2^20/page pages per MB and 1/(latency + page/bandwidth) accesses.
TechnologyParams page_access_params(double latency_s, double bandwidth_bps, double page_bytes);

std::vector<IntervalPoint> reference_interval_vs_page_size(double latency_s, double bandwidth_bps,
                                                           const EconomicParams& ep,
                                                           std::span<const double> page_sizes);

// Economic parameters for caching `device` in DRAM. Throws ConfigError when the
// device is RAM itself or no RAM price is known.
EconomicParams economic_params_for(const DeviceSpec& device, std::optional<double> ram_price_per_mb = std::nullopt);

// Technology parameters for random access to `device`. Disks use their stated
// accesses_per_sec at 8 KB pages unless `page_bytes` is given, in which case
// the latency plus transfer model applies; tape robots always use the mount
// time model (default 8 KB pages).
TechnologyParams technology_params_for(const DeviceSpec& device, std::optional<double> page_bytes = std::nullopt);

}  // namespace fivemin
