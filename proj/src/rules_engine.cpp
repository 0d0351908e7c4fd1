#include "fivemin/rules_engine.hpp"

#include "fivemin/error.hpp"
#include "fivemin/units.hpp"

namespace fivemin {

namespace {

constexpr double kDefaultPageBytes = 8192;

void require_positive(double value, const char* field) {
  if (!(value > 0)) throw ConfigError(std::string(field) + " must be > 0");
}

}  // namespace

RaidAdjustment RaidAdjustment::defaults(RaidLevel level) {
  switch (level) {
    case RaidLevel::kNone: return {level, 1.0, 1.0};
    case RaidLevel::kRaid1: return {level, 0.9, 2.0};
    case RaidLevel::kRaid5: return {level, 1.0, 4.0};
  }
  return {};
}

void validate(const TechnologyParams& tp) {
  require_positive(tp.pages_per_mb, "pages_per_mb");
  require_positive(tp.accesses_per_sec, "accesses_per_sec");
}

void validate(const EconomicParams& ep) {
  require_positive(ep.device_price_dollars, "device_price_dollars");
  require_positive(ep.ram_price_per_mb, "ram_price_per_mb");
}

void validate(const SequentialParams& sp) {
  require_positive(sp.transfer_bytes, "transfer_bytes");
  require_positive(sp.bandwidth_bps, "bandwidth_bps");
}

double technology_ratio(const TechnologyParams& tp) {
  validate(tp);
  return tp.pages_per_mb / tp.accesses_per_sec;
}

double economic_ratio(const EconomicParams& ep) {
  validate(ep);
  return ep.device_price_dollars / ep.ram_price_per_mb;
}

BreakEvenResult break_even_interval(const TechnologyParams& tp, const EconomicParams& ep) {
  BreakEvenResult r;
  r.technology_ratio = technology_ratio(tp);
  r.economic_ratio = economic_ratio(ep);
  r.interval_s = r.technology_ratio * r.economic_ratio;
  return r;
}

TechnologyParams derive_sequential_params(const SequentialParams& sp) {
  validate(sp);
  return {units::kMiB / sp.transfer_bytes, sp.bandwidth_bps / sp.transfer_bytes};
}

double sequential_break_even(const SequentialParams& sp, const EconomicParams& ep, SequentialPasses passes) {
  const double once = break_even_interval(derive_sequential_params(sp), ep).interval_s;
  return passes == SequentialPasses::kWriteThenRead ? 2.0 * once : once;
}

double asymptotic_sequential_interval(double bandwidth_bps, const EconomicParams& ep) {
  require_positive(bandwidth_bps, "bandwidth_bps");
  return (units::kMiB / bandwidth_bps) * economic_ratio(ep);
}

TechnologyParams apply_raid(const TechnologyParams& tp, const RaidAdjustment& adj, double write_fraction) {
  validate(tp);
  require_positive(adj.read_multiplier, "read_multiplier");
  require_positive(adj.write_multiplier, "write_multiplier");
  if (!(write_fraction >= 0 && write_fraction <= 1)) {
    throw ConfigError("write_fraction must be in [0, 1]");
  }
  if (adj.level == RaidLevel::kNone) return tp;
  const double cost = (1.0 - write_fraction) * adj.read_multiplier + write_fraction * adj.write_multiplier;
  return {tp.pages_per_mb, tp.accesses_per_sec / cost};
}

TechnologyParams page_access_params(double latency_s, double bandwidth_bps, double page_bytes) {
  if (!(latency_s >= 0)) throw ConfigError("latency_s must be >= 0");
  require_positive(bandwidth_bps, "bandwidth_bps");
  require_positive(page_bytes, "page_bytes");
  return {units::kMiB / page_bytes, 1.0 / (latency_s + page_bytes / bandwidth_bps)};
}

std::vector<IntervalPoint> reference_interval_vs_page_size(double latency_s, double bandwidth_bps,
                                                           const EconomicParams& ep,
                                                           std::span<const double> page_sizes) {
  if (page_sizes.empty()) throw ConfigError("page_sizes must not be empty");
  std::vector<IntervalPoint> series;
  series.reserve(page_sizes.size());
  for (double size : page_sizes) {
    const auto tp = page_access_params(latency_s, bandwidth_bps, size);
    series.push_back({size, break_even_interval(tp, ep).interval_s});
  }
  return series;
}

EconomicParams economic_params_for(const DeviceSpec& device, std::optional<double> ram_price_per_mb) {
  if (device.kind() == DeviceKind::kRam) {
    throw ConfigError("device '" + device.name + "' is RAM; a break-even interval needs a slower device");
  }
  const auto ram_price = ram_price_per_mb ? ram_price_per_mb : device.ram_price_per_mb;
  if (!ram_price) throw ConfigError("no RAM price for device '" + device.name + "'; pass --ram-price");
  EconomicParams ep{device.price_dollars(), *ram_price};
  validate(ep);
  return ep;
}

TechnologyParams technology_params_for(const DeviceSpec& device, std::optional<double> page_bytes) {
  if (const auto* disk = std::get_if<DiskSpec>(&device.payload)) {
    if (page_bytes) return page_access_params(disk->latency_s, disk->bandwidth_bps, *page_bytes);
    return {units::kMiB / kDefaultPageBytes, disk->accesses_per_sec};
  }
  if (const auto* tape = std::get_if<TapeRobotSpec>(&device.payload)) {
    return page_access_params(tape->mount_time_s, tape->bandwidth_bps, page_bytes.value_or(kDefaultPageBytes));
  }
  throw ConfigError("device '" + device.name + "' is RAM; a break-even interval needs a slower device");
}

}  // namespace fivemin
