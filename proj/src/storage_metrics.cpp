#include "fivemin/storage_metrics.hpp"

#include <cmath>

#include "fivemin/error.hpp"

namespace fivemin {

namespace {

double access_rate(const DeviceSpec& device, double transfer_bytes) {
  validate(device);
  return 1.0 / (device.access_latency_s() + transfer_bytes / device.bandwidth_bps());
}

}  // namespace

double kaps(const DeviceSpec& device) { return access_rate(device, units::kKB); }

double maps(const DeviceSpec& device) { return access_rate(device, units::kMB); }

double scan_seconds(const DeviceSpec& device) {
  validate(device);
  if (const auto* tape = std::get_if<TapeRobotSpec>(&device.payload)) {
    return tape->tape_count * (tape->tape_capacity_bytes / tape->bandwidth_bps + tape->mount_time_s);
  }
  return device.capacity_bytes() / device.bandwidth_bps();
}

double dollar_rate(double price_dollars, const RentModel& rent) {
  if (!(price_dollars > 0)) throw ConfigError("price_dollars must be > 0");
  if (!(rent.depreciation_s > 0)) throw ConfigError("depreciation_s must be > 0");
  return price_dollars / rent.depreciation_s;
}

double dollars_per_tbscan(const DeviceSpec& device, const RentModel& rent) {
  validate(device);
  double seconds = units::kTB / device.bandwidth_bps();
  if (const auto* tape = std::get_if<TapeRobotSpec>(&device.payload)) {
    seconds += std::ceil(units::kTB / tape->tape_capacity_bytes) * tape->mount_time_s;
  }
  return dollar_rate(device.price_dollars(), rent) * seconds;
}

MetricReport metric_report(const DeviceSpec& device, const RentModel& rent) {
  MetricReport r;
  r.kaps = kaps(device);
  r.maps = maps(device);
  r.scan_s = scan_seconds(device);
  const double rate = dollar_rate(device.price_dollars(), rent);
  r.dollars_per_kaps = rate / r.kaps;
  r.dollars_per_maps = rate / r.maps;
  r.dollars_per_tbscan = dollars_per_tbscan(device, rent);
  return r;
}

}  // namespace fivemin
