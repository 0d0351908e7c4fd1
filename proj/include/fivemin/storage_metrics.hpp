#pragma once

#include <span>
#include <vector>

#include "fivemin/device_catalog.hpp"
#include "fivemin/units.hpp"

// Access-rate and rent-normalized device metrics.
//
//   Kaps  kilobyte (1000 B) accesses per second
//   Maps  megabyte (1e6 B) accesses per second
//   Scan  seconds to stream the whole device
//
// Dollar forms divide the device rent (price over the depreciation period)
// by the rate, or multiply it by the time to stream a terabyte. Units are
// decimal throughout. Tape robot accesses pay one full mount cycle each.

namespace fivemin {

struct RentModel {
  double depreciation_s = 3 * units::kSecondsPerYear;
};

struct MetricReport {
  double kaps = 0;
  double maps = 0;
  double scan_s = 0;
  double dollars_per_kaps = 0;
  double dollars_per_maps = 0;
  double dollars_per_tbscan = 0;
};

double kaps(const DeviceSpec& device);
double maps(const DeviceSpec& device);
double scan_seconds(const DeviceSpec& device);
double dollar_rate(double price_dollars, const RentModel& rent = {});
double dollars_per_tbscan(const DeviceSpec& device, const RentModel& rent = {});
MetricReport metric_report(const DeviceSpec& device, const RentModel& rent = {});

}  // namespace fivemin
