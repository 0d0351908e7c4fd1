#pragma once

// Unit constants. Page counting (rules_engine) is binary; device metrics
// (storage_metrics) and preset capacities/bandwidths are decimal SI.

namespace fivemin::units {

inline constexpr double kKiB = 1024.0;
inline constexpr double kMiB = 1024.0 * 1024.0;

inline constexpr double kKB = 1e3;
inline constexpr double kMB = 1e6;
inline constexpr double kGB = 1e9;
inline constexpr double kTB = 1e12;

inline constexpr double kMillisecond = 1e-3;
inline constexpr double kMicrosecond = 1e-6;

inline constexpr double kSecondsPerYear = 365.0 * 86400.0;

}  // namespace fivemin::units
