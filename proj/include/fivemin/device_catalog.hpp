#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fivemin {

// Prices include amortized cabinet and controller cost. Capacities and
// bandwidths are in bytes and bytes/second.

struct RamSpec {
  double price_per_mb = 0;
  double unit_capacity_bytes = 0;
  double latency_s = 0;
  double bandwidth_bps = 0;

  bool operator==(const RamSpec&) const = default;
};

struct DiskSpec {
  double price_dollars = 0;
  double capacity_bytes = 0;
  double latency_s = 0;
  double bandwidth_bps = 0;
  // Random accesses per second at the device's nominal page size.
  double accesses_per_sec = 0;

  bool operator==(const DiskSpec&) const = default;
};

struct TapeRobotSpec {
  double price_dollars = 0;
  double tape_count = 0;
  double tape_capacity_bytes = 0;
  // Full rewind, unmount, put, pick, mount and position cycle.
  double mount_time_s = 0;
  double bandwidth_bps = 0;

  double total_capacity_bytes() const { return tape_count * tape_capacity_bytes; }

  bool operator==(const TapeRobotSpec&) const = default;
};

enum class DeviceKind { kRam, kDisk, kTapeRobot };

std::string_view to_string(DeviceKind kind);
DeviceKind parse_device_kind(std::string_view text);

struct DeviceSpec {
  std::string name;
  std::variant<RamSpec, DiskSpec, TapeRobotSpec> payload;
  // DRAM price quoted alongside the device, used as the economic-ratio
  // denominator when the device is the slower tier.
  std::optional<double> ram_price_per_mb;

  DeviceKind kind() const { return static_cast<DeviceKind>(payload.index()); }

  // Unit price of the device in dollars (RAM: price_per_mb x capacity in MB).
  double price_dollars() const;
  double capacity_bytes() const;
  double bandwidth_bps() const;
  // Fixed cost of one random access: latency for RAM and disk, mount time for
  // a tape robot.
  double access_latency_s() const;

  bool operator==(const DeviceSpec&) const = default;
};

// Throws ConfigError naming the offending field.
void validate(const RamSpec& spec);
void validate(const DiskSpec& spec);
void validate(const TapeRobotSpec& spec);
void validate(const DeviceSpec& spec);

std::vector<std::string> preset_names();

// Throws ConfigError("unknown preset ...") listing the valid names.
DeviceSpec preset(std::string_view name);

// Line-oriented `[device]` blocks of `key = value` pairs; `#` starts a comment.
std::vector<DeviceSpec> parse_device_file(std::string_view text);
std::vector<DeviceSpec> load_device_file(const std::filesystem::path& path);

// Inverse of parse_device_file. Numbers are written with enough digits to
// round-trip exactly.
std::string serialize_devices(const std::vector<DeviceSpec>& devices);

}  // namespace fivemin
