#include "fivemin/device_catalog.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "fivemin/error.hpp"
#include "fivemin/units.hpp"

namespace fivemin {

namespace {

using units::kGB;
using units::kMB;

void require_positive(double value, std::string_view field) {
  if (!(value > 0)) {
    throw ConfigError(std::string(field) + " must be > 0");
  }
}

DeviceSpec make(std::string name, auto payload, std::optional<double> ram_price = std::nullopt) {
  return DeviceSpec{std::move(name), payload, ram_price};
}

// Disk performance shared by the 1997 TPC-C system presets: 10 ms average
// access, 10 MB/s sequential, 64 random 8 KB accesses per second.
DiskSpec tpcc_disk(double price, double capacity) {
  return DiskSpec{price, capacity, 0.010, 10 * kMB, 64};
}

const std::vector<DeviceSpec>& presets() {
  static const std::vector<DeviceSpec> table = {
      make("dell_tpcc_1997", tpcc_disk(2000, 9 * kGB), 15.0),
      make("sun_oracle_1997", tpcc_disk(1690, 4 * kGB), 13.0),
      make("mainframe_1997", tpcc_disk(12000, 9 * kGB), 130.0),
      make("compaq_tpcc_1997", tpcc_disk(3129, 9 * kGB), 47.0),
      make("table4_dlt_robot", TapeRobotSpec{9000, 14, 35 * kGB, 30, 5 * kMB}, 15.0),
      make("table8_ram", RamSpec{15, 1 * kGB, 0.1 * units::kMicrosecond, 500 * kMB}),
      make("table8_disk", DiskSpec{2000, 9 * kGB, 0.010, 5 * kMB, 64}, 15.0),
      make("table8_tape_robot", TapeRobotSpec{10000, 14, 35 * kGB, 30, 5 * kMB}, 15.0),
  };
  return table;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), ptr);
}

struct PendingBlock {
  std::size_t line = 0;
  std::map<std::string, std::pair<std::string, std::size_t>> fields;
};

double number_field(PendingBlock& block, const std::string& key) {
  auto it = block.fields.find(key);
  if (it == block.fields.end()) {
    throw ParseError(block.line, "device block is missing field '" + key + "'");
  }
  const auto& [text, line] = it->second;
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "field '" + key + "' is not a number: '" + text + "'");
  }
  block.fields.erase(it);
  return value;
}

DeviceSpec finish_block(PendingBlock block) {
  DeviceSpec spec;
  auto name_it = block.fields.find("name");
  if (name_it == block.fields.end()) throw ParseError(block.line, "device block is missing field 'name'");
  spec.name = name_it->second.first;
  block.fields.erase(name_it);

  auto kind_it = block.fields.find("kind");
  if (kind_it == block.fields.end()) throw ParseError(block.line, "device block is missing field 'kind'");
  DeviceKind kind;
  try {
    kind = parse_device_kind(kind_it->second.first);
  } catch (const ConfigError& e) {
    throw ParseError(kind_it->second.second, e.what());
  }
  block.fields.erase(kind_it);

  switch (kind) {
    case DeviceKind::kRam: {
      RamSpec ram;
      ram.price_per_mb = number_field(block, "price_per_mb");
      ram.unit_capacity_bytes = number_field(block, "unit_capacity_bytes");
      ram.latency_s = number_field(block, "latency_s");
      ram.bandwidth_bps = number_field(block, "bandwidth_bps");
      spec.payload = ram;
      break;
    }
    case DeviceKind::kDisk: {
      DiskSpec disk;
      disk.price_dollars = number_field(block, "price_dollars");
      disk.capacity_bytes = number_field(block, "capacity_bytes");
      disk.latency_s = number_field(block, "latency_s");
      disk.bandwidth_bps = number_field(block, "bandwidth_bps");
      disk.accesses_per_sec = number_field(block, "accesses_per_sec");
      spec.payload = disk;
      break;
    }
    case DeviceKind::kTapeRobot: {
      TapeRobotSpec tape;
      tape.price_dollars = number_field(block, "price_dollars");
      tape.tape_count = number_field(block, "tape_count");
      tape.tape_capacity_bytes = number_field(block, "tape_capacity_bytes");
      tape.mount_time_s = number_field(block, "mount_time_s");
      tape.bandwidth_bps = number_field(block, "bandwidth_bps");
      spec.payload = tape;
      break;
    }
  }
  if (block.fields.contains("ram_price_per_mb")) {
    spec.ram_price_per_mb = number_field(block, "ram_price_per_mb");
  }
  if (!block.fields.empty()) {
    const auto& [key, value] = *block.fields.begin();
    throw ParseError(value.second, "unknown field '" + key + "' for kind " + std::string(to_string(kind)));
  }
  try {
    validate(spec);
  } catch (const ConfigError& e) {
    throw ConfigError("device '" + spec.name + "' (line " + std::to_string(block.line) + "): " + e.what());
  }
  return spec;
}

}  // namespace

std::string_view to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::kRam: return "ram";
    case DeviceKind::kDisk: return "disk";
    case DeviceKind::kTapeRobot: return "tape_robot";
  }
  return "unknown";
}

DeviceKind parse_device_kind(std::string_view text) {
  if (text == "ram") return DeviceKind::kRam;
  if (text == "disk") return DeviceKind::kDisk;
  if (text == "tape_robot") return DeviceKind::kTapeRobot;
  throw ConfigError("unknown device kind '" + std::string(text) + "' (expected ram, disk or tape_robot)");
}

double DeviceSpec::price_dollars() const {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RamSpec>) {
          return p.price_per_mb * p.unit_capacity_bytes / kMB;
        } else {
          return p.price_dollars;
        }
      },
      payload);
}

double DeviceSpec::capacity_bytes() const {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RamSpec>) {
          return p.unit_capacity_bytes;
        } else if constexpr (std::is_same_v<T, DiskSpec>) {
          return p.capacity_bytes;
        } else {
          return p.total_capacity_bytes();
        }
      },
      payload);
}

double DeviceSpec::bandwidth_bps() const {
  return std::visit([](const auto& p) { return p.bandwidth_bps; }, payload);
}

double DeviceSpec::access_latency_s() const {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TapeRobotSpec>) {
          return p.mount_time_s;
        } else {
          return p.latency_s;
        }
      },
      payload);
}

void validate(const RamSpec& spec) {
  require_positive(spec.price_per_mb, "price_per_mb");
  require_positive(spec.unit_capacity_bytes, "unit_capacity_bytes");
  require_positive(spec.latency_s, "latency_s");
  require_positive(spec.bandwidth_bps, "bandwidth_bps");
}

void validate(const DiskSpec& spec) {
  require_positive(spec.price_dollars, "price_dollars");
  require_positive(spec.capacity_bytes, "capacity_bytes");
  require_positive(spec.latency_s, "latency_s");
  require_positive(spec.bandwidth_bps, "bandwidth_bps");
  require_positive(spec.accesses_per_sec, "accesses_per_sec");
  if (spec.accesses_per_sec > 1.0 / spec.latency_s) {
    throw ConfigError("accesses_per_sec must not exceed 1/latency_s");
  }
}

void validate(const TapeRobotSpec& spec) {
  require_positive(spec.price_dollars, "price_dollars");
  require_positive(spec.tape_count, "tape_count");
  require_positive(spec.tape_capacity_bytes, "tape_capacity_bytes");
  require_positive(spec.mount_time_s, "mount_time_s");
  require_positive(spec.bandwidth_bps, "bandwidth_bps");
}

void validate(const DeviceSpec& spec) {
  if (spec.name.empty()) throw ConfigError("name must not be empty");
  std::visit([](const auto& p) { validate(p); }, spec.payload);
  if (spec.ram_price_per_mb) require_positive(*spec.ram_price_per_mb, "ram_price_per_mb");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : presets()) names.push_back(p.name);
  return names;
}

DeviceSpec preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  std::string valid;
  for (const auto& n : preset_names()) {
    if (!valid.empty()) valid += ", ";
    valid += n;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'; valid presets: " + valid);
}

std::vector<DeviceSpec> parse_device_file(std::string_view text) {
  std::vector<DeviceSpec> devices;
  std::optional<PendingBlock> block;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line == "[device]") {
      if (block) devices.push_back(finish_block(std::move(*block)));
      block = PendingBlock{line_no, {}};
      continue;
    }
    if (line.front() == '[') throw ParseError(line_no, "unknown section '" + line + "'");
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    if (!block) throw ParseError(line_no, "field outside of a [device] block");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (!block->fields.emplace(key, std::make_pair(value, line_no)).second) {
      throw ParseError(line_no, "duplicate field '" + key + "'");
    }
  }
  if (block) devices.push_back(finish_block(std::move(*block)));
  return devices;
}

std::vector<DeviceSpec> load_device_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open device file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_device_file(buf.str());
}

std::string serialize_devices(const std::vector<DeviceSpec>& devices) {
  std::ostringstream out;
  bool first = true;
  for (const auto& d : devices) {
    if (!first) out << '\n';
    first = false;
    out << "[device]\n";
    out << "name = " << d.name << '\n';
    out << "kind = " << to_string(d.kind()) << '\n';
    auto field = [&](std::string_view key, double v) { out << key << " = " << format_number(v) << '\n'; };
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, RamSpec>) {
            field("price_per_mb", p.price_per_mb);
            field("unit_capacity_bytes", p.unit_capacity_bytes);
            field("latency_s", p.latency_s);
            field("bandwidth_bps", p.bandwidth_bps);
          } else if constexpr (std::is_same_v<T, DiskSpec>) {
            field("price_dollars", p.price_dollars);
            field("capacity_bytes", p.capacity_bytes);
            field("latency_s", p.latency_s);
            field("bandwidth_bps", p.bandwidth_bps);
            field("accesses_per_sec", p.accesses_per_sec);
          } else {
            field("price_dollars", p.price_dollars);
            field("tape_count", p.tape_count);
            field("tape_capacity_bytes", p.tape_capacity_bytes);
            field("mount_time_s", p.mount_time_s);
            field("bandwidth_bps", p.bandwidth_bps);
          }
        },
        d.payload);
    if (d.ram_price_per_mb) field("ram_price_per_mb", *d.ram_price_per_mb);
  }
  return out.str();
}

}  // namespace fivemin
