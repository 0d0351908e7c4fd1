#include "fivemin/sort_planner.hpp"

#include <cmath>

#include <fmt/format.h>

namespace fivemin {

namespace {

void check_constants(const SortConstants& c) {
  if (!(c.c_buf > 0) || !(c.c_sqrt > 0)) throw ConfigError("sort constants must be > 0");
}

}  // namespace

double two_pass_memory(double file_bytes, double buffer_bytes, SortConstants constants) {
  if (!(buffer_bytes > 0)) throw ConfigError("buffer_bytes must be > 0");
  if (!(file_bytes >= 0)) throw ConfigError("file_bytes must be >= 0");
  check_constants(constants);
  return constants.c_buf * buffer_bytes + constants.c_sqrt * std::sqrt(buffer_bytes * file_bytes);
}

double max_two_pass_file(double memory_bytes, double buffer_bytes, SortConstants constants) {
  if (!(buffer_bytes > 0)) throw ConfigError("buffer_bytes must be > 0");
  check_constants(constants);
  const double spare = memory_bytes - constants.c_buf * buffer_bytes;
  if (!(spare > 0)) throw ConfigError("insufficient memory for any two-pass sort");
  const double root = spare / constants.c_sqrt;
  return root * root / buffer_bytes;
}

SortPlan run_merge_plan(double file_bytes, double memory_bytes, double buffer_bytes) {
  if (!(buffer_bytes > 0)) throw ConfigError("buffer_bytes must be > 0");
  if (!(file_bytes >= 0)) throw ConfigError("file_bytes must be >= 0");
  if (!(memory_bytes >= buffer_bytes)) throw ConfigError("memory_bytes must be >= buffer_bytes");

  SortPlan plan;
  plan.fan_in = static_cast<std::uint64_t>(std::floor(memory_bytes / buffer_bytes));
  if (file_bytes <= memory_bytes) {
    plan.passes = 1;
    plan.run_count = 1;
    plan.memory_required_bytes = file_bytes > 0 ? file_bytes : buffer_bytes;
    return plan;
  }

  plan.passes = 2;
  plan.run_count = static_cast<std::uint64_t>(std::ceil(file_bytes / memory_bytes));
  plan.memory_required_bytes = two_pass_memory(file_bytes, buffer_bytes);
  if (plan.run_count > plan.fan_in) {
    throw NeedsMorePassesError(
        fmt::format("needs more than two passes: {} runs exceed fan-in {}; a two-pass sort needs about {:.6g} bytes",
                    plan.run_count, plan.fan_in, plan.memory_required_bytes),
        plan.memory_required_bytes);
  }
  return plan;
}

int choose_pass_count(double file_bytes, double one_pass_threshold_bytes) {
  if (!(one_pass_threshold_bytes > 0)) throw ConfigError("one_pass_threshold_bytes must be > 0");
  return file_bytes <= one_pass_threshold_bytes ? 1 : 2;
}

}  // namespace fivemin
