#pragma once

#include <cstdint>
#include <string>

#include "fivemin/error.hpp"

// Memory planning for one- and two-pass external sorts.
//
// A two-pass sort writes File/Memory sorted runs in the first pass and merges
// up to Memory/Buffer of them in the second. Balancing the two gives the
// square-root memory requirement
//
//   memory = c_buf * buffer + c_sqrt * sqrt(buffer * file)
//
// where the constants (6 and 3 by default) depend on the sort algorithm.

namespace fivemin {

struct SortConstants {
  double c_buf = 6.0;
  double c_sqrt = 3.0;
};

inline constexpr double kDefaultMergeBufferBytes = 8192;
inline constexpr double kDefaultOnePassThresholdBytes = 5e9;

// Thrown by run_merge_plan when the runs cannot be merged in one pass.
class NeedsMorePassesError : public ConfigError {
 public:
  NeedsMorePassesError(const std::string& what, double required_memory_bytes)
      : ConfigError(what), required_memory_bytes_(required_memory_bytes) {}

  // two_pass_memory for the file and buffer of the rejected plan.
  double required_memory_bytes() const noexcept { return required_memory_bytes_; }

 private:
  double required_memory_bytes_;
};

struct SortPlan {
  int passes = 1;
  double memory_required_bytes = 0;
  std::uint64_t run_count = 0;
  std::uint64_t fan_in = 0;
};

double two_pass_memory(double file_bytes, double buffer_bytes, SortConstants constants = {});

// Largest file a two-pass sort handles in `memory_bytes`. Throws ConfigError
// ("insufficient memory for any two-pass sort") when memory does not exceed
// c_buf * buffer.
double max_two_pass_file(double memory_bytes, double buffer_bytes, SortConstants constants = {});

// Runs of `memory_bytes` each, merged with `buffer_bytes` per input run.
// Throws NeedsMorePassesError when run_count exceeds fan_in.
SortPlan run_merge_plan(double file_bytes, double memory_bytes, double buffer_bytes);

int choose_pass_count(double file_bytes, double one_pass_threshold_bytes = kDefaultOnePassThresholdBytes);

}  // namespace fivemin
