#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fivemin/buffer_sim.hpp"

// CSV carriers for buffer_sim.
//
// Trace: header `time,page,op`; time in seconds, op `r` or `w`. Page tokens
// are opaque and interned to dense ids in order of first appearance.
// Report: header `logical,physical,hit_ratio,evictions,contention_flushes,
// checkpoint_flushes,fallbacks`.

namespace fivemin {

struct Trace {
  std::vector<TraceEvent> events;
  std::vector<std::string> page_names;  // indexed by PageId
};

inline constexpr const char* kTraceCsvHeader = "time,page,op";
inline constexpr const char* kReportCsvHeader =
    "logical,physical,hit_ratio,evictions,contention_flushes,checkpoint_flushes,fallbacks";

// Throws ParseError (with line number) for malformed rows and InputError when
// timestamps decrease.
Trace read_trace_csv(std::istream& in);
Trace load_trace_csv(const std::string& path);

// Page ids are written as decimal integers; times round-trip exactly.
void write_trace_csv(std::ostream& out, const std::vector<TraceEvent>& events);

void write_report_csv(std::ostream& out, const SimReport& report);

}  // namespace fivemin
