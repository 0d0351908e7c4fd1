#include "fivemin/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include <fmt/format.h>

#include "fivemin/error.hpp"

namespace fivemin {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Trace read_trace_csv(std::istream& in) {
  Trace trace;
  std::unordered_map<std::string, PageId> ids;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    if (!header_seen) {
      if (row != kTraceCsvHeader) throw ParseError(line_no, "expected header '" + std::string(kTraceCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    const auto c1 = row.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos) {
      throw ParseError(line_no, "expected 3 columns");
    }
    const auto time_text = trim(row.substr(0, c1));
    const auto page_text = trim(row.substr(c1 + 1, c2 - c1 - 1));
    const auto op_text = trim(row.substr(c2 + 1));

    double time = 0;
    auto [ptr, ec] = std::from_chars(time_text.data(), time_text.data() + time_text.size(), time);
    if (ec != std::errc() || ptr != time_text.data() + time_text.size() || !std::isfinite(time)) {
      throw ParseError(line_no, "bad time '" + std::string(time_text) + "'");
    }
    if (page_text.empty()) throw ParseError(line_no, "empty page");
    AccessOp op;
    if (op_text == "r") {
      op = AccessOp::kRead;
    } else if (op_text == "w") {
      op = AccessOp::kWrite;
    } else {
      throw ParseError(line_no, "op must be 'r' or 'w', got '" + std::string(op_text) + "'");
    }
    if (!trace.events.empty() && time < trace.events.back().time_s) {
      throw ParseError(line_no, "trace is not time-ordered");
    }

    auto [it, inserted] = ids.try_emplace(std::string(page_text), trace.page_names.size());
    if (inserted) trace.page_names.emplace_back(page_text);
    trace.events.push_back({time, it->second, op});
  }
  if (!header_seen) throw ParseError(line_no + 1, "missing header '" + std::string(kTraceCsvHeader) + "'");
  return trace;
}

Trace load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace file '" + path + "'");
  return read_trace_csv(in);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEvent>& events) {
  out << kTraceCsvHeader << '\n';
  fmt::memory_buffer buf;
  for (const auto& e : events) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{},{},{}\n", e.time_s, e.page_id, e.op == AccessOp::kWrite ? 'w' : 'r');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_report_csv(std::ostream& out, const SimReport& r) {
  out << kReportCsvHeader << '\n';
  out << fmt::format("{},{},{:.6g},{},{},{},{}\n", r.logical_accesses, r.physical_reads, r.hit_ratio, r.evictions,
                     r.contention_flushes, r.checkpoint_flushes, r.protected_eviction_fallbacks);
}

}  // namespace fivemin
