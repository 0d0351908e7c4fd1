#include <cmath>
#include <sstream>

#include "fivemin/buffer_sim.hpp"
#include "fivemin/error.hpp"
#include "fivemin/trace_io.hpp"
#include "gtest/gtest.h"

namespace fivemin {
namespace {

TEST(TraceGenTest, LcgMatchesTheRecurrence) {
  Lcg64 rng(1);
  EXPECT_EQ(rng.next(), 1ULL * 6364136223846793005ULL + 1442695040888963407ULL);
  Lcg64 zero(0);
  EXPECT_EQ(zero.next(), 1442695040888963407ULL);
  EXPECT_DOUBLE_EQ(Lcg64(0).uniform(), static_cast<double>(1442695040888963407ULL >> 11) / 9007199254740992.0);
}

TEST(TraceGenTest, EmptyTrace) {
  EXPECT_TRUE(generate_trace({123, 0, 10, 1.0, 0.5, 1}).empty());
}

TEST(TraceGenTest, ZeroPagesIsAConfigError) {
  EXPECT_THROW(generate_trace({1, 10, 0, 0, 0, 1}), ConfigError);
  EXPECT_THROW(generate_trace({1, 10, 5, -1, 0, 1}), ConfigError);
  EXPECT_THROW(generate_trace({1, 10, 5, 0, 2, 1}), ConfigError);
  EXPECT_THROW(generate_trace({1, 10, 5, 0, 0, 0}), ConfigError);
}

TEST(TraceGenTest, Deterministic) {
  const TraceSpec spec{77, 5000, 300, 0.8, 0.25, 50};
  EXPECT_EQ(generate_trace(spec), generate_trace(spec));
  auto other = spec;
  other.seed = 78;
  EXPECT_NE(generate_trace(spec), generate_trace(other));
}

TEST(TraceGenTest, TimesAndIds) {
  const auto trace = generate_trace({5, 1000, 17, 1.2, 0.5, 4});
  ASSERT_EQ(trace.size(), 1000u);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    EXPECT_DOUBLE_EQ(trace[i].time_s, static_cast<double>(i) / 4);
    EXPECT_LT(trace[i].page_id, 17u);
  }
}

// Replays the generator with an independent Zipf table and checks each event.
TEST(TraceGenTest, MatchesIndependentReplay) {
  const TraceSpec spec{2024, 3000, 40, 1.1, 0.3, 1};
  std::vector<double> weight(spec.n_pages);
  double total = 0;
  for (std::uint64_t k = 0; k < spec.n_pages; ++k) total += weight[k] = std::pow(k + 1.0, -spec.zipf_s);

  Lcg64 rng(spec.seed);
  const auto trace = generate_trace(spec);
  for (const auto& e : trace) {
    const double u = rng.uniform() * total;
    std::uint64_t page = 0;
    double acc = weight[0];
    while (acc <= u && page + 1 < spec.n_pages) acc += weight[++page];
    EXPECT_EQ(e.page_id, page);
    EXPECT_EQ(e.op == AccessOp::kWrite, rng.uniform() < spec.write_fraction);
  }
}

TEST(TraceGenTest, UniformWithinThreeSigma) {
  const std::uint64_t n_ops = 200000, n_pages = 20;
  const auto trace = generate_trace({99, n_ops, n_pages, 0, 0.25, 1});
  std::vector<std::uint64_t> counts(n_pages);
  std::uint64_t writes = 0;
  for (const auto& e : trace) {
    ++counts[e.page_id];
    writes += e.op == AccessOp::kWrite;
  }
  const double p = 1.0 / n_pages;
  const double mean = n_ops * p, sigma = std::sqrt(n_ops * p * (1 - p));
  for (auto c : counts) EXPECT_LT(std::abs(static_cast<double>(c) - mean), 3 * sigma);
  const double w_sigma = std::sqrt(n_ops * 0.25 * 0.75);
  EXPECT_LT(std::abs(static_cast<double>(writes) - n_ops * 0.25), 3 * w_sigma);
}

TEST(TraceGenTest, ZipfFavoursLowRanks) {
  const auto trace = generate_trace({3, 50000, 100, 1.0, 0, 1});
  std::vector<std::uint64_t> counts(100);
  for (const auto& e : trace) ++counts[e.page_id];
  EXPECT_GT(counts[0], counts[1]);
  EXPECT_GT(counts[1], counts[10]);
  // Page 0 carries 1/H(100) of the mass.
  double harmonic = 0;
  for (int k = 1; k <= 100; ++k) harmonic += 1.0 / k;
  EXPECT_NEAR(counts[0] / 50000.0, 1 / harmonic, 0.01);
}

TEST(TraceIoTest, ReadsCsvAndInternsPages) {
  std::istringstream in("time,page,op\n0,A,r\n1,B,w\n2.5,A,r\n");
  const auto trace = read_trace_csv(in);
  ASSERT_EQ(trace.events.size(), 3u);
  EXPECT_EQ(trace.page_names, (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(trace.events[0], (TraceEvent{0, 0, AccessOp::kRead}));
  EXPECT_EQ(trace.events[1], (TraceEvent{1, 1, AccessOp::kWrite}));
  EXPECT_EQ(trace.events[2], (TraceEvent{2.5, 0, AccessOp::kRead}));
}

TEST(TraceIoTest, HeaderOnlyIsEmpty) {
  std::istringstream in("time,page,op\n");
  EXPECT_TRUE(read_trace_csv(in).events.empty());
}

TEST(TraceIoTest, RoundTrip) {
  const auto events = generate_trace({8, 500, 50, 0.7, 0.4, 3});
  std::ostringstream out;
  write_trace_csv(out, events);
  EXPECT_EQ(out.str().substr(0, 13), "time,page,op\n");
  std::istringstream in(out.str());
  const auto back = read_trace_csv(in);
  ASSERT_EQ(back.events.size(), events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    EXPECT_EQ(back.events[i].time_s, events[i].time_s);
    EXPECT_EQ(back.page_names[back.events[i].page_id], std::to_string(events[i].page_id));
    EXPECT_EQ(back.events[i].op, events[i].op);
  }
}

std::size_t error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_trace_csv(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(TraceIoTest, ParseErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("0,A,r\n"), 1u);
  EXPECT_EQ(error_line("time,page,op\n0,A,r\n1,B\n"), 3u);
  EXPECT_EQ(error_line("time,page,op\nsoon,A,r\n"), 2u);
  EXPECT_EQ(error_line("time,page,op\n0,A,x\n"), 2u);
  EXPECT_EQ(error_line("time,page,op\n0,,r\n"), 2u);
  EXPECT_EQ(error_line("time,page,op\n5,A,r\n4,A,r\n"), 3u);
  EXPECT_EQ(error_line(""), 1u);
}

TEST(TraceIoTest, MissingFileIsAnInputError) {
  EXPECT_THROW(load_trace_csv("/nonexistent/trace.csv"), InputError);
}

TEST(TraceIoTest, ReportCsv) {
  SimReport r;
  r.logical_accesses = 3;
  r.physical_reads = 2;
  r.hit_ratio = 1.0 / 3;
  r.evictions = 1;
  std::ostringstream out;
  write_report_csv(out, r);
  EXPECT_EQ(out.str(), std::string(kReportCsvHeader) + "\n3,2,0.333333,1,0,0,0\n");
}

}  // namespace
}  // namespace fivemin
