#include <algorithm>
#include <cmath>

#include "fivemin/buffer_sim.hpp"
#include "fivemin/error.hpp"

namespace fivemin {

namespace {

// Cumulative Zipf(s) probabilities over ranks 1..n; the last entry is 1.
std::vector<double> zipf_cdf(std::uint64_t n_pages, double s) {
  std::vector<double> cdf(n_pages);
  double total = 0;
  for (std::uint64_t k = 0; k < n_pages; ++k) {
    total += s == 0 ? 1.0 : std::pow(static_cast<double>(k + 1), -s);
    cdf[k] = total;
  }
  for (auto& c : cdf) c /= total;
  cdf.back() = 1.0;
  return cdf;
}

}  // namespace

std::vector<TraceEvent> generate_trace(const TraceSpec& spec) {
  if (spec.n_pages == 0) throw ConfigError("n_pages must be > 0");
  if (!(spec.zipf_s >= 0)) throw ConfigError("zipf_s must be >= 0");
  if (!(spec.write_fraction >= 0 && spec.write_fraction <= 1)) throw ConfigError("write_fraction must be in [0, 1]");
  if (!(spec.ops_per_second > 0)) throw ConfigError("ops_per_second must be > 0");

  std::vector<TraceEvent> trace;
  if (spec.n_ops == 0) return trace;
  trace.reserve(spec.n_ops);

  const auto cdf = zipf_cdf(spec.n_pages, spec.zipf_s);
  Lcg64 rng(spec.seed);
  for (std::uint64_t i = 0; i < spec.n_ops; ++i) {
    const double u = rng.uniform();
    const auto rank = static_cast<PageId>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const bool write = rng.uniform() < spec.write_fraction;
    trace.push_back({static_cast<double>(i) / spec.ops_per_second, std::min<PageId>(rank, spec.n_pages - 1),
                     write ? AccessOp::kWrite : AccessOp::kRead});
  }
  return trace;
}

}  // namespace fivemin
