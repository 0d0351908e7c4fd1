#include "fivemin/index_optimizer.hpp"

#include <cmath>
#include <string>

#include "fivemin/error.hpp"

namespace fivemin {

void validate(const IndexParams& params) {
  if (!(params.entry_bytes > 0)) throw ConfigError("entry_bytes must be > 0");
  if (!(params.fill_factor > 0 && params.fill_factor <= 1)) throw ConfigError("fill_factor must be in (0, 1]");
  if (params.n_items && !(*params.n_items >= 1)) throw ConfigError("n_items must be >= 1");
}

void validate(const PageCostModel& model) {
  if (!(model.latency_s >= 0)) throw ConfigError("latency_s must be >= 0");
  if (!(model.bandwidth_bps > 0)) throw ConfigError("bandwidth_bps must be > 0");
}

double entries_per_page(double page_bytes, const IndexParams& params) {
  validate(params);
  if (!(page_bytes > 0)) throw ConfigError("page_bytes must be > 0");
  return params.fill_factor * page_bytes / params.entry_bytes;
}

double page_utility(double entries) {
  if (!(entries >= 1)) {
    throw DomainError("page utility needs at least one entry per page, got " + std::to_string(entries));
  }
  return std::log2(entries);
}

double index_height(double n_items, double entries) {
  if (!(n_items >= 1)) throw ConfigError("n_items must be >= 1");
  if (!(entries > 1)) throw DomainError("degenerate fan-out: entries per page must exceed 1");
  return std::log2(n_items) / std::log2(entries);
}

double access_cost(double page_bytes, const PageCostModel& model) {
  validate(model);
  if (!(page_bytes > 0)) throw ConfigError("page_bytes must be > 0");
  return model.latency_s + page_bytes / model.bandwidth_bps;
}

PageEvaluation evaluate_page(double page_bytes, const IndexParams& params, const PageCostModel& model) {
  PageEvaluation e;
  e.page_bytes = page_bytes;
  e.entries_per_page = entries_per_page(page_bytes, params);
  e.utility = page_utility(e.entries_per_page);
  e.access_cost_s = access_cost(page_bytes, model);
  e.benefit_cost = e.utility / (e.access_cost_s * 1e3);
  return e;
}

double benefit_cost(double page_bytes, const IndexParams& params, const PageCostModel& model) {
  return evaluate_page(page_bytes, params, model).benefit_cost;
}

PageEvaluation optimal_page_size(std::span<const double> candidates, const IndexParams& params,
                                 const PageCostModel& model) {
  if (candidates.empty()) throw ConfigError("no candidate page sizes");
  std::optional<PageEvaluation> best;
  for (double size : candidates) {
    const auto e = evaluate_page(size, params, model);
    if (!best || e.benefit_cost > best->benefit_cost ||
        (e.benefit_cost == best->benefit_cost && e.page_bytes < best->page_bytes)) {
      best = e;
    }
  }
  return *best;
}

EvaluationGrid evaluate_grid(std::span<const double> page_sizes, std::span<const GridRow> rows) {
  EvaluationGrid grid;
  grid.reserve(rows.size());
  for (const auto& row : rows) {
    auto& cells = grid.emplace_back();
    cells.reserve(page_sizes.size());
    for (double size : page_sizes) cells.push_back(evaluate_page(size, row.params, row.model));
  }
  return grid;
}

std::vector<GridRow> entry_size_rows(std::span<const double> entry_sizes, double fill_factor,
                                     const PageCostModel& model) {
  std::vector<GridRow> rows;
  for (double entry : entry_sizes) rows.push_back({IndexParams{entry, fill_factor, std::nullopt}, model});
  return rows;
}

std::vector<GridRow> bandwidth_rows(std::span<const double> bandwidths_bps, const IndexParams& params,
                                    double latency_s) {
  std::vector<GridRow> rows;
  for (double bw : bandwidths_bps) rows.push_back({params, PageCostModel{latency_s, bw}});
  return rows;
}

}  // namespace fivemin
