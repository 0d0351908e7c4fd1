#pragma once

#include <optional>
#include <span>
#include <vector>

// B-tree index page sizing.
//
// A page holding E entries resolves log2(E) levels of a binary search per
// fetch (its utility) and costs latency + size/bandwidth to read. The best
// page size maximizes utility per unit of access cost.
//
// Page sizes are bytes (a "KB" page is K*1024 bytes); bandwidth is decimal
// bytes per second (10 MB/s = 1e7).

namespace fivemin {

struct IndexParams {
  double entry_bytes = 20;
  double fill_factor = 0.7;
  std::optional<double> n_items;
};

struct PageCostModel {
  double latency_s = 0.010;
  double bandwidth_bps = 1e7;
};

struct PageEvaluation {
  double page_bytes = 0;
  double entries_per_page = 0;
  double utility = 0;
  double access_cost_s = 0;
  // utility per millisecond of access cost
  double benefit_cost = 0;
};

void validate(const IndexParams& params);
void validate(const PageCostModel& model);

// Real-valued; no flooring.
double entries_per_page(double page_bytes, const IndexParams& params);

// log2(entries). Throws DomainError for entries < 1.
double page_utility(double entries);

// Tree height in pages, log2(n_items)/log2(entries). Throws DomainError when
// entries <= 1.
double index_height(double n_items, double entries);

double access_cost(double page_bytes, const PageCostModel& model);

double benefit_cost(double page_bytes, const IndexParams& params, const PageCostModel& model);

PageEvaluation evaluate_page(double page_bytes, const IndexParams& params, const PageCostModel& model);

// Maximizes benefit_cost; ties go to the smaller page.
PageEvaluation optimal_page_size(std::span<const double> candidates, const IndexParams& params,
                                 const PageCostModel& model);

struct GridRow {
  IndexParams params;
  PageCostModel model;
};

using EvaluationGrid = std::vector<std::vector<PageEvaluation>>;

// Row-major: one row per GridRow, one column per page size.
EvaluationGrid evaluate_grid(std::span<const double> page_sizes, std::span<const GridRow> rows);

std::vector<GridRow> entry_size_rows(std::span<const double> entry_sizes, double fill_factor,
                                     const PageCostModel& model);
std::vector<GridRow> bandwidth_rows(std::span<const double> bandwidths_bps, const IndexParams& params,
                                    double latency_s);

}  // namespace fivemin
