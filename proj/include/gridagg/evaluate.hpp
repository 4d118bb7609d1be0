// SPDX-License-Identifier: Apache-2.0
#ifndef GRIDAGG_EVALUATE_HPP_
#define GRIDAGG_EVALUATE_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gridagg/aggregate.hpp"
#include "gridagg/dcopf.hpp"
#include "gridagg/grid.hpp"
#include "gridagg/partition.hpp"
#include "gridagg/ptdf.hpp"

namespace gridagg {

/// Flows the aggregated dispatch would induce on the full grid. There is no
/// generator reduction, so the aggregated dispatch is a full-grid dispatch.
inline Vector map_flows(const PtdfMatrix& full_ptdf, const Grid& grid,
                        const Vector& agg_dispatch) {
  return flows(full_ptdf, grid, agg_dispatch);
}

/// Relative objective-value error (signed).
inline double rove(double z_full, double z_agg) {
  if (!(z_full > 0.0)) throw std::invalid_argument("rove: z_full must be positive");
  return (z_agg - z_full) / z_full;
}

/// Maximum relative line-limit violation of a flow vector.
inline double mrllv(const Vector& flow, const Vector& limits) {
  if (flow.size() != limits.size()) throw std::invalid_argument("mrllv: size mismatch");
  double worst = 0.0;
  for (int l = 0; l < flow.size(); ++l) {
    if (!(limits[l] > 0.0)) throw std::invalid_argument("mrllv: limits must be positive");
    worst = std::max(worst, (std::abs(flow[l]) - limits[l]) / limits[l]);
  }
  return std::max(worst, 0.0);
}

enum class EvaluationStatus { ok, agg_infeasible };

struct EvaluationRecord {
  PartitionMethod method = PartitionMethod::lmp_kmeans;
  int n_clusters = 0;
  double z_full = 0.0;
  double z_agg = std::numeric_limits<double>::quiet_NaN();
  double rove = std::numeric_limits<double>::quiet_NaN();
  double mrllv = std::numeric_limits<double>::quiet_NaN();
  double gpt_seconds = 0.0;
  EvaluationStatus status = EvaluationStatus::ok;
  std::vector<int> violated_lines;  // full-grid lines with |f_hat| > limit
};

struct SweepOptions {
  std::uint64_t seed = 1;
  int jobs = 1;
  double rho_cap = 1e6;
  LpTolerances lp;
  /// Wall-clock repetitions per partitioning call; the median is reported.
  int timing_repetitions = 3;
};

namespace detail {

template <typename F>
double median_timed_seconds(int repetitions, F&& call) {
  std::vector<double> seconds;
  seconds.reserve(repetitions);
  for (int r = 0; r < repetitions; ++r) {
    const auto start = std::chrono::steady_clock::now();
    call();
    const auto stop = std::chrono::steady_clock::now();
    seconds.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::sort(seconds.begin(), seconds.end());
  return seconds[seconds.size() / 2];
}

}  // namespace detail

/// The full evaluation pipeline: one FM solve, then per (method, cluster
/// count): partition (timed as GPT), aggregate, AM solve, map the AM
/// dispatch onto the full grid, score. ANAC methods run one merge history
/// per metric and slice every cluster count out of it; the history cost is
/// the GPT attributed to each of its records. Output order is method-major,
/// cluster count descending, independent of `jobs`.
inline std::vector<EvaluationRecord> sweep(const Grid& grid,
                                           const std::vector<PartitionMethod>& methods,
                                           int n_from, int n_to, const SweepOptions& options = {}) {
  const int n = grid.n_buses();
  if (n_from < 1 || n_to < 1 || n_from > n || n_to > n)
    throw std::invalid_argument("sweep: cluster range out of [1, N]");

  // Canonical row order is cluster count descending, whichever way the
  // range was given.
  std::vector<int> counts;
  for (int c = std::max(n_from, n_to); c >= std::min(n_from, n_to); --c) counts.push_back(c);

  const int repetitions = std::max(1, options.timing_repetitions);

  const PtdfMatrix ptdf = build_ptdf(grid);
  const DcOpfSolution fm = solve_dcopf(grid, ptdf, options.lp);

  Vector limits(grid.n_lines());
  for (const Line& l : grid.lines) limits[l.id] = l.limit;

  struct Cell {
    PartitionResult partition;
    double gpt = 0.0;
  };
  std::vector<std::vector<Cell>> cells(methods.size());

  // Partitioning, serialized so the timing is not skewed by contention.
  const int min_count = *std::min_element(counts.begin(), counts.end());
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const PartitionMethod method = methods[mi];
    cells[mi].resize(counts.size());
    const bool is_anac =
        method == PartitionMethod::lmp_anac || method == PartitionMethod::ncp_anac;
    if (is_anac) {
      AnacHistory history;
      const double gpt = detail::median_timed_seconds(repetitions, [&] {
        const FeatureMatrix features = metric_of(method) == Metric::ncp
                                           ? ncp_features(fm, ptdf)
                                           : lmp_features(fm, ptdf);
        history = anac_history(grid, features, min_count);
      });
      for (std::size_t ci = 0; ci < counts.size(); ++ci) {
        PartitionResult pr;
        pr.n_clusters = counts[ci];
        pr.assignment = history.at(counts[ci]);
        pr.retained_lines = derive_line_map(grid, pr.assignment);
        pr.method = method;
        pr.seed = options.seed;
        cells[mi][ci] = {std::move(pr), gpt};
      }
    } else {
      for (std::size_t ci = 0; ci < counts.size(); ++ci) {
        PartitionResult pr;
        const double gpt = detail::median_timed_seconds(repetitions, [&] {
          pr = partition_with_method(grid, ptdf, fm, method, counts[ci], options.seed,
                                     options.rho_cap);
        });
        cells[mi][ci] = {std::move(pr), gpt};
      }
    }
  }

  // Aggregation and AM solves; independent across cells.
  std::vector<EvaluationRecord> records(methods.size() * counts.size());
  auto run_cell = [&](std::size_t flat) {
    const std::size_t mi = flat / counts.size();
    const std::size_t ci = flat % counts.size();
    const Cell& cell = cells[mi][ci];
    EvaluationRecord rec;
    rec.method = methods[mi];
    rec.n_clusters = counts[ci];
    rec.z_full = fm.z;
    rec.gpt_seconds = cell.gpt;
    try {
      const AggregatedModel am = build_aggregated(grid, ptdf, cell.partition);
      const DcOpfSolution ams = solve_aggregated(am, grid.generators, options.lp);
      const Vector mapped = map_flows(ptdf, grid, ams.p);
      rec.z_agg = ams.z;
      rec.rove = rove(fm.z, ams.z);
      rec.mrllv = mrllv(mapped, limits);
      for (int l = 0; l < grid.n_lines(); ++l)
        if (std::abs(mapped[l]) > limits[l]) rec.violated_lines.push_back(l);
      rec.status = EvaluationStatus::ok;
    } catch (const SolveFailure&) {
      rec.status = EvaluationStatus::agg_infeasible;
    }
    records[flat] = std::move(rec);
  };

  const std::size_t total = records.size();
  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    for (std::size_t flat = 0; flat < total; ++flat) run_cell(flat);
  } else {
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (std::size_t flat = next.fetch_add(1); flat < total; flat = next.fetch_add(1))
          run_cell(flat);
      });
    for (std::thread& t : workers) t.join();
  }
  return records;
}

}  // namespace gridagg

#endif  // GRIDAGG_EVALUATE_HPP_
