// SPDX-License-Identifier: Apache-2.0
#ifndef GRIDAGG_AGGREGATE_HPP_
#define GRIDAGG_AGGREGATE_HPP_

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gridagg/dcopf.hpp"
#include "gridagg/grid.hpp"
#include "gridagg/partition.hpp"
#include "gridagg/ptdf.hpp"

namespace gridagg {

/// Reduced network built from a partition: cluster-averaged PTDF rows for
/// the retained lines, aggregated demand, and generators reassigned (never
/// merged) to their bus's cluster.
struct AggregatedModel {
  int n_clusters = 0;
  Matrix reduced_ptdf;                     // retained-rows x clusters
  Vector demand;                           // per cluster
  std::vector<int> generator_cluster;      // per original generator
  Vector line_limits;                      // per retained row
  std::vector<std::vector<int>> row_lines; // full-grid line ids behind each row
  PartitionResult partition;               // provenance
};

struct AggregateOptions {
  /// Merge retained lines that connect the same cluster pair into one row
  /// with summed limits. Off by default: each inter-cluster line keeps its
  /// own row and limit.
  bool merge_parallel = false;
};

/// Reduced PTDF per M_l PTDF M_nc' (M_nc M_nc')^-1; the inverted factor is
/// diagonal with the cluster sizes, so the column aggregation is an exact
/// elementwise average.
inline AggregatedModel build_aggregated(const Grid& grid, const PtdfMatrix& ptdf,
                                        const PartitionResult& partition,
                                        const AggregateOptions& options = {}) {
  const int n = grid.n_buses();
  const int k = partition.n_clusters;
  if (static_cast<int>(partition.assignment.size()) != n)
    throw std::invalid_argument("build_aggregated: partition does not match grid");

  Vector sizes = Vector::Zero(k);
  for (int b = 0; b < n; ++b) sizes[partition.assignment[b]] += 1.0;

  // PTDF M_nc' diag(1/sizes): cluster-averaged columns, all lines.
  Matrix averaged = Matrix::Zero(grid.n_lines(), k);
  for (int b = 0; b < n; ++b) averaged.col(partition.assignment[b]) += ptdf.values.col(b);
  for (int c = 0; c < k; ++c) averaged.col(c) /= sizes[c];

  AggregatedModel am;
  am.n_clusters = k;
  am.partition = partition;

  am.demand = Vector::Zero(k);
  for (const Bus& b : grid.buses) am.demand[partition.assignment[b.id]] += b.demand;

  am.generator_cluster.resize(grid.n_generators());
  for (const Generator& g : grid.generators)
    am.generator_cluster[g.id] = partition.assignment[g.bus];

  if (!options.merge_parallel) {
    const auto& retained = partition.retained_lines;
    am.reduced_ptdf.resize(static_cast<Eigen::Index>(retained.size()), k);
    am.line_limits.resize(static_cast<Eigen::Index>(retained.size()));
    am.row_lines.reserve(retained.size());
    for (std::size_t r = 0; r < retained.size(); ++r) {
      const int line = retained[r];
      am.reduced_ptdf.row(r) = averaged.row(line);
      am.line_limits[r] = grid.lines[line].limit;
      am.row_lines.push_back({line});
    }
  } else {
    // Group retained lines by unordered cluster pair, in order of first
    // appearance; a merged row is the sum of its member rows and limits.
    std::map<std::pair<int, int>, int> group_row;
    std::vector<std::vector<int>> groups;
    for (int line : partition.retained_lines) {
      const int a = partition.assignment[grid.lines[line].from_bus];
      const int b = partition.assignment[grid.lines[line].to_bus];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = group_row.try_emplace(key, static_cast<int>(groups.size()));
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(line);
    }
    am.reduced_ptdf = Matrix::Zero(static_cast<Eigen::Index>(groups.size()), k);
    am.line_limits = Vector::Zero(static_cast<Eigen::Index>(groups.size()));
    for (std::size_t r = 0; r < groups.size(); ++r) {
      for (int line : groups[r]) {
        am.reduced_ptdf.row(r) += averaged.row(line);
        am.line_limits[r] += grid.lines[line].limit;
      }
    }
    am.row_lines = std::move(groups);
  }
  return am;
}

/// Solves the same DC-OPF on the reduced network and returns the aggregated
/// objective and dispatch (plus reduced-line flows and duals). Throws
/// SolveFailure when the aggregation strands a load pocket.
inline DcOpfSolution solve_aggregated(const AggregatedModel& am,
                                      const std::vector<Generator>& generators,
                                      const LpTolerances& tol = {},
                                      const LpEngine& engine = LpEngine()) {
  const int n_gens = static_cast<int>(generators.size());
  const int n_rows = static_cast<int>(am.reduced_ptdf.rows());

  Vector cost(n_gens), p_max(n_gens);
  for (const Generator& g : generators) {
    cost[g.id] = g.cost;
    p_max[g.id] = g.p_max;
  }
  Matrix ptdf_gamma(n_rows, n_gens);
  for (int g = 0; g < n_gens; ++g) ptdf_gamma.col(g) = am.reduced_ptdf.col(am.generator_cluster[g]);
  const Vector base_flow = am.reduced_ptdf * (-am.demand);

  const LpProblem lp =
      assemble_dcopf_lp(cost, p_max, ptdf_gamma, base_flow, am.line_limits, am.demand.sum());
  const LpSolution lps = engine ? engine(lp, tol) : solve_lp(lp, tol);
  if (lps.status != LpStatus::optimal)
    throw SolveFailure(lps.status, std::string("solve_aggregated: ") + to_string(lps.status));

  DcOpfSolution out;
  out.p = lps.x;
  out.z = lps.objective;
  Vector injection = -am.demand;
  for (int g = 0; g < n_gens; ++g) injection[am.generator_cluster[g]] += out.p[g];
  out.f = am.reduced_ptdf * injection;
  out.eta_lower = lps.eta_lower;
  out.eta_upper = lps.eta_upper;
  const auto duals = detail::congestion_duals(lps, n_rows);
  out.lambda_slack = duals.lambda_slack;
  out.mu = duals.mu;
  out.congested.assign(n_rows, false);
  for (int l = 0; l < n_rows; ++l) {
    out.congested[l] = std::abs(out.f[l]) >= am.line_limits[l] * (1.0 - 1e-6);
    if (!out.congested[l] || std::abs(out.mu[l]) < 1e-8) out.mu[l] = 0.0;
  }
  return out;
}

}  // namespace gridagg

#endif  // GRIDAGG_AGGREGATE_HPP_
