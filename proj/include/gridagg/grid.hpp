// SPDX-License-Identifier: Apache-2.0
#ifndef GRIDAGG_GRID_HPP_
#define GRIDAGG_GRID_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridagg/random.hpp"

namespace gridagg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class GeneratorKind { thermal, wind, backup };

inline const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::thermal: return "thermal";
    case GeneratorKind::wind: return "wind";
    case GeneratorKind::backup: return "backup";
  }
  return "thermal";
}

inline std::optional<GeneratorKind> generator_kind_from_string(const std::string& s) {
  if (s == "thermal") return GeneratorKind::thermal;
  if (s == "wind") return GeneratorKind::wind;
  if (s == "backup") return GeneratorKind::backup;
  return std::nullopt;
}

/// A bus with its fixed demand in MW. Ids are dense 0..N-1.
struct Bus {
  int id = 0;
  double demand = 0.0;

  friend bool operator==(const Bus&, const Bus&) = default;
};

/// A transmission line. Susceptance is per-unit, limit in MW.
/// Orientation: positive flow runs from `from_bus` to `to_bus`.
struct Line {
  int id = 0;
  int from_bus = 0;
  int to_bus = 0;
  double susceptance = 0.0;
  double limit = 0.0;

  friend bool operator==(const Line&, const Line&) = default;
};

/// A dispatchable unit at a bus. Minimum production is always zero.
struct Generator {
  int id = 0;
  int bus = 0;
  double cost = 0.0;   // $/MWh
  double p_max = 0.0;  // MW
  GeneratorKind kind = GeneratorKind::thermal;

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Full network description. Immutable by convention: transforms return
/// new values, nothing mutates a Grid in place after construction.
struct Grid {
  std::string name;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  int slack_bus = 0;

  int n_buses() const { return static_cast<int>(buses.size()); }
  int n_lines() const { return static_cast<int>(lines.size()); }
  int n_generators() const { return static_cast<int>(generators.size()); }

  Vector demand_vector() const {
    Vector d(n_buses());
    for (int i = 0; i < n_buses(); ++i) d[i] = buses[i].demand;
    return d;
  }

  double total_demand() const {
    double s = 0.0;
    for (const Bus& b : buses) s += b.demand;
    return s;
  }

  /// Generator-to-node mapping: entry (n, g) is 1 iff generator g sits at bus n.
  Matrix generator_map() const {
    Matrix gamma = Matrix::Zero(n_buses(), n_generators());
    for (const Generator& g : generators) gamma(g.bus, g.id) = 1.0;
    return gamma;
  }

  friend bool operator==(const Grid&, const Grid&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks index integrity, positivity of susceptances and limits, and
/// connectivity (breadth-first reachability from the slack bus). Reports
/// all violations found; callers decide what to do with them.
inline ValidationReport validate(const Grid& grid) {
  ValidationReport report;
  auto flag = [&report](std::string msg) { report.violations.push_back(std::move(msg)); };

  const int n = grid.n_buses();
  if (n == 0) {
    flag("grid has no buses");
    return report;
  }
  for (int i = 0; i < n; ++i) {
    if (grid.buses[i].id != i) flag("bus ids not dense at index " + std::to_string(i));
    if (grid.buses[i].demand < 0.0) flag("negative demand at bus " + std::to_string(i));
  }
  if (grid.slack_bus < 0 || grid.slack_bus >= n)
    flag("slack bus " + std::to_string(grid.slack_bus) + " out of range");

  for (int l = 0; l < grid.n_lines(); ++l) {
    const Line& line = grid.lines[l];
    if (line.id != l) flag("line ids not dense at index " + std::to_string(l));
    if (line.from_bus < 0 || line.from_bus >= n || line.to_bus < 0 || line.to_bus >= n)
      flag("line " + std::to_string(l) + " references a missing bus");
    else if (line.from_bus == line.to_bus)
      flag("self-loop at line " + std::to_string(l));
    if (!(line.susceptance > 0.0)) flag("nonpositive susceptance at line " + std::to_string(l));
    if (!(line.limit > 0.0)) flag("nonpositive limit at line " + std::to_string(l));
  }

  for (int g = 0; g < grid.n_generators(); ++g) {
    const Generator& gen = grid.generators[g];
    if (gen.id != g) flag("generator ids not dense at index " + std::to_string(g));
    if (gen.bus < 0 || gen.bus >= n)
      flag("generator " + std::to_string(g) + " references a missing bus");
    if (gen.p_max < 0.0) flag("negative capacity at generator " + std::to_string(g));
    if (!std::isfinite(gen.cost)) flag("non-finite cost at generator " + std::to_string(g));
  }

  // Connectivity: BFS over the undirected line graph from the slack bus.
  if (grid.slack_bus >= 0 && grid.slack_bus < n) {
    std::vector<std::vector<int>> adj(n);
    for (const Line& line : grid.lines) {
      if (line.from_bus >= 0 && line.from_bus < n && line.to_bus >= 0 && line.to_bus < n &&
          line.from_bus != line.to_bus) {
        adj[line.from_bus].push_back(line.to_bus);
        adj[line.to_bus].push_back(line.from_bus);
      }
    }
    std::vector<char> seen(n, 0);
    std::vector<int> queue{grid.slack_bus};
    seen[grid.slack_bus] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (int next : adj[queue[head]]) {
        if (!seen[next]) {
          seen[next] = 1;
          queue.push_back(next);
        }
      }
    }
    for (int i = 0; i < n; ++i)
      if (!seen[i]) flag("disconnected: bus " + std::to_string(i) + " unreachable from slack");
  }

  return report;
}

/// Line-node incidence matrix: row l holds +1 at from_bus and -1 at to_bus.
inline Matrix incidence_matrix(const Grid& grid) {
  Matrix k = Matrix::Zero(grid.n_lines(), grid.n_buses());
  for (const Line& line : grid.lines) {
    k(line.id, line.from_bus) = 1.0;
    k(line.id, line.to_bus) = -1.0;
  }
  return k;
}

/// Slack-adjusted incidence: the incidence matrix with the slack column dropped.
inline Matrix incidence_matrix_slack_adjusted(const Grid& grid) {
  const Matrix k = incidence_matrix(grid);
  Matrix ksba(k.rows(), k.cols() - 1);
  ksba << k.leftCols(grid.slack_bus), k.rightCols(k.cols() - grid.slack_bus - 1);
  return ksba;
}

/// Scenario transform: demand/wind scaling, deterministic thermal-cost
/// perturbation, optional wind additions and backup generators.
struct TransformSpec {
  double demand_scale = 1.0;
  double wind_scale = 1.0;
  /// Thermal costs receive distinct additive offsets in (0, magnitude].
  double cost_perturb_magnitude = 0.0;
  /// When set, one backup generator is appended at every bus. A value of 0
  /// selects the default cost of 10x the maximum thermal cost.
  std::optional<double> backup_cost;
  /// Extra wind generators, as (bus, capacity) pairs.
  std::vector<std::pair<int, double>> wind_additions;
};

/// Returns a new grid with the transform applied. Thermal-cost offsets are
/// distinct multiples of magnitude/G assigned by a seeded shuffle, so the
/// perturbed costs are pairwise distinct whenever the shuffle admits it;
/// colliding shuffles are re-drawn deterministically.
inline Grid transform(const Grid& grid, const TransformSpec& spec, std::uint64_t seed) {
  if (spec.demand_scale < 0.0 || spec.wind_scale < 0.0)
    throw std::invalid_argument("transform: negative scale");
  if (spec.cost_perturb_magnitude < 0.0)
    throw std::invalid_argument("transform: negative perturbation magnitude");
  if (spec.backup_cost && *spec.backup_cost < 0.0)
    throw std::invalid_argument("transform: negative backup cost");

  Grid out = grid;
  for (Bus& b : out.buses) b.demand *= spec.demand_scale;
  for (Generator& g : out.generators)
    if (g.kind == GeneratorKind::wind) g.p_max *= spec.wind_scale;

  if (spec.cost_perturb_magnitude > 0.0) {
    std::vector<int> thermal;
    for (const Generator& g : out.generators)
      if (g.kind == GeneratorKind::thermal) thermal.push_back(g.id);
    const int count = static_cast<int>(thermal.size());
    if (count > 0) {
      const double step = spec.cost_perturb_magnitude / static_cast<double>(count);
      std::vector<int> multiples(count);
      std::iota(multiples.begin(), multiples.end(), 1);
      SplitMix64 rng(seed);
      for (int attempt = 0; attempt < 64; ++attempt) {
        shuffle(multiples, rng);
        std::vector<double> costs;
        costs.reserve(count);
        for (int i = 0; i < count; ++i)
          costs.push_back(grid.generators[thermal[i]].cost + multiples[i] * step);
        std::vector<double> sorted = costs;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
          for (int i = 0; i < count; ++i) out.generators[thermal[i]].cost = costs[i];
          break;
        }
      }
    }
  }

  for (const auto& [bus, capacity] : spec.wind_additions) {
    if (bus < 0 || bus >= out.n_buses())
      throw std::invalid_argument("transform: wind addition at missing bus " + std::to_string(bus));
    if (capacity < 0.0) throw std::invalid_argument("transform: negative wind capacity");
    out.generators.push_back(
        {out.n_generators(), bus, 0.0, capacity, GeneratorKind::wind});
  }

  if (spec.backup_cost) {
    double cost = *spec.backup_cost;
    if (cost == 0.0) {
      double max_thermal = 0.0;
      for (const Generator& g : out.generators)
        if (g.kind == GeneratorKind::thermal) max_thermal = std::max(max_thermal, g.cost);
      cost = 10.0 * max_thermal;
    }
    const double capacity = out.total_demand();
    for (int b = 0; b < out.n_buses(); ++b)
      out.generators.push_back({out.n_generators(), b, cost, capacity, GeneratorKind::backup});
  }

  return out;
}

}  // namespace gridagg

#endif  // GRIDAGG_GRID_HPP_
