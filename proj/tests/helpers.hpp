// SPDX-License-Identifier: Apache-2.0
//
// Shared grid builders for the test suites.
#ifndef GRIDAGG_TESTS_HELPERS_HPP_
#define GRIDAGG_TESTS_HELPERS_HPP_

#include <cstdint>
#include <vector>

#include "gridagg/grid.hpp"
#include "gridagg/random.hpp"

namespace gridagg::testing {

/// Two buses, one line, cheap generator at the slack and an expensive one
/// at the load bus. With limit >= 50 the cheap unit serves everything; with
/// limit 30 the line congests and the hand-derived duals apply.
inline Grid two_bus_grid(double limit = 100.0) {
  Grid g;
  g.name = "two-bus";
  g.buses = {{0, 0.0}, {1, 50.0}};
  g.lines = {{0, 0, 1, 1.0, limit}};
  g.generators = {{0, 0, 10.0, 100.0, GeneratorKind::thermal},
                  {1, 1, 50.0, 100.0, GeneratorKind::thermal}};
  g.slack_bus = 0;
  return g;
}

/// Triangle with equal susceptances, slack at bus 0.
inline Grid three_bus_ring(double limit = 1e3) {
  Grid g;
  g.name = "three-bus-ring";
  g.buses = {{0, 0.0}, {1, 0.0}, {2, 0.0}};
  g.lines = {{0, 0, 1, 1.0, limit}, {1, 1, 2, 1.0, limit}, {2, 0, 2, 1.0, limit}};
  g.generators = {{0, 0, 1.0, 100.0, GeneratorKind::thermal}};
  g.slack_bus = 0;
  return g;
}

/// Path 0-1-...-(n-1) with unit susceptances.
inline Grid path_grid(int n, double limit = 1e3) {
  Grid g;
  g.name = "path";
  for (int i = 0; i < n; ++i) g.buses.push_back({i, 0.0});
  for (int i = 0; i + 1 < n; ++i) g.lines.push_back({i, i, i + 1, 1.0, limit});
  g.generators = {{0, 0, 1.0, 100.0, GeneratorKind::thermal}};
  g.slack_bus = 0;
  return g;
}

/// Random connected grid: a random spanning tree plus extra edges, random
/// susceptances and limits, a handful of generators, and balanced-ish
/// demand. Deterministic in the seed.
inline Grid random_connected_grid(std::uint64_t seed, int max_buses = 30) {
  SplitMix64 rng(seed);
  Grid g;
  g.name = "random";
  const int n = 2 + static_cast<int>(rng.next_below(max_buses - 1));
  for (int i = 0; i < n; ++i)
    g.buses.push_back({i, 10.0 + 90.0 * rng.next_double()});

  for (int i = 1; i < n; ++i) {
    const int parent = static_cast<int>(rng.next_below(i));
    g.lines.push_back({static_cast<int>(g.lines.size()), parent, i,
                       0.5 + 9.5 * rng.next_double(), 50.0 + 450.0 * rng.next_double()});
  }
  const int extra = static_cast<int>(rng.next_below(n));
  for (int e = 0; e < extra; ++e) {
    const int a = static_cast<int>(rng.next_below(n));
    const int b = static_cast<int>(rng.next_below(n));
    if (a == b) continue;
    g.lines.push_back({static_cast<int>(g.lines.size()), a, b,
                       0.5 + 9.5 * rng.next_double(), 50.0 + 450.0 * rng.next_double()});
  }

  const int n_gens = 1 + static_cast<int>(rng.next_below(4));
  for (int k = 0; k < n_gens; ++k)
    g.generators.push_back({k, static_cast<int>(rng.next_below(n)),
                            5.0 + 45.0 * rng.next_double(), 200.0 + 800.0 * rng.next_double(),
                            GeneratorKind::thermal});
  g.slack_bus = static_cast<int>(rng.next_below(n));
  return g;
}

/// Balanced random injections for a grid (sum exactly compensated at the
/// last bus).
inline Vector random_balanced_injections(const Grid& g, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Vector inj(g.n_buses());
  for (int i = 0; i < g.n_buses(); ++i) inj[i] = 200.0 * rng.next_double() - 100.0;
  inj[g.n_buses() - 1] -= inj.sum();
  return inj;
}

/// Six buses in two triangles joined by one tight bridge; all costs and
/// demands are dyadic and the marginal unit at the slack costs zero, so
/// LMP and NCP features agree bitwise. Exactly one line congests: the
/// bridge (line id 3).
inline Grid six_bus_single_congestion() {
  Grid g;
  g.name = "six-bus-bridge";
  g.buses = {{0, 0.0}, {1, 16.0}, {2, 16.0}, {3, 64.0}, {4, 32.0}, {5, 32.0}};
  g.lines = {
      {0, 0, 1, 1.0, 512.0},  // left triangle
      {1, 1, 2, 1.0, 512.0},
      {2, 0, 2, 1.0, 512.0},
      {3, 2, 3, 1.0, 16.0},   // bridge, congests
      {4, 3, 4, 1.0, 512.0},  // right triangle
      {5, 4, 5, 1.0, 512.0},
      {6, 3, 5, 1.0, 512.0},
  };
  g.generators = {{0, 0, 0.0, 512.0, GeneratorKind::thermal},
                  {1, 4, 32.0, 512.0, GeneratorKind::thermal}};
  g.slack_bus = 0;
  return g;
}

}  // namespace gridagg::testing

#endif  // GRIDAGG_TESTS_HELPERS_HPP_
