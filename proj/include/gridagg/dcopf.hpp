// SPDX-License-Identifier: Apache-2.0
#ifndef GRIDAGG_DCOPF_HPP_
#define GRIDAGG_DCOPF_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gridagg/grid.hpp"
#include "gridagg/lp.hpp"
#include "gridagg/ptdf.hpp"

namespace gridagg {

/// Thrown when an optimization does not reach an optimum.
class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(LpStatus status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  LpStatus status() const { return status_; }

 private:
  LpStatus status_;
};

/// Optimal dispatch with all duals. `mu` is the exported congestion dual:
/// the LP's Lagrangian convention yields LMP = lambda_slack - PTDF'(phi_up -
/// phi_lo), so mu := phi_lo - phi_up is exported and the price equations
/// read LMP = lambda_slack + PTDF' mu throughout. A line congested at its
/// upper limit therefore carries mu < 0.
struct DcOpfSolution {
  double z = 0.0;
  Vector p;
  Vector f;
  double lambda_slack = 0.0;
  Vector mu;
  Vector eta_lower;
  Vector eta_upper;
  std::vector<bool> congested;
};

/// Network congestion prices: values(n, l) is the price contribution of
/// line l's congestion at bus n. Columns of uncongested lines are exactly
/// zero.
struct NcpMatrix {
  Matrix values;
};

/// Assembles Eq-2-style DC-OPF rows for a generic "PTDF-reduced" network:
/// dispatch variables bounded by [0, p_max], one system balance equality,
/// and two inequality rows per line (upper then lower block). Shared by the
/// full and the aggregated model solves.
inline LpProblem assemble_dcopf_lp(const Vector& cost, const Vector& p_max,
                                   const Matrix& ptdf_times_gamma, const Vector& base_flow,
                                   const Vector& limits, double total_demand) {
  const int g = static_cast<int>(cost.size());
  const int l = static_cast<int>(limits.size());
  LpProblem lp;
  lp.c = cost;
  lp.lower = Vector::Zero(g);
  lp.upper = p_max;
  lp.a_eq = Matrix::Ones(1, g);
  lp.b_eq = Vector::Constant(1, total_demand);
  lp.a_le.resize(2 * l, g);
  lp.b_le.resize(2 * l);
  lp.a_le.topRows(l) = ptdf_times_gamma;
  lp.a_le.bottomRows(l) = -ptdf_times_gamma;
  lp.b_le.head(l) = limits - base_flow;
  lp.b_le.tail(l) = limits + base_flow;
  return lp;
}

namespace detail {

struct DcOpfDuals {
  double lambda_slack;
  Vector mu;
};

inline DcOpfDuals congestion_duals(const LpSolution& sol, int n_lines) {
  DcOpfDuals d;
  d.lambda_slack = -sol.y_eq[0];
  d.mu.resize(n_lines);
  for (int l = 0; l < n_lines; ++l) {
    const double phi_up = sol.y_le[l];
    const double phi_lo = sol.y_le[n_lines + l];
    d.mu[l] = phi_lo - phi_up;
  }
  return d;
}

}  // namespace detail

/// Solves the single-period DC-OPF. Throws SolveFailure on infeasible or
/// unbounded problems and on solver breakdown.
inline DcOpfSolution solve_dcopf(const Grid& grid, const PtdfMatrix& ptdf,
                                 const LpTolerances& tol = {},
                                 const LpEngine& engine = LpEngine()) {
  const int n_lines = grid.n_lines();
  const int n_gens = grid.n_generators();

  Vector cost(n_gens), p_max(n_gens);
  for (const Generator& g : grid.generators) {
    cost[g.id] = g.cost;
    p_max[g.id] = g.p_max;
  }
  Vector limits(n_lines);
  for (const Line& l : grid.lines) limits[l.id] = l.limit;

  // PTDF Gamma and the zero-dispatch flow PTDF (-D).
  Matrix ptdf_gamma(n_lines, n_gens);
  for (const Generator& g : grid.generators) ptdf_gamma.col(g.id) = ptdf.values.col(g.bus);
  const Vector base_flow = ptdf.values * (-grid.demand_vector());

  const LpProblem lp =
      assemble_dcopf_lp(cost, p_max, ptdf_gamma, base_flow, limits, grid.total_demand());
  const LpSolution lps = engine ? engine(lp, tol) : solve_lp(lp, tol);
  if (lps.status != LpStatus::optimal)
    throw SolveFailure(lps.status,
                       std::string("solve_dcopf: ") + to_string(lps.status) +
                           (lps.diagnostics.empty() ? "" : " (" + lps.diagnostics + ")"));

  DcOpfSolution out;
  out.p = lps.x;
  out.z = lps.objective;
  out.f = flows(ptdf, grid, out.p);
  out.eta_lower = lps.eta_lower;
  out.eta_upper = lps.eta_upper;

  const auto duals = detail::congestion_duals(lps, n_lines);
  out.lambda_slack = duals.lambda_slack;
  out.mu = duals.mu;
  out.congested.assign(n_lines, false);
  for (int l = 0; l < n_lines; ++l) {
    out.congested[l] = std::abs(out.f[l]) >= limits[l] * (1.0 - 1e-6);
    if (!out.congested[l] || std::abs(out.mu[l]) < 1e-8) out.mu[l] = 0.0;
  }
  return out;
}

/// Locational marginal prices: lambda_slack + PTDF' mu. The slack entry
/// equals lambda_slack exactly since the slack PTDF column is zero.
inline Vector lmp(const DcOpfSolution& solution, const PtdfMatrix& ptdf) {
  return Vector::Constant(ptdf.values.cols(), solution.lambda_slack) +
         ptdf.values.transpose() * solution.mu;
}

/// Network congestion price matrix: PTDF' diag(mu).
inline NcpMatrix ncp(const DcOpfSolution& solution, const PtdfMatrix& ptdf) {
  NcpMatrix out;
  out.values = ptdf.values.transpose() * solution.mu.asDiagonal();
  return out;
}

/// Domain-level KKT residuals, recomputed from the solution fields alone
/// (not from the LP internals). The dual objective is reconstructed by
/// splitting mu back into one-sided line duals.
struct DcOpfKktReport {
  double primal_residual = 0.0;
  double stationarity = 0.0;
  double complementary_slackness = 0.0;
  double relative_gap = 0.0;
};

inline DcOpfKktReport dcopf_kkt_report(const Grid& grid, const PtdfMatrix& ptdf,
                                       const DcOpfSolution& sol) {
  DcOpfKktReport rep;

  const double balance = sol.p.sum() - grid.total_demand();
  rep.primal_residual = std::abs(balance);
  for (const Generator& g : grid.generators) {
    rep.primal_residual = std::max(rep.primal_residual, -sol.p[g.id]);
    rep.primal_residual = std::max(rep.primal_residual, sol.p[g.id] - g.p_max);
  }
  for (const Line& l : grid.lines)
    rep.primal_residual = std::max(rep.primal_residual, std::abs(sol.f[l.id]) - l.limit);

  const Vector node_price = ptdf.values.transpose() * sol.mu;
  for (const Generator& g : grid.generators) {
    const double r = g.cost - sol.lambda_slack - node_price[g.bus] - sol.eta_lower[g.id] +
                     sol.eta_upper[g.id];
    rep.stationarity = std::max(rep.stationarity, std::abs(r));
  }

  for (const Line& l : grid.lines) {
    const double mu = sol.mu[l.id];
    if (mu < 0.0)  // upper-side congestion: f should sit at +limit
      rep.complementary_slackness =
          std::max(rep.complementary_slackness, -mu * std::abs(l.limit - sol.f[l.id]));
    if (mu > 0.0)  // lower-side congestion: f should sit at -limit
      rep.complementary_slackness =
          std::max(rep.complementary_slackness, mu * std::abs(l.limit + sol.f[l.id]));
  }
  for (const Generator& g : grid.generators) {
    rep.complementary_slackness =
        std::max(rep.complementary_slackness, std::abs(sol.eta_lower[g.id] * sol.p[g.id]));
    rep.complementary_slackness = std::max(
        rep.complementary_slackness, std::abs(sol.eta_upper[g.id] * (g.p_max - sol.p[g.id])));
  }

  const Vector base_flow = ptdf.values * (-grid.demand_vector());
  double dual_obj = sol.lambda_slack * grid.total_demand();
  for (const Line& l : grid.lines) {
    const double phi_up = std::max(-sol.mu[l.id], 0.0);
    const double phi_lo = std::max(sol.mu[l.id], 0.0);
    dual_obj -= phi_up * (l.limit - base_flow[l.id]);
    dual_obj -= phi_lo * (l.limit + base_flow[l.id]);
  }
  for (const Generator& g : grid.generators) dual_obj -= sol.eta_upper[g.id] * g.p_max;
  rep.relative_gap = std::abs(sol.z - dual_obj) / (1.0 + std::abs(sol.z));
  return rep;
}

}  // namespace gridagg

#endif  // GRIDAGG_DCOPF_HPP_
