// SPDX-License-Identifier: Apache-2.0
#ifndef GRIDAGG_PTDF_HPP_
#define GRIDAGG_PTDF_HPP_

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "gridagg/grid.hpp"

namespace gridagg {

/// Power transfer distribution factors: values(l, n) is the change in flow
/// on line l per MW injected at bus n and withdrawn at the slack bus. The
/// slack column is identically zero.
struct PtdfMatrix {
  Matrix values;
  int slack_bus = 0;
};

/// Builds the PTDF from diag(b) Ksba (Ksba' diag(b) Ksba)^-1 and reinserts
/// the zero slack column. The reduced susceptance matrix is symmetric
/// positive definite for a connected grid; Cholesky is used and failure
/// signals disconnection. Entries below 1e-12 in magnitude are snapped to
/// zero so downstream congestion bookkeeping stays exact.
inline PtdfMatrix build_ptdf(const Grid& grid) {
  const int n = grid.n_buses();
  const int l = grid.n_lines();
  const Matrix ksba = incidence_matrix_slack_adjusted(grid);

  Vector b(l);
  for (int i = 0; i < l; ++i) b[i] = grid.lines[i].susceptance;

  const Matrix weighted = b.asDiagonal() * ksba;  // diag(b) Ksba, L x (N-1)
  const Matrix reduced = ksba.transpose() * weighted;
  Eigen::LLT<Matrix> llt(reduced);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("build_ptdf: reduced susceptance matrix not positive definite "
                             "(grid disconnected?)");
  // PTDF_sba' = reduced^-1 weighted'
  const Matrix sba = llt.solve(weighted.transpose()).transpose();

  PtdfMatrix out;
  out.slack_bus = grid.slack_bus;
  out.values.resize(l, n);
  out.values << sba.leftCols(grid.slack_bus), Vector::Zero(l),
      sba.rightCols(n - grid.slack_bus - 1);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(out.values(i, j)) < 1e-12) out.values(i, j) = 0.0;
  return out;
}

/// Line flows induced by a dispatch: PTDF (Gamma p - D). Any injection
/// imbalance is implicitly absorbed at the slack bus.
inline Vector flows(const PtdfMatrix& ptdf, const Grid& grid, const Vector& dispatch) {
  if (dispatch.size() != grid.n_generators())
    throw std::invalid_argument("flows: dispatch length mismatch");
  Vector injection = -grid.demand_vector();
  for (const Generator& g : grid.generators) injection[g.bus] += dispatch[g.id];
  return ptdf.values * injection;
}

/// Independent flow computation through the bus-angle DC formulation:
/// solves B' theta = injections with the slack angle fixed to zero, then
/// returns diag(b) K theta. Used to cross-check the PTDF route.
inline Vector angle_flow_oracle(const Grid& grid, const Vector& injections) {
  const int n = grid.n_buses();
  if (injections.size() != n) throw std::invalid_argument("angle_flow_oracle: size mismatch");
  if (std::abs(injections.sum()) > 1e-9 * (1.0 + injections.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("angle_flow_oracle: injections do not balance");

  const Matrix k = incidence_matrix(grid);
  Vector b(grid.n_lines());
  for (int i = 0; i < grid.n_lines(); ++i) b[i] = grid.lines[i].susceptance;
  const Matrix laplacian = k.transpose() * b.asDiagonal() * k;

  // Drop the slack row/column, solve, and reinsert theta_slack = 0.
  const int s = grid.slack_bus;
  Matrix reduced(n - 1, n - 1);
  Vector rhs(n - 1);
  for (int i = 0, ri = 0; i < n; ++i) {
    if (i == s) continue;
    rhs[ri] = injections[i];
    for (int j = 0, rj = 0; j < n; ++j) {
      if (j == s) continue;
      reduced(ri, rj) = laplacian(i, j);
      ++rj;
    }
    ++ri;
  }
  Eigen::LLT<Matrix> llt(reduced);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("angle_flow_oracle: singular reduced Laplacian (disconnected?)");
  const Vector theta_reduced = llt.solve(rhs);

  Vector theta(n);
  for (int i = 0, ri = 0; i < n; ++i) theta[i] = (i == s) ? 0.0 : theta_reduced[ri++];
  return b.asDiagonal() * (k * theta);
}

}  // namespace gridagg

#endif  // GRIDAGG_PTDF_HPP_
