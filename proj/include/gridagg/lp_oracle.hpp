// SPDX-License-Identifier: Apache-2.0
#ifndef GRIDAGG_LP_ORACLE_HPP_
#define GRIDAGG_LP_ORACLE_HPP_

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "gridagg/lp.hpp"

namespace gridagg {

/// Exact small-LP optimum by enumerating basic feasible points: every
/// choice of n active constraints among equality rows (always active),
/// inequality rows, and finite variable bounds is solved and screened for
/// feasibility. Infinite bounds are replaced by a large box so unbounded
/// problems surface as an optimum pinned to the box. Test oracle only;
/// independent of the simplex path in solve_lp.
inline LpSolution vertex_enumeration_oracle(const LpProblem& p) {
  const int n = p.n_vars();
  const int me = p.n_eq();
  const int ml = p.n_le();
  if (n > 12 || me + ml > 20)
    throw std::invalid_argument("vertex_enumeration_oracle: problem too large");

  constexpr double kBox = 1e8;
  constexpr double kFeasTol = 1e-9;

  // Candidate active constraints: each is a row a.x = rhs, with a flag for
  // the artificial box planes standing in for infinite bounds.
  struct Plane {
    Vector a;
    double rhs;
    bool artificial;
  };
  std::vector<Plane> pool;
  for (int i = 0; i < ml; ++i) pool.push_back({p.a_le.row(i).transpose(), p.b_le[i], false});
  for (int j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e[j] = 1.0;
    const bool lo_art = !std::isfinite(p.lower[j]);
    const bool hi_art = !std::isfinite(p.upper[j]);
    pool.push_back({e, lo_art ? -kBox : p.lower[j], lo_art});
    pool.push_back({e, hi_art ? kBox : p.upper[j], hi_art});
  }

  const int need = n - me;
  if (need < 0) throw std::invalid_argument("vertex_enumeration_oracle: more equalities than variables");

  LpSolution best;
  best.status = LpStatus::infeasible;
  bool found = false;
  bool best_on_box = false;

  std::vector<int> pick(need);
  // Iterative combination enumeration over the pool.
  for (int i = 0; i < need; ++i) pick[i] = i;
  const int pool_size = static_cast<int>(pool.size());
  if (need > pool_size) return best;

  auto advance = [&]() -> bool {
    int i = need - 1;
    while (i >= 0 && pick[i] == pool_size - need + i) --i;
    if (i < 0) return false;
    ++pick[i];
    for (int k = i + 1; k < need; ++k) pick[k] = pick[k - 1] + 1;
    return true;
  };

  while (true) {
    Matrix active(n, n);
    Vector rhs(n);
    for (int i = 0; i < me; ++i) {
      active.row(i) = p.a_eq.row(i);
      rhs[i] = p.b_eq[i];
    }
    for (int i = 0; i < need; ++i) {
      active.row(me + i) = pool[pick[i]].a.transpose();
      rhs[me + i] = pool[pick[i]].rhs;
    }
    Eigen::FullPivLU<Matrix> lu(active);
    if (lu.rank() == n) {
      const Vector x = lu.solve(rhs);
      bool feasible = true;
      const double scale = 1.0 + x.cwiseAbs().maxCoeff();
      if (me > 0 && (p.a_eq * x - p.b_eq).cwiseAbs().maxCoeff() > kFeasTol * scale)
        feasible = false;
      if (feasible && ml > 0 && (p.a_le * x - p.b_le).maxCoeff() > kFeasTol * scale)
        feasible = false;
      for (int j = 0; feasible && j < n; ++j) {
        const double lo = std::isfinite(p.lower[j]) ? p.lower[j] : -kBox;
        const double hi = std::isfinite(p.upper[j]) ? p.upper[j] : kBox;
        if (x[j] < lo - kFeasTol * scale || x[j] > hi + kFeasTol * scale) feasible = false;
      }
      if (feasible) {
        const double obj = p.c.dot(x);
        if (!found || obj < best.objective - 1e-12 * (1.0 + std::abs(best.objective))) {
          found = true;
          best.objective = obj;
          best.x = x;
          best_on_box = false;
          for (int i = 0; i < need; ++i)
            if (pool[pick[i]].artificial &&
                std::abs(pool[pick[i]].a.dot(x) - pool[pick[i]].rhs) <= kFeasTol * scale)
              best_on_box = true;
        }
      }
    }
    if (need == 0 || !advance()) break;
  }

  if (!found) {
    best.status = LpStatus::infeasible;
  } else if (best_on_box) {
    best.status = LpStatus::unbounded;
  } else {
    best.status = LpStatus::optimal;
  }
  return best;
}

}  // namespace gridagg

#endif  // GRIDAGG_LP_ORACLE_HPP_
