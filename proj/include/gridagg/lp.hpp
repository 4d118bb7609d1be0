// SPDX-License-Identifier: Apache-2.0
#ifndef GRIDAGG_LP_HPP_
#define GRIDAGG_LP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gridagg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// min c.x  s.t.  A_eq x = b_eq,  A_le x <= b_le,  lower <= x <= upper.
struct LpProblem {
  Vector c;
  Vector lower;
  Vector upper;
  Matrix a_eq;
  Vector b_eq;
  Matrix a_le;
  Vector b_le;

  int n_vars() const { return static_cast<int>(c.size()); }
  int n_eq() const { return static_cast<int>(b_eq.size()); }
  int n_le() const { return static_cast<int>(b_le.size()); }
};

struct LpTolerances {
  double feas = 1e-7;
  double cs = 1e-6;
  double gap = 1e-7;
  double pivot = 1e-9;
  int max_iterations = 200000;
  int degenerate_pivot_limit = 100;  // consecutive degenerate pivots before Bland's rule
  int refactor_interval = 100;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical_failure };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
    case LpStatus::numerical_failure: return "numerical_failure";
  }
  return "numerical_failure";
}

/// Duals follow the convention: for a minimization the Lagrangian is
///   c.x + y_eq.(A_eq x - b_eq) + y_le.(A_le x - b_le)
///     + eta_lower.(lower - x) + eta_upper.(x - upper)
/// with y_le, eta_lower, eta_upper >= 0, so stationarity reads
///   c + A_eq'y_eq + A_le'y_le - eta_lower + eta_upper = 0.
struct LpSolution {
  LpStatus status = LpStatus::numerical_failure;
  Vector x;
  double objective = 0.0;
  Vector y_eq;
  Vector y_le;
  Vector eta_lower;
  Vector eta_upper;
  int iterations = 0;
  std::string diagnostics;
};

namespace detail {

// Bounded-variable primal simplex. Columns are the structural variables,
// one logical per row (slack for <= rows, fixed at zero for = rows), and
// artificial columns for rows whose logical starts infeasible. The basis
// is held as a dense LU factorization plus product-form eta updates,
// refactorized periodically.
class SimplexEngine {
 public:
  SimplexEngine(const LpProblem& p, const LpTolerances& tol) : p_(p), tol_(tol) {
    n_ = p.n_vars();
    me_ = p.n_eq();
    ml_ = p.n_le();
    m_ = me_ + ml_;
  }

  LpSolution run() {
    LpSolution sol;
    if (!setup(sol)) return sol;

    // Phase 1: minimize the sum of artificial variables.
    if (n_art_ > 0) {
      Vector phase1 = Vector::Zero(ncols_);
      for (int j = n_ + m_; j < ncols_; ++j) phase1[j] = 1.0;
      const LpStatus st = iterate(phase1, sol, /*phase1=*/true);
      if (st != LpStatus::optimal) {
        sol.status = st;
        return sol;
      }
      double infeas = 0.0;
      for (int j = n_ + m_; j < ncols_; ++j) infeas += x_[j];
      if (infeas > tol_.feas * (1.0 + b_.cwiseAbs().maxCoeff())) {
        sol.status = LpStatus::infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      // Pin artificials at zero for phase 2; basic ones may stay, degenerate.
      for (int j = n_ + m_; j < ncols_; ++j) upper_[j] = 0.0;
    }

    Vector phase2 = Vector::Zero(ncols_);
    phase2.head(n_) = p_.c;
    const LpStatus st = iterate(phase2, sol, /*phase1=*/false);
    sol.status = st;
    sol.iterations = iterations_;
    if (st != LpStatus::optimal) return sol;
    extract(phase2, sol);
    return sol;
  }

 private:
  enum State : std::int8_t { kAtLower, kAtUpper, kBasic, kFreeNonbasic };

  bool setup(LpSolution& sol) {
    if (p_.lower.size() != n_ || p_.upper.size() != n_ ||
        p_.a_eq.rows() != me_ || (me_ > 0 && p_.a_eq.cols() != n_) ||
        p_.a_le.rows() != ml_ || (ml_ > 0 && p_.a_le.cols() != n_))
      throw std::invalid_argument("solve_lp: inconsistent problem dimensions");
    for (int j = 0; j < n_; ++j)
      if (p_.lower[j] > p_.upper[j])
        throw std::invalid_argument("solve_lp: lower > upper at variable " + std::to_string(j));

    b_.resize(m_);
    b_.head(me_) = p_.b_eq;
    b_.tail(ml_) = p_.b_le;

    // Nonbasic start for structurals at the finite bound nearest zero.
    Vector x0(n_);
    std::vector<State> st0(n_);
    for (int j = 0; j < n_; ++j) {
      const double lo = p_.lower[j], hi = p_.upper[j];
      if (std::isfinite(lo) && (lo >= 0.0 || !std::isfinite(hi))) {
        x0[j] = lo;
        st0[j] = kAtLower;
      } else if (std::isfinite(hi) && hi <= 0.0) {
        x0[j] = hi;
        st0[j] = kAtUpper;
      } else if (std::isfinite(lo)) {
        x0[j] = lo;
        st0[j] = kAtLower;
      } else if (std::isfinite(hi)) {
        x0[j] = hi;
        st0[j] = kAtUpper;
      } else {
        x0[j] = 0.0;
        st0[j] = kFreeNonbasic;
      }
    }

    Vector resid = b_;
    if (me_ > 0) resid.head(me_) -= p_.a_eq * x0;
    if (ml_ > 0) resid.tail(ml_) -= p_.a_le * x0;

    // Rows whose logical cannot carry the residual get an artificial.
    std::vector<int> art_rows;
    const double tiny = tol_.feas;
    for (int i = 0; i < m_; ++i) {
      const bool is_eq = i < me_;
      if (is_eq ? std::abs(resid[i]) > tiny : resid[i] < -tiny) art_rows.push_back(i);
    }
    n_art_ = static_cast<int>(art_rows.size());
    ncols_ = n_ + m_ + n_art_;

    cols_ = Matrix::Zero(m_, ncols_);
    if (me_ > 0) cols_.block(0, 0, me_, n_) = p_.a_eq;
    if (ml_ > 0) cols_.block(me_, 0, ml_, n_) = p_.a_le;
    for (int i = 0; i < m_; ++i) cols_(i, n_ + i) = 1.0;

    lower_ = Vector::Zero(ncols_);
    upper_ = Vector::Zero(ncols_);
    lower_.head(n_) = p_.lower;
    upper_.head(n_) = p_.upper;
    for (int i = 0; i < m_; ++i) upper_[n_ + i] = (i < me_) ? 0.0 : kInfinity;

    x_ = Vector::Zero(ncols_);
    x_.head(n_) = x0;
    state_.assign(ncols_, kAtLower);
    for (int j = 0; j < n_; ++j) state_[j] = st0[j];

    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
    for (int a = 0; a < n_art_; ++a) {
      const int row = art_rows[a];
      const int col = n_ + m_ + a;
      cols_(row, col) = resid[row] >= 0.0 ? 1.0 : -1.0;
      lower_[col] = 0.0;
      upper_[col] = kInfinity;
      basis_[row] = col;
    }
    for (int i = 0; i < m_; ++i) {
      const int col = basis_[i];
      state_[col] = kBasic;
      x_[col] = (col >= n_ + m_) ? std::abs(resid[i]) : resid[i];
    }
    // Logicals of artificial rows stay nonbasic at zero; <=-row logicals that
    // absorbed a small negative residual are clamped by the feasibility tol.
    iterations_ = 0;
    if (!refactor(sol)) return false;
    return true;
  }

  bool refactor(LpSolution& sol) {
    Matrix basis_matrix(m_, m_);
    for (int i = 0; i < m_; ++i) basis_matrix.col(i) = cols_.col(basis_[i]);
    lu_.compute(basis_matrix);
    const auto& u_diag = lu_.matrixLU().diagonal();
    double umin = kInfinity, umax = 0.0;
    for (int i = 0; i < m_; ++i) {
      umin = std::min(umin, std::abs(u_diag[i]));
      umax = std::max(umax, std::abs(u_diag[i]));
    }
    if (m_ > 0 && (umin == 0.0 || umin < 1e-14 * umax)) {
      sol.status = LpStatus::numerical_failure;
      sol.diagnostics = "singular basis: |U| diagonal range [" + std::to_string(umin) + ", " +
                        std::to_string(umax) + "]";
      return false;
    }
    etas_.clear();
    // Recompute basic values from scratch to remove accumulated drift.
    Vector rhs = b_;
    for (int j = 0; j < ncols_; ++j)
      if (state_[j] != kBasic && x_[j] != 0.0) rhs -= cols_.col(j) * x_[j];
    const Vector xb = m_ > 0 ? Vector(lu_.solve(rhs)) : Vector();
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
    return true;
  }

  Vector ftran(const Vector& v) const {
    if (m_ == 0) return Vector();
    Vector r = lu_.solve(v);
    for (const Eta& e : etas_) {
      const double t = r[e.row] / e.w[e.row];
      r -= e.w * t;
      r[e.row] = t;
    }
    return r;
  }

  Vector btran(const Vector& v) const {
    if (m_ == 0) return Vector();
    Vector r = v;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const double t = (r[it->row] - it->w.dot(r) + it->w[it->row] * r[it->row]) / it->w[it->row];
      r[it->row] = t;
    }
    return lu_.transpose().solve(r);
  }

  LpStatus iterate(const Vector& cost, LpSolution& sol, bool phase1) {
    const double dual_tol = tol_.pivot * (1.0 + (cost.size() ? cost.cwiseAbs().maxCoeff() : 0.0));
    int degenerate_streak = 0;
    bool bland = false;

    while (true) {
      if (iterations_ >= tol_.max_iterations) return LpStatus::iteration_limit;

      Vector cb(m_);
      for (int i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
      const Vector pi = btran(cb);
      Vector d = cost;
      if (m_ > 0) d -= cols_.transpose() * pi;

      int enter = -1;
      double best = dual_tol;
      for (int j = 0; j < ncols_; ++j) {
        const State s = state_[j];
        if (s == kBasic) continue;
        if (lower_[j] == upper_[j]) continue;  // fixed, never enters
        double viol = 0.0;
        if (s == kAtLower || s == kFreeNonbasic) viol = -d[j];
        if (s == kAtUpper) viol = d[j];
        if (s == kFreeNonbasic) viol = std::abs(d[j]);
        if (viol > best) {
          enter = j;
          best = viol;
          if (bland) break;  // lowest eligible index
        }
      }
      if (enter < 0) return LpStatus::optimal;

      double dir = 1.0;
      if (state_[enter] == kAtUpper) dir = -1.0;
      if (state_[enter] == kFreeNonbasic) dir = d[enter] < 0.0 ? 1.0 : -1.0;

      const Vector w = ftran(cols_.col(enter));

      // Ratio test: nearest blocking basic bound, or the entering variable's
      // own opposite bound (bound flip).
      double t_block = kInfinity;
      int leave_pos = -1;
      double leave_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double wi = w[i];
        if (std::abs(wi) <= tol_.pivot) continue;
        const int bj = basis_[i];
        const double delta = -dir * wi;
        double cap;
        if (delta > 0.0) {
          cap = upper_[bj];
          if (!std::isfinite(cap)) continue;
        } else {
          cap = lower_[bj];
          if (!std::isfinite(cap)) continue;
        }
        double ratio = (cap - x_[bj]) / delta;
        if (ratio < 0.0) ratio = 0.0;
        const bool better =
            bland ? (ratio < t_block - 1e-12 ||
                     (ratio <= t_block + 1e-12 && (leave_pos < 0 || bj < basis_[leave_pos])))
                  : (ratio < t_block - 1e-12 ||
                     (ratio <= t_block + 1e-12 && std::abs(wi) > std::abs(leave_pivot)));
        if (better) {
          t_block = ratio;
          leave_pos = i;
          leave_pivot = wi;
        }
      }

      const double span = upper_[enter] - lower_[enter];
      if (!std::isfinite(t_block) && !std::isfinite(span)) {
        return phase1 ? LpStatus::numerical_failure : LpStatus::unbounded;
      }

      ++iterations_;
      if (span <= t_block) {
        // Bound flip, no basis change.
        for (int i = 0; i < m_; ++i) x_[basis_[i]] -= dir * span * w[i];
        x_[enter] = state_[enter] == kAtLower ? upper_[enter] : lower_[enter];
        state_[enter] = state_[enter] == kAtLower ? kAtUpper : kAtLower;
        degenerate_streak = 0;
        continue;
      }

      const double t = t_block;
      for (int i = 0; i < m_; ++i) x_[basis_[i]] -= dir * t * w[i];
      x_[enter] += dir * t;

      const int leave = basis_[leave_pos];
      const double delta_leave = -dir * w[leave_pos];
      x_[leave] = delta_leave > 0.0 ? upper_[leave] : lower_[leave];
      state_[leave] = delta_leave > 0.0 ? kAtUpper : kAtLower;
      if (lower_[leave] == upper_[leave]) state_[leave] = kAtLower;
      basis_[leave_pos] = enter;
      state_[enter] = kBasic;

      etas_.push_back({leave_pos, w});
      if (static_cast<int>(etas_.size()) >= tol_.refactor_interval) {
        if (!refactor(sol)) return LpStatus::numerical_failure;
      }

      if (t <= 1e-10 * (1.0 + std::abs(x_[enter]))) {
        if (++degenerate_streak > tol_.degenerate_pivot_limit) bland = true;
      } else {
        degenerate_streak = 0;
      }
    }
  }

  void extract(const Vector& cost, LpSolution& sol) {
    Vector cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost[basis_[i]];
    const Vector pi = btran(cb);
    Vector d = cost;
    if (m_ > 0) d -= cols_.transpose() * pi;

    sol.x = x_.head(n_);
    sol.objective = p_.c.dot(sol.x);
    sol.y_eq.resize(me_);
    sol.y_le.resize(ml_);
    for (int i = 0; i < me_; ++i) sol.y_eq[i] = -pi[i];
    for (int i = 0; i < ml_; ++i) {
      double y = -pi[me_ + i];
      if (y < 0.0 && y > -tol_.cs) y = 0.0;
      sol.y_le[i] = y;
    }
    sol.eta_lower = Vector::Zero(n_);
    sol.eta_upper = Vector::Zero(n_);
    for (int j = 0; j < n_; ++j) {
      if (state_[j] == kBasic || state_[j] == kFreeNonbasic) continue;
      if (lower_[j] == upper_[j]) {
        // Fixed variable: split the reduced cost to whichever side keeps
        // both duals nonnegative.
        sol.eta_lower[j] = std::max(d[j], 0.0);
        sol.eta_upper[j] = std::max(-d[j], 0.0);
      } else if (state_[j] == kAtLower) {
        sol.eta_lower[j] = std::max(d[j], 0.0);
      } else {
        sol.eta_upper[j] = std::max(-d[j], 0.0);
      }
    }
  }

  struct Eta {
    int row;
    Vector w;
  };

  const LpProblem& p_;
  LpTolerances tol_;
  int n_ = 0, me_ = 0, ml_ = 0, m_ = 0, n_art_ = 0, ncols_ = 0;
  Matrix cols_;
  Vector b_, lower_, upper_, x_;
  std::vector<State> state_;
  std::vector<int> basis_;
  Eigen::PartialPivLU<Matrix> lu_;
  std::vector<Eta> etas_;
  int iterations_ = 0;
};

}  // namespace detail

/// Deterministic LP solve: identical inputs produce identical solutions,
/// including the dual values picked under degeneracy.
inline LpSolution solve_lp(const LpProblem& problem, const LpTolerances& tolerances = {}) {
  detail::SimplexEngine engine(problem, tolerances);
  return engine.run();
}

/// Adapter seam: anything with this signature can stand in for solve_lp.
using LpEngine = std::function<LpSolution(const LpProblem&, const LpTolerances&)>;

/// Residuals of the KKT system for a claimed-optimal solution. All values
/// are worst-case (infinity-norm style); see LpSolution for the sign
/// convention they certify.
struct LpCertificate {
  double primal_residual = 0.0;
  double dual_infeasibility = 0.0;
  double stationarity_residual = 0.0;
  double complementary_slackness = 0.0;
  double relative_gap = 0.0;
};

inline LpCertificate certify(const LpProblem& p, const LpSolution& s) {
  LpCertificate cert;
  const int n = p.n_vars();

  if (p.n_eq() > 0) {
    cert.primal_residual =
        std::max(cert.primal_residual, (p.a_eq * s.x - p.b_eq).cwiseAbs().maxCoeff());
  }
  Vector le_slack;
  if (p.n_le() > 0) {
    le_slack = p.b_le - p.a_le * s.x;
    cert.primal_residual = std::max(cert.primal_residual, (-le_slack).maxCoeff());
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.lower[j]))
      cert.primal_residual = std::max(cert.primal_residual, p.lower[j] - s.x[j]);
    if (std::isfinite(p.upper[j]))
      cert.primal_residual = std::max(cert.primal_residual, s.x[j] - p.upper[j]);
  }

  for (int i = 0; i < p.n_le(); ++i)
    cert.dual_infeasibility = std::max(cert.dual_infeasibility, -s.y_le[i]);
  for (int j = 0; j < n; ++j) {
    cert.dual_infeasibility = std::max(cert.dual_infeasibility, -s.eta_lower[j]);
    cert.dual_infeasibility = std::max(cert.dual_infeasibility, -s.eta_upper[j]);
  }

  Vector grad = p.c - s.eta_lower + s.eta_upper;
  if (p.n_eq() > 0) grad += p.a_eq.transpose() * s.y_eq;
  if (p.n_le() > 0) grad += p.a_le.transpose() * s.y_le;
  cert.stationarity_residual = n > 0 ? grad.cwiseAbs().maxCoeff() : 0.0;

  for (int i = 0; i < p.n_le(); ++i)
    cert.complementary_slackness =
        std::max(cert.complementary_slackness, std::abs(s.y_le[i] * le_slack[i]));
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.lower[j]))
      cert.complementary_slackness =
          std::max(cert.complementary_slackness, std::abs(s.eta_lower[j] * (s.x[j] - p.lower[j])));
    if (std::isfinite(p.upper[j]))
      cert.complementary_slackness =
          std::max(cert.complementary_slackness, std::abs(s.eta_upper[j] * (p.upper[j] - s.x[j])));
  }

  double dual_obj = 0.0;
  if (p.n_eq() > 0) dual_obj -= s.y_eq.dot(p.b_eq);
  if (p.n_le() > 0) dual_obj -= s.y_le.dot(p.b_le);
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.lower[j])) dual_obj += s.eta_lower[j] * p.lower[j];
    if (std::isfinite(p.upper[j])) dual_obj -= s.eta_upper[j] * p.upper[j];
  }
  cert.relative_gap = std::abs(s.objective - dual_obj) / (1.0 + std::abs(s.objective));
  return cert;
}

}  // namespace gridagg

#endif  // GRIDAGG_LP_HPP_
