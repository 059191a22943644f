#pragma once

// Small dense linear programs:  maximize c.x  subject to  A x = b, x >= 0.
// Two-phase tableau simplex with Bland's rule; sizes here are a few hundred
// variables at most.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "idealhyp/errors.hpp"

namespace idealhyp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  /// For Infeasible: y with y^T A >= 0 componentwise and y^T b < 0 (up to
  /// tolerance); rows with nonzero y form an unsatisfiable subsystem.
  Eigen::VectorXd farkas;
  /// Rows dropped as linearly dependent on the others.
  std::vector<int> redundant_rows;
};

namespace detail {

class Tableau {
 public:
  // rows 0..m-1 constraints, row m objective (reduced costs, maximisation:
  // entering columns have negative entry).  Last column is the rhs.
  Eigen::MatrixXd t;
  std::vector<int> basis;
  double tol;

  Tableau(int m, int ncols, double tol_) : t(Eigen::MatrixXd::Zero(m + 1, ncols + 1)), basis(m, -1), tol(tol_) {}

  int rows() const { return static_cast<int>(basis.size()); }
  int cols() const { return static_cast<int>(t.cols()) - 1; }
  double& rhs(int i) { return t(i, cols()); }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[r] = c;
  }

  // Runs simplex iterations on the objective row; returns false if unbounded.
  bool run(const std::vector<char>& allowed, int max_pivots) {
    const int m = rows();
    for (int it = 0; it < max_pivots; ++it) {
      int enter = -1;
      for (int j = 0; j < cols(); ++j) {
        if (allowed[j] && t(m, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = t(i, enter);
        if (a > tol) {
          const double ratio = t(i, cols()) / a;
          if (ratio < best - 1e-14 || (ratio <= best + 1e-14 && leave >= 0 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw InternalError("simplex: pivot limit reached");
  }
};

}  // namespace detail

/// maximize c.x  s.t.  A x = b,  x >= 0.
inline LpResult solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                         double tol = 1e-10) {
  const int m = static_cast<int>(A.rows()), n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n) throw DomainError("solve_lp: dimension mismatch");
  LpResult res;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());

  detail::Tableau T(m, n + m, tol * scale);
  std::vector<double> sign(m, 1.0);
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) sign[i] = -1.0;
    T.t.block(i, 0, 1, n) = sign[i] * A.row(i);
    T.t(i, n + i) = 1.0;
    T.rhs(i) = sign[i] * b[i];
    T.basis[i] = n + i;
  }
  // phase 1: maximize -sum(artificials); reduced costs = -sum of rows
  for (int i = 0; i < m; ++i) T.t.row(m) -= T.t.row(i);
  for (int i = 0; i < m; ++i) T.t(m, n + i) = 0.0;
  std::vector<char> allowed(n + m, 1);
  const int max_pivots = 50 * (n + m) + 1000;
  T.run(allowed, max_pivots);

  const double infeas = -T.t(m, n + m);  // sum of artificials at optimum
  if (infeas > 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
    res.status = LpStatus::Infeasible;
    // Phase-1 duals: the reduced cost under artificial i is y_i + 1, and
    // optimality of phase 1 means y^T A >= 0 with y^T b = -infeasibility.
    res.farkas.resize(m);
    for (int i = 0; i < m; ++i) res.farkas[i] = (T.t(m, n + i) - 1.0) * sign[i];
    return res;
  }

  // drive artificials out of the basis; rows where that is impossible are
  // linearly dependent and get dropped.
  std::vector<char> keep(m, 1);
  for (int i = 0; i < m; ++i) {
    if (T.basis[i] < n) continue;
    int col = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(T.t(i, j)) > 1e-9 * scale) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      T.pivot(i, col);
    } else {
      keep[i] = 0;
      res.redundant_rows.push_back(i);
    }
  }
  for (int j = n; j < n + m; ++j) allowed[j] = 0;
  for (int i = 0; i < m; ++i) {
    if (!keep[i]) T.t.row(i).setZero();
  }

  // phase 2
  T.t.row(m).setZero();
  for (int j = 0; j < n; ++j) T.t(m, j) = -c[j];
  for (int i = 0; i < m; ++i) {
    if (!keep[i]) continue;
    const int bj = T.basis[i];
    if (bj < n && T.t(m, bj) != 0.0) T.t.row(m) -= T.t(m, bj) * T.t.row(i);
  }
  // dropped rows must never be chosen as pivot rows
  for (int i = 0; i < m; ++i) {
    if (!keep[i]) T.basis[i] = std::numeric_limits<int>::max();
  }
  if (!T.run(allowed, max_pivots)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (keep[i] && T.basis[i] < n) res.x[T.basis[i]] = std::max(0.0, T.rhs(i));
  }
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace idealhyp
