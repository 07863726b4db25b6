// Copyright 2026 The bellnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense two-phase primal simplex for small equality-form linear programs:
// min c'x subject to Ax = b, x >= 0.  Bland's rule throughout, so the
// iteration terminates without anti-cycling heuristics.  Adequate for the
// polytope problems here (tens of variables), not a general-purpose solver.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace bellnet {

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  double objective = 0.0;
  Eigen::VectorXd x;
};

namespace detail {

// One simplex phase on a tableau kept in canonical form for `basis`.
// Columns < n_allowed may enter; returns false if unbounded.
inline bool simplex_phase(Eigen::MatrixXd& t, std::vector<int>& basis,
                          const Eigen::VectorXd& cost, int n_allowed, double tol) {
  const int m = static_cast<int>(t.rows());
  const int n_total = static_cast<int>(t.cols()) - 1;
  for (;;) {
    // Reduced costs against the current basis.
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) y(i) = cost(basis[static_cast<std::size_t>(i)]);
    int entering = -1;
    for (int j = 0; j < n_allowed; ++j) {
      bool basic = false;
      for (int i = 0; i < m; ++i)
        if (basis[static_cast<std::size_t>(i)] == j) {
          basic = true;
          break;
        }
      if (basic) continue;
      const double reduced = cost(j) - y.dot(t.col(j));
      if (reduced < -tol) {
        entering = j;  // Bland: smallest eligible index
        break;
      }
    }
    if (entering < 0) return true;
    int leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double aij = t(i, entering);
      if (aij > tol) {
        const double ratio = t(i, n_total) / aij;
        if (ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 &&
             (leaving < 0 || basis[static_cast<std::size_t>(i)] <
                                 basis[static_cast<std::size_t>(leaving)]))) {
          best_ratio = ratio;
          leaving = i;
        }
      }
    }
    if (leaving < 0) return false;
    t.row(leaving) /= t(leaving, entering);
    for (int i = 0; i < m; ++i) {
      if (i == leaving) continue;
      const double f = t(i, entering);
      if (f != 0.0) t.row(i) -= f * t.row(leaving);
    }
    basis[static_cast<std::size_t>(leaving)] = entering;
  }
}

}  // namespace detail

// Solves min c'x s.t. Ax = b, x >= 0.
inline LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& c, double tol = 1e-9) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (b.size() != m || c.size() != n) throw std::invalid_argument("solve_lp: shape mismatch");

  // Tableau [A | I | b] with nonnegative right-hand side; artificials basic.
  Eigen::MatrixXd t(m, n + m + 1);
  t.block(0, 0, m, n) = a;
  t.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  t.col(n + m) = b;
  for (int i = 0; i < m; ++i)
    if (t(i, n + m) < 0.0) t.row(i) = -t.row(i);
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  LpResult res;

  // Phase 1: minimize the artificial total.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.segment(n, m).setOnes();
  if (!detail::simplex_phase(t, basis, phase1, n + m, tol))
    throw std::logic_error("solve_lp: phase 1 unbounded");
  double artificial_total = 0.0;
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] >= n) artificial_total += t(i, n + m);
  if (artificial_total > 1e-7) {
    res.status = LpResult::Status::infeasible;
    return res;
  }
  // Pivot leftover artificials out where a structural column is available;
  // rows with no such column are redundant constraints and stay inert.
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t(i, j)) > tol) {
        t.row(i) /= t(i, j);
        for (int k = 0; k < m; ++k) {
          if (k == i) continue;
          const double f = t(k, j);
          if (f != 0.0) t.row(k) -= f * t.row(i);
        }
        basis[static_cast<std::size_t>(i)] = j;
        break;
      }
    }
  }

  // Phase 2 on the structural columns only.
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = c;
  if (!detail::simplex_phase(t, basis, phase2, n, tol)) {
    res.status = LpResult::Status::unbounded;
    return res;
  }

  res.status = LpResult::Status::optimal;
  res.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] < n) res.x(basis[static_cast<std::size_t>(i)]) = t(i, n + m);
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace bellnet
