#include "corrlab/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace corrlab::lp {

namespace {

// Tableau rows 0..m-1 hold constraints, row m holds reduced costs; the last
// column is the right-hand side. The objective row's rhs stores -objective.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<Eigen::Index> basis;
  Eigen::Index m = 0;
  Eigen::Index rhs = 0;

  void pivot(Eigen::Index row, Eigen::Index col) {
    t.row(row) /= t(row, col);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }
};

// Runs primal simplex over columns [0, allowed_cols). Returns false when the
// objective is unbounded below along some entering column.
bool iterate(Tableau& tab, Eigen::Index allowed_cols, const Options& opt, int& iterations) {
  for (;;) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < allowed_cols; ++j) {
      if (tab.t(tab.m, j) < -opt.pivot_tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return true;

    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < tab.m; ++i) {
      const double a = tab.t(i, enter);
      if (a <= opt.pivot_tol) continue;
      const double ratio = tab.t(i, tab.rhs) / a;
      if (ratio < best - 1e-15 ||
          (std::abs(ratio - best) <= 1e-15 && leave >= 0 &&
           tab.basis[static_cast<std::size_t>(i)] < tab.basis[static_cast<std::size_t>(leave)])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) return false;

    if (++iterations > opt.max_iterations) {
      throw LpError("simplex: iteration limit reached without convergence");
    }
    tab.pivot(leave, enter);
  }
}

}  // namespace

Result solve(const Problem& problem, const Options& options) {
  const Eigen::Index m = problem.A.rows();
  const Eigen::Index n = problem.A.cols();
  if (problem.b.size() != m || problem.c.size() != n) {
    throw LpError("simplex: inconsistent problem dimensions");
  }
  if (!problem.A.allFinite() || !problem.b.allFinite() || !problem.c.allFinite()) {
    throw LpError("simplex: non-finite problem data");
  }

  Tableau tab;
  tab.m = m;
  tab.rhs = n + m;
  tab.t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = problem.b(i) < 0.0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = sign * problem.A.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, tab.rhs) = sign * problem.b(i);
    tab.basis[static_cast<std::size_t>(i)] = n + i;
  }

  // Phase one: minimize the sum of artificial variables.
  for (Eigen::Index j = 0; j < n; ++j) tab.t(m, j) = -tab.t.col(j).head(m).sum();
  tab.t(m, tab.rhs) = -tab.t.col(tab.rhs).head(m).sum();

  Result result;
  if (!iterate(tab, n, options, result.iterations)) {
    throw LpError("simplex: phase one reported unbounded (numerical breakdown)");
  }
  result.infeasibility = std::max(0.0, -tab.t(m, tab.rhs));
  if (result.infeasibility > options.feasibility_tol) {
    result.status = Status::Infeasible;
    return result;
  }

  // Drive artificial variables out of the basis where a structural column
  // can replace them; rows with no such column are redundant and stay put.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) continue;
    Eigen::Index col = -1;
    double best = options.pivot_tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.t(i, j)) > best) {
        best = std::abs(tab.t(i, j));
        col = j;
      }
    }
    if (col >= 0) tab.pivot(i, col);
  }

  // Phase two: original objective, artificial columns frozen out.
  tab.t.row(m).setZero();
  for (Eigen::Index j = 0; j < n; ++j) tab.t(m, j) = problem.c(j);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bj = tab.basis[static_cast<std::size_t>(i)];
    const double cb = bj < n ? problem.c(bj) : 0.0;
    if (cb != 0.0) tab.t.row(m) -= cb * tab.t.row(i);
  }
  if (!iterate(tab, n, options, result.iterations)) {
    result.status = Status::Unbounded;
    return result;
  }

  result.status = Status::Optimal;
  result.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bj = tab.basis[static_cast<std::size_t>(i)];
    if (bj < n) result.x(bj) = std::max(0.0, tab.t(i, tab.rhs));
  }
  result.objective = problem.c.dot(result.x);
  return result;
}

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

}  // namespace corrlab::lp
