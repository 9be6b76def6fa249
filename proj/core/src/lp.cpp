#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qwork/sdp.hpp"

namespace qwork::sdp {
namespace {

constexpr double kPivotTol = 1e-11;   // smallest usable pivot magnitude
constexpr double kEnterTol = 1e-9;    // reduced-cost threshold for entering
constexpr double kArtifTol = 1e-7;    // residual artificial mass => infeasible
constexpr int kMaxPivotsPerCell = 4;  // iteration cap multiplier

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

LpSolution solve_lp(const LpProblem& p) {
  const int n = p.num_vars();
  if (n == 0) throw std::invalid_argument("solve_lp: empty problem");
  const int mi = static_cast<int>(p.ineq_matrix.rows());
  const int me = static_cast<int>(p.eq_matrix.rows());
  if (p.ineq_bounds.size() != mi || (mi > 0 && p.ineq_matrix.cols() != n))
    throw std::invalid_argument("solve_lp: inequality shape mismatch");
  if (p.eq_targets.size() != me || (me > 0 && p.eq_matrix.cols() != n))
    throw std::invalid_argument("solve_lp: equality shape mismatch");
  if (p.lower.size() != 0 && p.lower.size() != n)
    throw std::invalid_argument("solve_lp: lower-bound shape mismatch");

  // Shift x = lower + x' so the solver only ever sees x' >= 0.
  Eigen::VectorXd lower = p.lower.size() == n
                              ? p.lower
                              : Eigen::VectorXd::Zero(n).eval();
  Eigen::VectorXd bi = p.ineq_bounds;
  if (mi > 0) bi -= p.ineq_matrix * lower;
  Eigen::VectorXd be = p.eq_targets;
  if (me > 0) be -= p.eq_matrix * lower;

  const int m = mi + me;
  const double scale = std::max(
      {1.0, p.objective.cwiseAbs().maxCoeff(), max_abs(p.ineq_matrix),
       max_abs(p.eq_matrix), max_abs(bi), max_abs(be)});
  const double big_m = 1e6 * scale;

  // Column layout: structural x' (n), slacks for <= rows (mi), artificials
  // for equality rows and for rows whose right-hand side had to be negated.
  std::vector<int> artificial_cols;
  const int total_guess = n + mi + m;
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m + 1, total_guess + 1);
  std::vector<int> basis(m, -1);
  int next_col = n + mi;

  for (int r = 0; r < m; ++r) {
    const bool is_eq = r >= mi;
    Eigen::RowVectorXd row =
        is_eq ? p.eq_matrix.row(r - mi) : p.ineq_matrix.row(r);
    double rhs = is_eq ? be(r - mi) : bi(r);
    double slack_sign = 1.0;
    if (rhs < 0) {  // normalize to nonnegative right-hand sides
      row = -row;
      rhs = -rhs;
      slack_sign = -1.0;
    }
    tab.block(r, 0, 1, n) = row;
    if (!is_eq) tab(r, n + r) = slack_sign;
    if (is_eq || slack_sign < 0) {  // no ready-made basic column: add artificial
      tab(r, next_col) = 1.0;
      basis[r] = next_col;
      artificial_cols.push_back(next_col);
      ++next_col;
    } else {
      basis[r] = n + r;
    }
    tab(r, total_guess) = rhs;
  }
  const int ncols = next_col;

  // Objective row holds reduced costs; eliminate the initial basic columns.
  for (int j = 0; j < n; ++j) tab(m, j) = p.objective(j);
  for (int c : artificial_cols) tab(m, c) = big_m;
  for (int r = 0; r < m; ++r)
    if (tab(m, basis[r]) != 0.0) tab.row(m) -= tab(m, basis[r]) * tab.row(r);

  LpSolution sol;
  const long max_iters =
      static_cast<long>(kMaxPivotsPerCell) * (m + 1) * (ncols + 1);
  for (long iter = 0;; ++iter) {
    if (iter > max_iters) {
      sol.status = LpStatus::numerical_failure;
      return sol;
    }
    // Bland: entering column = lowest index with a usefully negative cost.
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (tab(m, j) < -kEnterTol * scale) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // optimal for the big-M objective

    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < m; ++r) {
      const double a = tab(r, enter);
      if (a <= kPivotTol) continue;
      const double ratio = tab(r, total_guess) / a;
      if (leave < 0 || ratio < best_ratio - kPivotTol ||
          (ratio < best_ratio + kPivotTol && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      sol.status = LpStatus::unbounded;
      return sol;
    }
    tab.row(leave) /= tab(leave, enter);
    for (int r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = tab(r, enter);
      if (f != 0.0) tab.row(r) -= f * tab.row(leave);
    }
    basis[leave] = enter;
  }

  // Artificial mass remaining at the big-M optimum means no feasible point.
  double artificial_mass = 0.0;
  for (int r = 0; r < m; ++r)
    if (basis[r] >= n + mi) artificial_mass += std::abs(tab(r, total_guess));
  if (artificial_mass > kArtifTol * scale) {
    sol.status = LpStatus::infeasible;
    return sol;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < m; ++r)
    if (basis[r] < n) x(basis[r]) = tab(r, total_guess);
  sol.x = lower + x;
  sol.objective = p.objective.dot(sol.x);
  sol.status = LpStatus::optimal;
  return sol;
}

}  // namespace qwork::sdp
