#pragma once

// Dense phase-one simplex for feasibility of { x >= 0 : A x = b }.
// Bland's rule; intended for small systems (tens of rows, a few thousand columns).

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace frechet::detail {

struct Feasibility {
  bool feasible = false;
  double infeasibility = 0.0;  ///< optimal sum of artificials
  Eigen::VectorXd x;
};

inline Feasibility phase_one(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol = 1e-9) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  const Eigen::Index width = cols + rows + 1;
  const Eigen::Index rhs = width - 1;

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows + 1, width);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    t.block(i, 0, 1, cols) = sign * a.row(i);
    t(i, cols + i) = 1.0;
    t(i, rhs) = sign * b(i);
  }
  for (Eigen::Index i = 0; i < rows; ++i) t.row(rows) -= t.row(i);
  for (Eigen::Index i = 0; i < rows; ++i) t(rows, cols + i) = 0.0;

  Eigen::VectorXi basis(rows);
  for (Eigen::Index i = 0; i < rows; ++i) basis(i) = static_cast<int>(cols + i);

  const double scale = 1.0 + t.col(rhs).head(rows).cwiseAbs().sum();
  const double eps = 1e-12 * scale;
  const int max_pivots = 50 * static_cast<int>(rows + cols) + 1000;

  for (int iter = 0; iter < max_pivots; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols + rows; ++j)
      if (t(rows, j) < -eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double aij = t(i, enter);
      if (aij <= 1e-12) continue;
      const double ratio = t(i, rhs) / aij;
      if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis(i) < basis(leave))) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) break;  // unbounded direction cannot occur in phase one; stop defensively

    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= rows; ++i)
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    basis(leave) = static_cast<int>(enter);
  }

  Feasibility out;
  out.infeasibility = -t(rows, rhs);
  out.feasible = out.infeasibility <= tol * scale;
  out.x = Eigen::VectorXd::Zero(cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    if (basis(i) < cols) out.x(basis(i)) = t(i, rhs);
  return out;
}

}  // namespace frechet::detail
