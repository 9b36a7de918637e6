#pragma once

// Fréchet maps on Euclidean space R^m: forward map, ℓ = m multilateration inverse,
// paraboloid image test, mutual coherence and hyperplane separability.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frechet/detail/simplex.hpp"
#include "frechet/error.hpp"

namespace frechet::euclid {

/// Reference points stored column-wise (m × ℓ).
struct EuclidRefs {
  Eigen::MatrixXd points;
  int p = 2;

  int ambient_dim() const { return static_cast<int>(points.rows()); }
  int size() const { return static_cast<int>(points.cols()); }
};

inline Eigen::VectorXd embed_euclid(const EuclidRefs& refs, const Eigen::VectorXd& x) {
  if (x.size() != refs.ambient_dim()) fail(ErrorCode::DimMismatch, "point and reference dimensions differ");
  Eigen::VectorXd out(refs.size());
  for (int i = 0; i < refs.size(); ++i) {
    const double sq = (x - refs.points.col(i)).squaredNorm();
    out(i) = refs.p == 2 ? sq : std::sqrt(sq);
  }
  return out;
}

struct MultilaterationResult {
  std::vector<Eigen::VectorXd> solutions;
  Eigen::MatrixXd gram;    ///< Gram matrix of r_i - r_m, i < m
  double s_squared = 0.0;  ///< d_m - uᵀ G⁻¹ u
  Eigen::VectorXd foot;    ///< projection x_{H⁰} of the solutions onto Aff(refs)
  Eigen::VectorXd normal;  ///< unit normal of Aff(refs)
};

namespace detail {

struct Frame {
  Eigen::MatrixXd shifted;  // m × (m-1): r_i - r_m
  Eigen::MatrixXd gram;
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd origin;  // r_m
};

inline Frame make_frame(const EuclidRefs& refs) {
  const int m = refs.ambient_dim();
  if (refs.size() != m) fail(ErrorCode::InvalidArgument, "multilateration requires exactly m reference points");
  Frame f;
  f.origin = refs.points.col(m - 1);
  f.shifted = refs.points.leftCols(m - 1).colwise() - f.origin;
  f.gram = f.shifted.transpose() * f.shifted;
  if (m > 1) {
    f.llt.compute(f.gram);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(f.gram).eigenvalues();
    if (f.llt.info() != Eigen::Success || ev.minCoeff() <= 1e-12 * std::max(1.0, ev.maxCoeff()))
      fail(ErrorCode::DegenerateRefs, "reference points are not affinely independent");
  }
  return f;
}

// u = ½(b - z) with z_i = d_i - d_m, b_i = ‖r_i - r_m‖².
inline Eigen::VectorXd u_vector(const Frame& f, const Eigen::VectorXd& d) {
  const Eigen::Index k = f.shifted.cols();
  Eigen::VectorXd u(k);
  for (Eigen::Index i = 0; i < k; ++i) u(i) = 0.5 * (f.shifted.col(i).squaredNorm() - (d(i) - d(k)));
  return u;
}

}  // namespace detail

/// Recovers x from squared distances d to m affinely independent references in R^m.
inline MultilaterationResult invert_multilateration(const EuclidRefs& refs, const Eigen::VectorXd& d) {
  if (refs.p != 2) fail(ErrorCode::InvalidArgument, "inversion is defined for the squared map (p = 2)");
  const int m = refs.ambient_dim();
  if (d.size() != m) fail(ErrorCode::DimMismatch, "distance vector length must equal m");
  const detail::Frame f = detail::make_frame(refs);

  MultilaterationResult out;
  out.gram = f.gram;
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m - 1);
  double quad = 0.0;
  if (m > 1) {
    const Eigen::VectorXd u = detail::u_vector(f, d);
    alpha = f.llt.solve(u);
    quad = u.dot(alpha);
  }
  out.s_squared = d(m - 1) - quad;
  out.foot = f.shifted * alpha + f.origin;

  if (m > 1) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(f.shifted, Eigen::ComputeFullU);
    out.normal = svd.matrixU().col(m - 1);
  } else {
    out.normal = Eigen::VectorXd::Ones(1);
  }
  Eigen::Index big = 0;
  out.normal.cwiseAbs().maxCoeff(&big);
  if (out.normal(big) < 0.0) out.normal = -out.normal;

  const double tol = 1e-9 * std::max(1.0, std::abs(d(m - 1)));
  if (out.s_squared < -tol) fail(ErrorCode::NoSolution, "s² = " + std::to_string(out.s_squared));
  if (out.s_squared <= tol) {
    out.solutions.push_back(out.foot);
  } else {
    const double s = std::sqrt(out.s_squared);
    out.solutions.push_back(out.foot + s * out.normal);
    out.solutions.push_back(out.foot - s * out.normal);
  }
  return out;
}

/// d lies in the image of the squared map iff uᵀ G⁻¹ u ≤ d_m.
inline bool paraboloid_membership(const EuclidRefs& refs, const Eigen::VectorXd& d) {
  const int m = refs.ambient_dim();
  if (d.size() != m) fail(ErrorCode::DimMismatch, "distance vector length must equal m");
  const detail::Frame f = detail::make_frame(refs);
  double quad = 0.0;
  if (m > 1) {
    const Eigen::VectorXd u = detail::u_vector(f, d);
    quad = u.dot(f.llt.solve(u));
  }
  return quad <= d(m - 1) + 1e-9;
}

struct CoherenceReport {
  double mu = 0.0;
  double dist_to_set = 0.0;              ///< d(r, A)
  std::optional<bool> condition_holds;   ///< ρ / d(r, A) < (1 - (m-1)μ) / √m, when ρ was supplied
};

/// Largest |cos| between directions from points of A to distinct references.
inline CoherenceReport mutual_coherence(const EuclidRefs& refs, const Eigen::MatrixXd& set,
                                        std::optional<double> rho = std::nullopt) {
  if (set.rows() != refs.ambient_dim()) fail(ErrorCode::DimMismatch, "set and reference dimensions differ");
  CoherenceReport out;
  out.dist_to_set = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < set.cols(); ++a) {
    Eigen::MatrixXd dirs(refs.ambient_dim(), refs.size());
    for (int i = 0; i < refs.size(); ++i) {
      const Eigen::VectorXd diff = set.col(a) - refs.points.col(i);
      const double len = diff.norm();
      if (len <= 1e-12) fail(ErrorCode::RefTouchesSet, "reference " + std::to_string(i) + " touches the set");
      out.dist_to_set = std::min(out.dist_to_set, len);
      dirs.col(i) = diff / len;
    }
    for (int i = 0; i < refs.size(); ++i)
      for (int j = i + 1; j < refs.size(); ++j)
        out.mu = std::max(out.mu, std::abs(dirs.col(i).dot(dirs.col(j))));
  }
  out.mu = std::min(out.mu, 1.0);
  if (rho) {
    const double m = refs.ambient_dim();
    out.condition_holds = *rho / out.dist_to_set < (1.0 - (m - 1.0) * out.mu) / std::sqrt(m);
  }
  return out;
}

/// Whether y lies in the convex hull of the columns of `points`.
inline bool hull_contains(const Eigen::MatrixXd& points, const Eigen::VectorXd& y, double tol = 1e-9) {
  if (points.rows() != y.size()) fail(ErrorCode::DimMismatch, "hull and point dimensions differ");
  const Eigen::Index m = points.rows();
  const double scale = std::max(1.0, std::max(points.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff()));
  Eigen::MatrixXd a(m + 1, points.cols());
  a.topRows(m) = points / scale;
  a.row(m).setOnes();
  Eigen::VectorXd b(m + 1);
  b << y / scale, 1.0;
  return frechet::detail::phase_one(a, b, tol).feasible;
}

/// Strict linear separability of two finite sets (columns). Decided through the
/// dual statement: finite sets are strictly separable iff their convex hulls are disjoint,
/// i.e. { λ, μ ≥ 0 : Σλ = Σμ = 1, S1 λ = S2 μ } is infeasible.
inline bool hyperplane_separable(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2, double tol = 1e-9) {
  if (s1.rows() != s2.rows()) fail(ErrorCode::DimMismatch, "point sets live in different dimensions");
  if (s1.cols() == 0 || s2.cols() == 0) fail(ErrorCode::InvalidArgument, "point sets must be non-empty");
  const Eigen::Index m = s1.rows();
  const Eigen::Index n1 = s1.cols(), n2 = s2.cols();
  const double scale = std::max(1.0, std::max(s1.cwiseAbs().maxCoeff(), s2.cwiseAbs().maxCoeff()));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 2, n1 + n2);
  a.block(0, 0, m, n1) = s1 / scale;
  a.block(0, n1, m, n2) = -s2 / scale;
  a.block(m, 0, 1, n1).setOnes();
  a.block(m + 1, n1, 1, n2).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 2);
  b(m) = 1.0;
  b(m + 1) = 1.0;
  return !frechet::detail::phase_one(a, b, tol).feasible;
}

}  // namespace frechet::euclid
