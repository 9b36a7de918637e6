#pragma once

// Fréchet (Karcher) means on SPD(n): Riemannian gradient descent and the
// recursive iterative-centroid approximation.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frechet/error.hpp"
#include "frechet/spd.hpp"

namespace frechet {

enum class Metric { Affine, LogEuclidean };

struct MeanSolverConfig {
  double eta = 0.5;
  double grad_tol = 1e-8;  ///< on ‖g‖_P
  int max_iter = 200;
  std::optional<SpdMatrix> init;  ///< empty: start from the first point

  void validate() const {
    if (!(eta > 0.0 && eta <= 1.0)) fail(ErrorCode::InvalidArgument, "eta must lie in (0, 1]");
    if (!(grad_tol > 0.0)) fail(ErrorCode::InvalidArgument, "grad_tol must be positive");
    if (max_iter < 1) fail(ErrorCode::InvalidArgument, "max_iter must be at least 1");
  }
};

struct MeanResult {
  SpdMatrix mean;
  int iterations = 0;  ///< gradient evaluations
  double grad_norm = 0.0;
  bool converged = false;  ///< false means max_iter was hit; `mean` is the best iterate seen
};

namespace detail {

inline void check_point_set(const std::vector<SpdMatrix>& points) {
  if (points.empty()) fail(ErrorCode::TooFewPoints, "mean of an empty set");
  for (const auto& x : points) check_same_dim(points.front().dim(), x.dim());
}

// Pairwise (fixed-tree) sum; the tree shape depends only on the count.
inline Eigen::MatrixXd tree_sum(std::vector<Eigen::MatrixXd>& terms) {
  std::size_t width = terms.size();
  while (width > 1) {
    const std::size_t half = (width + 1) / 2;
    for (std::size_t i = 0; i + half < width; ++i) terms[i] += terms[i + half];
    width = half;
  }
  return terms.front();
}

}  // namespace detail

/// Riemannian gradient descent P ← exp_P(-η g(P)), g(P) = -(2/N) Σ log_P X_i.
/// Works in whitened coordinates: with S = (1/N) Σ log(P^{-1/2} X_i P^{-1/2}),
/// ‖g‖_P = 2‖S‖_F and the update is P^{1/2} exp(2ηS) P^{1/2}.
inline MeanResult frechet_mean_gd(const std::vector<SpdMatrix>& points, const MeanSolverConfig& cfg = {}) {
  detail::check_point_set(points);
  cfg.validate();
  if (cfg.init) check_same_dim(points.front().dim(), cfg.init->dim());

  SpdMatrix p = cfg.init ? *cfg.init : points.front();
  MeanResult best{p, 0, std::numeric_limits<double>::infinity(), false};
  const double inv_n = 1.0 / static_cast<double>(points.size());
  std::vector<Eigen::MatrixXd> terms(points.size());

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const SqrtFactors f(p);
    for (std::size_t i = 0; i < points.size(); ++i) {
      detail::bump(op_counters().log_map);
      terms[i] = points[i] == p ? Eigen::MatrixXd::Zero(p.dim(), p.dim())
                                : detail::log_spd(f.whiten(points[i].matrix()));
    }
    const Eigen::MatrixXd s = inv_n * detail::tree_sum(terms);
    const double grad_norm = 2.0 * s.norm();
    if (grad_norm < best.grad_norm) best = {p, it, grad_norm, false};
    best.iterations = it;
    if (grad_norm < cfg.grad_tol) {
      best.converged = true;
      return best;
    }
    if (it == cfg.max_iter) break;
    detail::bump(op_counters().exp_map);
    p = SpdMatrix::unchecked(f.color(detail::exp_sym(2.0 * cfg.eta * s)));
  }
  return best;
}

/// Recursive barycentre: P_1 = X_{order[0]}, P_{t+1} = γ(P_t, X_{order[t]}, 1/(t+1)).
inline SpdMatrix frechet_mean_icm(const std::vector<SpdMatrix>& points, const std::vector<std::size_t>& order) {
  detail::check_point_set(points);
  if (order.size() != points.size()) fail(ErrorCode::InvalidArgument, "order must be a permutation of the points");
  std::vector<bool> seen(points.size(), false);
  for (auto i : order) {
    if (i >= points.size() || seen[i]) fail(ErrorCode::InvalidArgument, "order must be a permutation of the points");
    seen[i] = true;
  }
  SpdMatrix p = points[order.front()];
  for (std::size_t t = 1; t < order.size(); ++t)
    p = geodesic(p, points[order[t]], 1.0 / static_cast<double>(t + 1));
  return p;
}

inline SpdMatrix frechet_mean_icm(const std::vector<SpdMatrix>& points) {
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  return frechet_mean_icm(points, order);
}

/// exp of the arithmetic mean of matrix logarithms.
inline SpdMatrix log_euclidean_mean(const std::vector<SpdMatrix>& points) {
  detail::check_point_set(points);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(points.front().dim(), points.front().dim());
  for (const auto& x : points) acc += detail::log_spd(x.matrix());
  return SpdMatrix::unchecked(detail::exp_sym(acc / static_cast<double>(points.size())));
}

inline double squared_distance(const SpdMatrix& a, const SpdMatrix& b, Metric metric) {
  if (metric == Metric::Affine) {
    const double d = dist_affine(a, b);
    return d * d;
  }
  const double d = dist_log_euclidean(a, b);
  return d * d;
}

/// (1/|CL|) Σ d(x, c)² for one cluster.
inline double cluster_dispersion(const std::vector<SpdMatrix>& points, const SpdMatrix& centroid,
                                 Metric metric = Metric::Affine) {
  if (points.empty()) fail(ErrorCode::TooFewPoints, "dispersion of an empty cluster");
  double acc = 0.0;
  if (metric == Metric::Affine) {
    const AffineAnchor anchor(centroid);
    for (const auto& x : points) acc += anchor.dist_sq(x);
  } else {
    const Eigen::MatrixXd log_c = detail::log_spd(centroid.matrix());
    for (const auto& x : points) {
      check_same_dim(centroid.dim(), x.dim());
      acc += (detail::log_spd(x.matrix()) - log_c).squaredNorm();
    }
  }
  return acc / static_cast<double>(points.size());
}

}  // namespace frechet
