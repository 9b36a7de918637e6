#pragma once

// Lloyd's algorithm over an abstract point space, with k-means++ seeding,
// farthest-point repair of empty clusters and best-of-restarts selection.
// The Euclidean instance is the shared engine; the SPD pipelines plug in
// their own distance and centroid rules.

#include <concepts>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frechet/error.hpp"
#include "frechet/rng.hpp"
#include "frechet/spd.hpp"

namespace frechet {

struct KMeansConfig {
  enum class Init { KMeansPP, Provided };

  int k = 2;
  int restarts = 10;
  int max_iter = 100;
  std::uint64_t seed = 0;
  Init init = Init::KMeansPP;
  std::optional<Eigen::MatrixXd> initial_centroids;            ///< Euclidean, dim × k (Init::Provided)
  std::optional<std::vector<SpdMatrix>> initial_spd_centroids;  ///< SPD pipelines (Init::Provided)

  void validate() const {
    if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
    if (restarts < 1) fail(ErrorCode::InvalidArgument, "restarts must be at least 1");
    if (max_iter < 1) fail(ErrorCode::InvalidArgument, "max_iter must be at least 1");
  }
};

/// Cluster assignment plus the centroids and dispersion that produced it.
struct Partition {
  std::vector<int> labels;
  int k = 0;
  Eigen::MatrixXd euclid_centroids;       ///< one column per cluster (Euclidean pipelines)
  std::vector<SpdMatrix> spd_centroids;  ///< SPD centroids, when the pipeline defines them
  double totdisp = 0.0;                  ///< Σ_i (1/|CL_i|) Σ_{x∈CL_i} d(x, c_i)²
  double inertia = 0.0;                  ///< Σ_x d(x, c_label(x))², the quantity Lloyd decreases
  int iterations = 0;
  bool converged = false;
  std::vector<double> inertia_history;  ///< inertia after each centroid update of the winning restart
  std::map<std::string, std::string> metadata;
};

template <typename S>
concept LloydSpace = requires(const S& s, const typename S::Centroid& c, const typename S::Probe& probe,
                              std::size_t i, const std::vector<std::size_t>& members) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.probe(c) } -> std::same_as<typename S::Probe>;
  { s.dist_sq(probe, i) } -> std::convertible_to<double>;
  { s.centroid_of(members) } -> std::same_as<typename S::Centroid>;
  { s.point_as_centroid(i) } -> std::same_as<typename S::Centroid>;
};

template <typename Centroid>
struct LloydRun {
  std::vector<int> labels;
  std::vector<Centroid> centroids;
  double inertia = std::numeric_limits<double>::infinity();
  double totdisp = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;
};

namespace detail {

template <LloydSpace S>
std::vector<typename S::Probe> make_probes(const S& space, const std::vector<typename S::Centroid>& centroids) {
  std::vector<typename S::Probe> probes;
  probes.reserve(centroids.size());
  for (const auto& c : centroids) probes.push_back(space.probe(c));
  return probes;
}

// Nearest centroid, lowest index on ties. Fills per-point squared distances.
template <LloydSpace S>
std::vector<int> assign(const S& space, const std::vector<typename S::Probe>& probes, std::vector<double>& dist_sq) {
  const std::size_t n = space.size();
  std::vector<int> labels(n, 0);
  dist_sq.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < probes.size(); ++j) {
      const double d = space.dist_sq(probes[j], i);
      if (d < best) {
        best = d;
        labels[i] = static_cast<int>(j);
      }
    }
    dist_sq[i] = best;
  }
  return labels;
}

// Each empty cluster seizes the point farthest from its current centroid among clusters that can spare one.
inline void repair_empty(std::vector<int>& labels, std::vector<double>& dist_sq, int k) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];
  for (int j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) continue;
    std::size_t victim = labels.size();
    double far = -1.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (counts[static_cast<std::size_t>(labels[i])] > 1 && dist_sq[i] > far) {
        far = dist_sq[i];
        victim = i;
      }
    if (victim == labels.size()) fail(ErrorCode::TooFewPoints, "cannot repair an empty cluster");
    --counts[static_cast<std::size_t>(labels[victim])];
    labels[victim] = j;
    dist_sq[victim] = 0.0;
    ++counts[static_cast<std::size_t>(j)];
  }
}

inline std::vector<std::vector<std::size_t>> members_of(const std::vector<int>& labels, int k) {
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);
  return members;
}

}  // namespace detail

/// k-means++ seeding: first centre uniform, then proportional to squared distance.
template <LloydSpace S>
std::vector<typename S::Centroid> kmeanspp_init(const S& space, int k, Rng& rng) {
  const std::size_t n = space.size();
  std::vector<typename S::Centroid> centroids;
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  centroids.push_back(space.point_as_centroid(first(rng)));
  std::vector<double> closest(n, std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    const auto probe = space.probe(centroids.back());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      closest[i] = std::min(closest[i], space.dist_sq(probe, i));
      total += closest[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = uniform01(rng) * total;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        target -= closest[i];
        if (target < 0.0 && closest[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    centroids.push_back(space.point_as_centroid(pick));
  }
  return centroids;
}

/// One Lloyd run from the given initial centroids.
template <LloydSpace S>
LloydRun<typename S::Centroid> lloyd_single(const S& space, int k, std::vector<typename S::Centroid> centroids,
                                            int max_iter) {
  LloydRun<typename S::Centroid> run;
  std::vector<double> dist_sq;
  std::vector<int> labels = detail::assign(space, detail::make_probes(space, centroids), dist_sq);
  detail::repair_empty(labels, dist_sq, k);

  for (int it = 1; it <= max_iter; ++it) {
    const auto members = detail::members_of(labels, k);
    for (int j = 0; j < k; ++j) centroids[static_cast<std::size_t>(j)] = space.centroid_of(members[static_cast<std::size_t>(j)]);
    const auto probes = detail::make_probes(space, centroids);

    double inertia = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
      inertia += space.dist_sq(probes[static_cast<std::size_t>(labels[i])], i);
    run.history.push_back(inertia);
    run.iterations = it;

    std::vector<int> next = detail::assign(space, probes, dist_sq);
    detail::repair_empty(next, dist_sq, k);
    if (next == labels) {
      run.converged = true;
      break;
    }
    labels = std::move(next);
  }

  // Final centroids and scores are consistent with the returned labels.
  const auto members = detail::members_of(labels, k);
  if (!run.converged) {
    for (int j = 0; j < k; ++j) centroids[static_cast<std::size_t>(j)] = space.centroid_of(members[static_cast<std::size_t>(j)]);
  }
  const auto probes = detail::make_probes(space, centroids);
  run.inertia = 0.0;
  run.totdisp = 0.0;
  for (int j = 0; j < k; ++j) {
    double acc = 0.0;
    for (auto i : members[static_cast<std::size_t>(j)]) acc += space.dist_sq(probes[static_cast<std::size_t>(j)], i);
    run.inertia += acc;
    run.totdisp += acc / static_cast<double>(members[static_cast<std::size_t>(j)].size());
  }
  run.labels = std::move(labels);
  run.centroids = std::move(centroids);
  return run;
}

/// Best-of-restarts Lloyd. Restart r is seeded from derive_seed(cfg.seed, r); the
/// run with the lowest inertia wins, earliest restart on ties.
template <LloydSpace S>
LloydRun<typename S::Centroid> lloyd_restarts(const S& space, const KMeansConfig& cfg,
                                              const std::optional<std::vector<typename S::Centroid>>& provided) {
  cfg.validate();
  if (space.size() < static_cast<std::size_t>(cfg.k))
    fail(ErrorCode::TooFewPoints, std::to_string(space.size()) + " points for k = " + std::to_string(cfg.k));

  if (cfg.init == KMeansConfig::Init::Provided) {
    if (!provided || provided->size() != static_cast<std::size_t>(cfg.k))
      fail(ErrorCode::InvalidArgument, "provided initialisation must contain exactly k centroids");
    return lloyd_single(space, cfg.k, *provided, cfg.max_iter);
  }

  LloydRun<typename S::Centroid> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    auto run = lloyd_single(space, cfg.k, kmeanspp_init(space, cfg.k, rng), cfg.max_iter);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

/// Points stored column-wise.
class EuclideanSpace {
 public:
  using Centroid = Eigen::VectorXd;
  using Probe = Eigen::VectorXd;

  explicit EuclideanSpace(const Eigen::MatrixXd& points) : points_(points) {}

  std::size_t size() const { return static_cast<std::size_t>(points_.cols()); }
  Probe probe(const Centroid& c) const { return c; }
  double dist_sq(const Probe& c, std::size_t i) const {
    return (points_.col(static_cast<Eigen::Index>(i)) - c).squaredNorm();
  }
  Centroid centroid_of(const std::vector<std::size_t>& members) const {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(points_.rows());
    for (auto i : members) acc += points_.col(static_cast<Eigen::Index>(i));
    return acc / static_cast<double>(members.size());
  }
  Centroid point_as_centroid(std::size_t i) const { return points_.col(static_cast<Eigen::Index>(i)); }

 private:
  const Eigen::MatrixXd& points_;
};

/// Euclidean k-means on the columns of `points` (dim × N).
inline Partition lloyd_euclid(const Eigen::MatrixXd& points, const KMeansConfig& cfg) {
  if (points.cols() == 0) fail(ErrorCode::TooFewPoints, "empty dataset");
  const EuclideanSpace space(points);
  std::optional<std::vector<Eigen::VectorXd>> provided;
  if (cfg.init == KMeansConfig::Init::Provided && cfg.initial_centroids) {
    if (cfg.initial_centroids->rows() != points.rows())
      fail(ErrorCode::DimMismatch, "initial centroids have the wrong dimension");
    provided.emplace();
    for (Eigen::Index j = 0; j < cfg.initial_centroids->cols(); ++j) provided->push_back(cfg.initial_centroids->col(j));
  }
  auto run = lloyd_restarts(space, cfg, provided);

  Partition out;
  out.k = cfg.k;
  out.labels = std::move(run.labels);
  out.euclid_centroids.resize(points.rows(), cfg.k);
  for (int j = 0; j < cfg.k; ++j) out.euclid_centroids.col(j) = run.centroids[static_cast<std::size_t>(j)];
  out.totdisp = run.totdisp;
  out.inertia = run.inertia;
  out.iterations = run.iterations;
  out.converged = run.converged;
  out.inertia_history = std::move(run.history);
  return out;
}

inline Partition lloyd_euclid(const std::vector<Eigen::VectorXd>& points, const KMeansConfig& cfg) {
  if (points.empty()) fail(ErrorCode::TooFewPoints, "empty dataset");
  Eigen::MatrixXd cols(points.front().size(), static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != cols.rows()) fail(ErrorCode::DimMismatch, "points have different dimensions");
    cols.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return lloyd_euclid(cols, cfg);
}

}  // namespace frechet
