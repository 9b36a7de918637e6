#pragma once

// The four SPD clustering pipelines built on the Lloyd engine:
// IRC (affine distance, gradient-descent means), ARC (affine distance, ICM means),
// LEC (Euclidean k-means on log coordinates) and FMC (Euclidean k-means on a Fréchet embedding).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "frechet/embed.hpp"
#include "frechet/error.hpp"
#include "frechet/kmeans.hpp"
#include "frechet/mean.hpp"
#include "frechet/rng.hpp"
#include "frechet/spd.hpp"

namespace frechet {

/// Affine-invariant Lloyd space; MeanFn maps a member list to a centroid.
template <typename MeanFn>
class SpdSpace {
 public:
  using Centroid = SpdMatrix;
  using Probe = AffineAnchor;

  SpdSpace(const std::vector<SpdMatrix>& data, MeanFn mean) : data_(data), mean_(std::move(mean)) {}

  std::size_t size() const { return data_.size(); }
  Probe probe(const Centroid& c) const { return AffineAnchor(c); }
  double dist_sq(const Probe& probe, std::size_t i) const { return probe.dist_sq(data_[i]); }
  Centroid centroid_of(const std::vector<std::size_t>& members) const {
    std::vector<SpdMatrix> pts;
    pts.reserve(members.size());
    for (auto i : members) pts.push_back(data_[i]);
    return mean_(pts, members);
  }
  Centroid point_as_centroid(std::size_t i) const { return data_[i]; }

 private:
  const std::vector<SpdMatrix>& data_;
  MeanFn mean_;
};

namespace detail {

inline void check_dataset(const std::vector<SpdMatrix>& data, int k) {
  if (data.empty()) fail(ErrorCode::TooFewPoints, "empty dataset");
  if (data.size() < static_cast<std::size_t>(k))
    fail(ErrorCode::TooFewPoints, std::to_string(data.size()) + " points for k = " + std::to_string(k));
  for (const auto& x : data) check_same_dim(data.front().dim(), x.dim());
}

template <typename S>
Partition spd_partition(const S& space, const KMeansConfig& cfg) {
  auto run = lloyd_restarts(space, cfg, cfg.initial_spd_centroids);
  Partition out;
  out.k = cfg.k;
  out.labels = std::move(run.labels);
  out.spd_centroids = std::move(run.centroids);
  out.totdisp = run.totdisp;
  out.inertia = run.inertia;
  out.iterations = run.iterations;
  out.converged = run.converged;
  out.inertia_history = std::move(run.history);
  return out;
}

inline void kmeans_metadata(Partition& out, const KMeansConfig& cfg) {
  out.metadata["init"] = cfg.init == KMeansConfig::Init::Provided ? "provided" : "kmeans++";
  out.metadata["restarts"] = std::to_string(cfg.init == KMeansConfig::Init::Provided ? 1 : cfg.restarts);
  out.metadata["max_iter"] = std::to_string(cfg.max_iter);
  out.metadata["seed"] = std::to_string(cfg.seed);
}

}  // namespace detail

/// Intrinsic Riemannian clustering.
inline Partition cluster_irc(const std::vector<SpdMatrix>& data, const KMeansConfig& cfg,
                             const MeanSolverConfig& mean_cfg = {}) {
  cfg.validate();
  mean_cfg.validate();
  detail::check_dataset(data, cfg.k);
  int unconverged = 0;
  auto mean = [&mean_cfg, &unconverged](const std::vector<SpdMatrix>& pts, const std::vector<std::size_t>&) {
    MeanResult r = frechet_mean_gd(pts, mean_cfg);
    if (!r.converged) ++unconverged;
    return r.mean;
  };
  const SpdSpace space(data, mean);
  Partition out = detail::spd_partition(space, cfg);
  detail::kmeans_metadata(out, cfg);
  out.metadata["algorithm"] = "IRC";
  out.metadata["mean"] = "gd";
  out.metadata["eta"] = std::to_string(mean_cfg.eta);
  out.metadata["grad_tol"] = std::to_string(mean_cfg.grad_tol);
  out.metadata["mean_unconverged"] = std::to_string(unconverged);
  out.metadata["totdisp_metric"] = "affine";
  return out;
}

/// Approximate Riemannian clustering. Without a seed the ICM visits cluster members
/// in dataset order; with one, each centroid update uses a seeded shuffle.
inline Partition cluster_arc(const std::vector<SpdMatrix>& data, const KMeansConfig& cfg,
                             std::optional<std::uint64_t> icm_order_seed = std::nullopt) {
  cfg.validate();
  detail::check_dataset(data, cfg.k);
  auto mean = [icm_order_seed](const std::vector<SpdMatrix>& pts, const std::vector<std::size_t>& members) {
    if (!icm_order_seed) return frechet_mean_icm(pts);
    const std::uint64_t s = derive_seed(*icm_order_seed, members.front(), members.size());
    return frechet_mean_icm(pts, shuffled_order(pts.size(), s));
  };
  const SpdSpace space(data, mean);
  Partition out = detail::spd_partition(space, cfg);
  detail::kmeans_metadata(out, cfg);
  out.metadata["algorithm"] = "ARC";
  out.metadata["mean"] = "icm";
  out.metadata["icm_order"] = icm_order_seed ? "shuffled:" + std::to_string(*icm_order_seed) : "identity";
  out.metadata["totdisp_metric"] = "affine";
  return out;
}

/// SymBasis coordinates of log(R^{-1/2} X R^{-1/2}), one column per point.
inline Eigen::MatrixXd log_coordinates(const std::vector<SpdMatrix>& data, const SpdMatrix& base) {
  const SymBasis basis(base.dim());
  const SqrtFactors f(base);
  Eigen::MatrixXd out(basis.size(), static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    check_same_dim(base.dim(), data[i].dim());
    out.col(static_cast<Eigen::Index>(i)) = basis.coords(detail::log_spd(f.whiten(data[i].matrix())));
  }
  return out;
}

/// Log-Euclidean clustering at base point R (identity by default). Centroids are reported
/// as coordinate vectors and mapped back through R^{1/2} exp(·) R^{1/2}.
inline Partition cluster_lec(const std::vector<SpdMatrix>& data, const KMeansConfig& cfg,
                             const std::optional<SpdMatrix>& base_point = std::nullopt) {
  cfg.validate();
  detail::check_dataset(data, cfg.k);
  const SpdMatrix base = base_point ? *base_point : SpdMatrix::identity(data.front().dim());
  const Eigen::MatrixXd coords = log_coordinates(data, base);

  Partition out = lloyd_euclid(coords, cfg);
  const SymBasis basis(base.dim());
  const SqrtFactors f(base);
  for (Eigen::Index j = 0; j < out.euclid_centroids.cols(); ++j)
    out.spd_centroids.push_back(
        SpdMatrix::unchecked(f.color(detail::exp_sym(basis.from_coords(out.euclid_centroids.col(j))))));
  detail::kmeans_metadata(out, cfg);
  out.metadata["algorithm"] = "LEC";
  out.metadata["base_point"] = base_point ? "custom" : "identity";
  out.metadata["totdisp_metric"] = "log-euclidean";
  return out;
}

/// Fréchet-map clustering: embed once, run Euclidean k-means in R^ℓ, then score the induced
/// partition under the affine metric with ICM centroids.
inline Partition cluster_fmc(const std::vector<SpdMatrix>& data, const FrechetMapSpec& spec, const KMeansConfig& cfg) {
  cfg.validate();
  detail::check_dataset(data, cfg.k);
  check_same_dim(spec.dim(), data.front().dim());
  const Eigen::MatrixXd embedded = embed_dataset(spec, data);

  Partition out = lloyd_euclid(embedded, cfg);
  std::vector<std::vector<SpdMatrix>> groups(static_cast<std::size_t>(cfg.k));
  for (std::size_t i = 0; i < data.size(); ++i) groups[static_cast<std::size_t>(out.labels[i])].push_back(data[i]);
  out.totdisp = 0.0;
  for (const auto& g : groups) {
    const SpdMatrix c = frechet_mean_icm(g);
    out.totdisp += cluster_dispersion(g, c, Metric::Affine);
    out.spd_centroids.push_back(c);
  }
  detail::kmeans_metadata(out, cfg);
  out.metadata["algorithm"] = spec.p() == 1 ? "FMC1" : "FMC2";
  out.metadata["refs"] = std::to_string(spec.size());
  out.metadata["totdisp_metric"] = "affine";
  out.metadata["dispersion_mean"] = "icm";
  return out;
}

}  // namespace frechet
