#pragma once

// Reference-point selection for Fréchet maps: uniform draws from the dataset and the
// mean-based placement along geodesics between approximate cluster centres.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "frechet/clustering.hpp"
#include "frechet/error.hpp"
#include "frechet/kmeans.hpp"
#include "frechet/mean.hpp"
#include "frechet/rng.hpp"
#include "frechet/spd.hpp"

namespace frechet {

/// ℓ distinct dataset elements, deterministic per seed.
inline std::vector<SpdMatrix> select_random(const std::vector<SpdMatrix>& data, int count, std::uint64_t seed) {
  if (count < 1) fail(ErrorCode::InvalidArgument, "need at least one reference point");
  if (static_cast<std::size_t>(count) > data.size())
    fail(ErrorCode::TooFewPoints, "cannot pick " + std::to_string(count) + " references from " +
                                      std::to_string(data.size()) + " points");
  Rng rng(seed);
  std::vector<SpdMatrix> out;
  for (auto i : sample_without_replacement(data.size(), static_cast<std::size_t>(count), rng)) out.push_back(data[i]);
  return out;
}

/// Nearest-rank quantile of the distances from `mean` to min(n_rho, |cluster|) sampled members.
inline double estimate_radius(const std::vector<SpdMatrix>& cluster, const SpdMatrix& mean, int n_rho,
                              double quantile, std::uint64_t seed) {
  if (cluster.empty()) fail(ErrorCode::TooFewPoints, "radius of an empty cluster");
  if (n_rho < 1) fail(ErrorCode::InvalidArgument, "n_rho must be at least 1");
  if (!(quantile > 0.0 && quantile <= 1.0)) fail(ErrorCode::InvalidArgument, "quantile must lie in (0, 1]");
  const std::size_t count = std::min(cluster.size(), static_cast<std::size_t>(n_rho));
  std::vector<std::size_t> idx;
  if (count == cluster.size()) {
    idx = identity_order(count);
  } else {
    Rng rng(seed);
    idx = sample_without_replacement(cluster.size(), count, rng);
  }
  const AffineAnchor anchor(mean);
  std::vector<double> d;
  d.reserve(count);
  for (auto i : idx) d.push_back(anchor.dist(cluster[i]));
  std::sort(d.begin(), d.end());
  const double rank = std::ceil(quantile * static_cast<double>(count) - 1e-9);
  const std::size_t pos = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(count))) - 1;
  return d[pos];
}

struct PrincipledParams {
  double t_close = 5.0;
  double t_far = 0.35;
  int n_rho = 50;
  double eps_d = 2.5;
  double quantile = 0.90;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(t_close > 1.0)) fail(ErrorCode::InvalidArgument, "t_close must exceed 1");
    if (!(t_far >= 0.0 && t_far < 1.0)) fail(ErrorCode::InvalidArgument, "t_far must lie in [0, 1)");
    if (n_rho < 1) fail(ErrorCode::InvalidArgument, "n_rho must be at least 1");
    if (!(eps_d > 0.0)) fail(ErrorCode::InvalidArgument, "eps_d must be positive");
    if (!(quantile > 0.0 && quantile <= 1.0)) fail(ErrorCode::InvalidArgument, "quantile must lie in (0, 1]");
  }
};

struct PairPlacement {
  int i = 0;
  int j = 0;
  double mean_distance = 0.0;  ///< d(M_i, M_j)
  double radius_sum = 0.0;     ///< ρ_i + ρ_j
  double ratio = 0.0;          ///< mean_distance / radius_sum
  bool close = false;          ///< ratio < eps_d
  double t = 0.0;
};

struct PrincipledReport {
  std::vector<int> lec_labels;
  std::vector<SpdMatrix> means;
  std::vector<double> radii;
  std::vector<PairPlacement> pairs;
  bool degenerate = false;  ///< placement impossible; refs were drawn at random instead
  std::string warning;
};

struct PrincipledSelection {
  std::vector<SpdMatrix> refs;
  PrincipledReport report;
};

/// Two references per unordered cluster pair (i < j), placed at ±t_ij on the geodesic through the
/// pair midpoint toward M_j, with t measured in half-gaps. Output order: (0,1)+, (0,1)-, (0,2)+, ...
inline PrincipledSelection select_principled(const std::vector<SpdMatrix>& data, int k, const PrincipledParams& params,
                                             const KMeansConfig& kmeans_cfg = {}) {
  params.validate();
  if (k < 2) fail(ErrorCode::InvalidArgument, "principled selection needs k >= 2");
  if (data.size() < static_cast<std::size_t>(k))
    fail(ErrorCode::TooFewPoints, std::to_string(data.size()) + " points for k = " + std::to_string(k));

  PrincipledSelection out;
  auto& rep = out.report;
  const int count = k * (k - 1);
  auto fall_back = [&](const std::string& why) {
    rep.degenerate = true;
    rep.warning = why + "; falling back to random references";
    out.refs = select_random(data, std::min<int>(count, static_cast<int>(data.size())), params.seed);
    return out;
  };

  KMeansConfig cfg = kmeans_cfg;
  cfg.k = k;
  cfg.init = KMeansConfig::Init::KMeansPP;
  rep.lec_labels = cluster_lec(data, cfg).labels;

  std::vector<std::vector<SpdMatrix>> groups(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < data.size(); ++i) groups[static_cast<std::size_t>(rep.lec_labels[i])].push_back(data[i]);
  for (int c = 0; c < k; ++c) {
    const auto& g = groups[static_cast<std::size_t>(c)];
    if (g.empty()) return fall_back("cluster " + std::to_string(c) + " is empty");
    rep.means.push_back(frechet_mean_icm(g));
    rep.radii.push_back(estimate_radius(g, rep.means.back(), params.n_rho, params.quantile,
                                        derive_seed(params.seed, static_cast<std::uint64_t>(c))));
  }

  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      PairPlacement pp;
      pp.i = i;
      pp.j = j;
      pp.mean_distance = dist_affine(rep.means[static_cast<std::size_t>(i)], rep.means[static_cast<std::size_t>(j)]);
      pp.radius_sum = rep.radii[static_cast<std::size_t>(i)] + rep.radii[static_cast<std::size_t>(j)];
      if (pp.mean_distance < 1e-9)
        return fall_back("means of clusters " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      pp.ratio = pp.radius_sum > 0.0 ? pp.mean_distance / pp.radius_sum : std::numeric_limits<double>::infinity();
      pp.close = pp.ratio < params.eps_d;
      pp.t = pp.close ? params.t_close : params.t_far;
      rep.pairs.push_back(pp);
    }

  for (const auto& pp : rep.pairs) {
    const SpdMatrix& mj = rep.means[static_cast<std::size_t>(pp.j)];
    const SpdMatrix mid = geodesic(rep.means[static_cast<std::size_t>(pp.i)], mj, 0.5);
    out.refs.push_back(geodesic(mid, mj, pp.t));
    out.refs.push_back(geodesic(mid, mj, -pp.t));
  }
  return out;
}

}  // namespace frechet
