#pragma once

// Synthetic SPD benchmarks: samples in Riemannian balls, ratio-constrained ball layouts,
// and the mirrored four-ball layout around the identity.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "frechet/error.hpp"
#include "frechet/rng.hpp"
#include "frechet/spd.hpp"

namespace frechet {

struct LabeledDataset {
  std::vector<SpdMatrix> points;
  std::vector<int> labels;
  std::vector<SpdMatrix> centers;
  std::vector<double> radii;
  nlohmann::json provenance = nlohmann::json::object();
};

/// Samples uniform in the tangent ball of radius rho at C, pushed through exp_C:
/// direction uniform on the unit sphere of ⟨·,·⟩_C, radius rho·U^{1/m} with m = n(n+1)/2.
inline std::vector<SpdMatrix> sample_ball(const SpdMatrix& c, double rho, int count, std::uint64_t seed) {
  if (!(rho > 0.0) || !std::isfinite(rho)) fail(ErrorCode::InvalidArgument, "ball radius must be positive");
  if (count < 0) fail(ErrorCode::InvalidArgument, "sample count must be non-negative");
  const int n = c.dim();
  const double m = n * (n + 1) / 2.0;
  const SqrtFactors f(c);
  Rng rng(seed);
  std::vector<SpdMatrix> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    Eigen::MatrixXd w = isotropic_symmetric(n, rng);
    double len = w.norm();
    while (len == 0.0) {
      w = isotropic_symmetric(n, rng);
      len = w.norm();
    }
    const double r = rho * std::pow(uniform01(rng), 1.0 / m);
    out.push_back(SpdMatrix::unchecked(f.color(detail::exp_sym((r / len) * w))));
  }
  return out;
}

struct BallConfig {
  int k = 2;
  int n = 4;
  double rho_lo = 0.8;
  double rho_hi = 1.2;
  double d_low = 1.1;
  double d_up = 3.0;
  int samples_per_ball = 400;
  double center_scale = 2.0;  ///< ‖V‖_F of each centre's log
  std::uint64_t seed = 0;
  int max_retries = 10000;

  void validate() const {
    if (k < 1) fail(ErrorCode::InvalidArgument, "k must be at least 1");
    if (n < 1) fail(ErrorCode::InvalidArgument, "n must be at least 1");
    if (!(rho_lo > 0.0 && rho_lo <= rho_hi)) fail(ErrorCode::InvalidArgument, "need 0 < rho_lo <= rho_hi");
    if (!(d_low > 0.0 && d_low <= d_up)) fail(ErrorCode::InvalidArgument, "need 0 < d_low <= d_up");
    if (samples_per_ball < 1) fail(ErrorCode::InvalidArgument, "samples_per_ball must be at least 1");
    if (!(center_scale >= 0.0)) fail(ErrorCode::InvalidArgument, "center_scale must be non-negative");
    if (max_retries < 0) fail(ErrorCode::InvalidArgument, "max_retries must be non-negative");
  }

  nlohmann::json to_json() const {
    return {{"generator", "balls"},      {"k", k},
            {"n", n},                    {"radius_range", {rho_lo, rho_hi}},
            {"d_low", d_low},            {"d_up", d_up},
            {"samples_per_ball", samples_per_ball},
            {"center_scale", center_scale},
            {"seed", seed},              {"max_retries", max_retries},
            {"sampling", "uniform in the tangent ball at the centre, radius rho*U^(1/m)"}};
  }
};

/// d(C_i, C_j) / (ρ_i + ρ_j) for the normalised-gap constraint d_low ≤ ratio ≤ d_up.
inline double ball_gap_ratio(const SpdMatrix& ci, double ri, const SpdMatrix& cj, double rj) {
  return dist_affine(ci, cj) / (ri + rj);
}

/// Centres are accepted one at a time against all previously accepted ones. A centre that fails
/// 100 consecutive draws restarts the layout. Each rejected draw spends one retry.
inline LabeledDataset gen_ball_config(const BallConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, 0));
  std::vector<SpdMatrix> centers;
  std::vector<double> radii;
  int retries = 0;
  int streak = 0;

  // Least-violating rejected pair, for the error message.
  double best_violation = std::numeric_limits<double>::infinity();
  std::string best_msg;

  while (static_cast<int>(centers.size()) < cfg.k) {
    Eigen::MatrixXd v = gaussian_symmetric(cfg.n, rng);
    const double len = v.norm();
    if (len > 0.0) v *= cfg.center_scale / len;
    const SpdMatrix c = SpdMatrix::unchecked(detail::exp_sym(v));
    const double r = cfg.rho_lo + (cfg.rho_hi - cfg.rho_lo) * uniform01(rng);

    bool ok = true;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double ratio = ball_gap_ratio(centers[j], radii[j], c, r);
      if (ratio < cfg.d_low || ratio > cfg.d_up) {
        ok = false;
        const double violation = ratio < cfg.d_low ? cfg.d_low - ratio : ratio - cfg.d_up;
        if (violation < best_violation) {
          best_violation = violation;
          best_msg = "pair (" + std::to_string(j) + ", " + std::to_string(centers.size()) + ") ratio " +
                     std::to_string(ratio) + " outside [" + std::to_string(cfg.d_low) + ", " +
                     std::to_string(cfg.d_up) + "]";
        }
        break;
      }
    }
    if (ok) {
      centers.push_back(c);
      radii.push_back(r);
      streak = 0;
      continue;
    }
    if (++retries > cfg.max_retries)
      fail(ErrorCode::RetriesExhausted, "centre rejection exhausted " + std::to_string(cfg.max_retries) +
                                            " retries; tightest violation: " + best_msg);
    if (++streak >= 100) {
      centers.clear();
      radii.clear();
      streak = 0;
    }
  }

  LabeledDataset out;
  out.centers = centers;
  out.radii = radii;
  for (int b = 0; b < cfg.k; ++b) {
    const auto pts = sample_ball(centers[static_cast<std::size_t>(b)], radii[static_cast<std::size_t>(b)],
                                 cfg.samples_per_ball, derive_seed(cfg.seed, 1, static_cast<std::uint64_t>(b)));
    for (const auto& p : pts) {
      out.points.push_back(p);
      out.labels.push_back(b);
    }
  }
  out.provenance = cfg.to_json();
  out.provenance["center_retries"] = retries;
  return out;
}

struct MirrorConfig {
  int n = 4;
  double norm = 12.0;
  double perturb_var = 0.1;
  double min_gap = 2.0;
  int samples_per_ball = 500;
  std::uint64_t seed = 0;
  int max_retries = 10000;

  nlohmann::json to_json() const {
    return {{"generator", "mirror"},
            {"n", n},
            {"norm", norm},
            {"perturb_var", perturb_var},
            {"min_gap", min_gap},
            {"samples_per_ball", samples_per_ball},
            {"seed", seed},
            {"max_retries", max_retries},
            {"radius", 1.0},
            {"sampling", "uniform in the tangent ball at the centre, radius U^(1/m)"}};
  }
};

/// C1 = exp(V1) with ‖V1‖_F = norm, C2 = exp(V1 + Δ) with d(C1, C2) > min_gap,
/// C3 = C1⁻¹, C4 = C2⁻¹; four unit balls, labels 0..3.
inline LabeledDataset gen_mirror_config(const MirrorConfig& cfg) {
  if (cfg.n < 2) fail(ErrorCode::InvalidArgument, "mirror configuration needs n >= 2");
  if (!(cfg.norm > 0.0) || !(cfg.perturb_var > 0.0) || cfg.samples_per_ball < 1)
    fail(ErrorCode::InvalidArgument, "invalid mirror configuration");
  Rng rng(derive_seed(cfg.seed, 0));

  Eigen::MatrixXd v1 = gaussian_symmetric(cfg.n, rng);
  v1 *= cfg.norm / v1.norm();
  const SpdMatrix c1 = SpdMatrix::unchecked(detail::exp_sym(v1));

  Eigen::MatrixXd v2;
  double gap = 0.0;
  int retries = 0;
  for (;;) {
    v2 = v1 + gaussian_symmetric(cfg.n, rng, cfg.perturb_var);
    gap = dist_affine(c1, SpdMatrix::unchecked(detail::exp_sym(v2)));
    if (gap > cfg.min_gap) break;
    if (++retries > cfg.max_retries)
      fail(ErrorCode::RetriesExhausted, "no perturbation reached d(C1, C2) > " + std::to_string(cfg.min_gap) +
                                            "; last gap " + std::to_string(gap));
  }

  LabeledDataset out;
  out.centers = {c1, SpdMatrix::unchecked(detail::exp_sym(v2)), SpdMatrix::unchecked(detail::exp_sym(-v1)),
                 SpdMatrix::unchecked(detail::exp_sym(-v2))};
  out.radii.assign(4, 1.0);
  for (int b = 0; b < 4; ++b) {
    const auto pts = sample_ball(out.centers[static_cast<std::size_t>(b)], 1.0, cfg.samples_per_ball,
                                 derive_seed(cfg.seed, 1, static_cast<std::uint64_t>(b)));
    for (const auto& p : pts) {
      out.points.push_back(p);
      out.labels.push_back(b);
    }
  }
  out.provenance = cfg.to_json();
  out.provenance["gap_retries"] = retries;
  out.provenance["d_c1_c2"] = gap;
  return out;
}

}  // namespace frechet
