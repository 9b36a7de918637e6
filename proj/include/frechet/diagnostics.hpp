#pragma once

// Self-check suites behind `diagnose euclid` and `diagnose spd`: randomised property
// checks whose results are returned as JSON reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "frechet/embed.hpp"
#include "frechet/euclid.hpp"
#include "frechet/rng.hpp"
#include "frechet/spd.hpp"

namespace frechet {

namespace detail {

struct Check {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst = 0.0;  ///< largest observed error (check-specific)
  double tolerance = 0.0;

  void record(double err) {
    ++trials;
    worst = std::max(worst, err);
    if (!(err <= tolerance)) ++failures;
  }
  void record_bool(bool ok) {
    ++trials;
    if (!ok) ++failures;
  }
  nlohmann::json to_json() const {
    return {{"name", name},   {"trials", trials},       {"failures", failures},
            {"worst", worst}, {"tolerance", tolerance}, {"passed", failures == 0}};
  }
};

inline nlohmann::json report(const std::string& suite, std::uint64_t seed, const std::vector<Check>& checks) {
  nlohmann::json j = {{"suite", suite}, {"seed", seed}, {"checks", nlohmann::json::array()}};
  bool all = true;
  for (const auto& c : checks) {
    j["checks"].push_back(c.to_json());
    all = all && c.failures == 0;
  }
  j["passed"] = all;
  return j;
}

inline SpdMatrix random_spd(int n, Rng& rng, double scale = 1.0) {
  return SpdMatrix::unchecked(exp_sym(scale * isotropic_symmetric(n, rng)));
}

}  // namespace detail

/// Multilateration round trips, paraboloid membership of images, and separability of
/// images of disjoint balls on one side of the reference hyperplane, in R^2 and R^3.
inline nlohmann::json diagnose_euclid(std::uint64_t seed, int instances = 50) {
  using euclid::EuclidRefs;
  using euclid::embed_euclid;
  Rng rng(seed);
  detail::Check round_trip{"multilateration_round_trip", 0, 0, 0.0, 1e-8};
  detail::Check membership{"image_in_paraboloid", 0, 0, 0.0, 0.0};
  detail::Check separable{"ball_images_separable", 0, 0, 0.0, 0.0};

  for (int m : {2, 3}) {
    for (int t = 0; t < instances; ++t) {
      EuclidRefs refs{Eigen::MatrixXd::Zero(m, m), 2};
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) refs.points(i, j) = 3.0 * (2.0 * uniform01(rng) - 1.0);
      Eigen::VectorXd x(m);
      for (int i = 0; i < m; ++i) x(i) = 3.0 * (2.0 * uniform01(rng) - 1.0);
      try {
        const Eigen::VectorXd d = embed_euclid(refs, x);
        const auto inv = euclid::invert_multilateration(refs, d);
        double err = std::numeric_limits<double>::infinity();
        for (const auto& s : inv.solutions) err = std::min(err, (s - x).norm() / std::max(1.0, x.norm()));
        round_trip.record(err);
        membership.record_bool(euclid::paraboloid_membership(refs, d));
      } catch (const Error&) {
        // Nearly degenerate reference draw; not a property violation.
      }
    }
  }

  // Two disjoint balls strictly on one side of Aff(refs) in R^3.
  for (int t = 0; t < instances / 5 + 1; ++t) {
    const int m = 3;
    EuclidRefs refs{Eigen::MatrixXd::Zero(m, m), 2};
    for (int i = 0; i < m; ++i) refs.points.col(i) << 3.0 * (2.0 * uniform01(rng) - 1.0), 3.0 * (2.0 * uniform01(rng) - 1.0), 0.0;
    Eigen::MatrixXd s1(m, 60), s2(m, 60);
    const Eigen::Vector3d c1(-2.0, 0.0, 3.0), c2(2.0, 0.0, 3.0);
    for (int k = 0; k < 60; ++k) {
      Eigen::Vector3d u1, u2;
      do {
        for (int i = 0; i < 3; ++i) u1(i) = 2.0 * uniform01(rng) - 1.0;
      } while (u1.norm() > 1.0);
      do {
        for (int i = 0; i < 3; ++i) u2(i) = 2.0 * uniform01(rng) - 1.0;
      } while (u2.norm() > 1.0);
      s1.col(k) = embed_euclid(refs, c1 + u1);
      s2.col(k) = embed_euclid(refs, c2 + u2);
    }
    try {
      separable.record_bool(euclid::hyperplane_separable(s1, s2));
    } catch (const Error&) {
    }
  }
  return detail::report("euclid", seed, {round_trip, membership, separable});
}

/// Affine invariance, inversion isometry, triangle inequality, exp/log round trip,
/// generic full rank of the Jacobian with ℓ ≥ m references, and the Lipschitz bound.
inline nlohmann::json diagnose_spd(std::uint64_t seed, int instances = 50, const std::vector<int>& dims = {2, 3, 5}) {
  Rng rng(seed);
  detail::Check invariance{"affine_invariance", 0, 0, 0.0, 1e-8};
  detail::Check inversion{"inversion_isometry", 0, 0, 0.0, 1e-8};
  detail::Check triangle{"triangle_inequality", 0, 0, 0.0, 1e-9};
  detail::Check round{"exp_log_round_trip", 0, 0, 0.0, 1e-8};
  detail::Check rank{"jacobian_full_rank", 0, 0, 0.0, 0.0};
  detail::Check lipschitz{"lipschitz_bound", 0, 0, 0.0, 0.0};

  for (int n : dims) {
    for (int t = 0; t < instances; ++t) {
      const SpdMatrix p = detail::random_spd(n, rng), q = detail::random_spd(n, rng), r = detail::random_spd(n, rng);
      const double dpq = dist_affine(p, q);
      Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) += 0.5 * normal01(rng);
      if (std::abs(a.determinant()) > 1e-3) {
        const SpdMatrix pa = SpdMatrix::unchecked(symmetrize(a.transpose() * p.matrix() * a));
        const SpdMatrix qa = SpdMatrix::unchecked(symmetrize(a.transpose() * q.matrix() * a));
        invariance.record(std::abs(dist_affine(pa, qa) - dpq) / std::max(1.0, dpq));
      }
      const SpdMatrix pi = SpdMatrix::unchecked(symmetrize(p.matrix().inverse()));
      const SpdMatrix qi = SpdMatrix::unchecked(symmetrize(q.matrix().inverse()));
      inversion.record(std::abs(dist_affine(pi, qi) - dpq) / std::max(1.0, dpq));
      triangle.record(std::max(0.0, dpq - dist_affine(p, r) - dist_affine(r, q)));
      const SpdMatrix back = exp_map(p, log_map(p, q));
      round.record((back.matrix() - q.matrix()).norm() / q.matrix().norm());
    }
    if (n <= 3) {
      const int m = n * (n + 1) / 2;
      std::vector<SpdMatrix> refs;
      for (int i = 0; i < m + 1; ++i) refs.push_back(detail::random_spd(n, rng, 1.5));
      const FrechetMapSpec spec(refs, 2);
      rank.record_bool(local_rank(spec, detail::random_spd(n, rng)) == m);
      std::vector<SpdMatrix> data;
      for (int i = 0; i < 30; ++i) data.push_back(detail::random_spd(n, rng));
      for (int p : {1, 2}) {
        const FrechetMapSpec sp(refs, p);
        const DistortionSummary s = distortion_stats(sp, data, 200, rng);
        lipschitz.record_bool(s.lipschitz_bound_ok);
      }
    }
  }
  return detail::report("spd", seed, {invariance, inversion, triangle, round, rank, lipschitz});
}

}  // namespace frechet
