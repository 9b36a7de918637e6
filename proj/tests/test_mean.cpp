#include <cmath>

#include <gtest/gtest.h>

#include "frechet/mean.hpp"
#include "test_support.hpp"

using namespace frechet;
using testsupport::Gen;
using testsupport::oracle_fn;
using testsupport::rel_err;

namespace {

// Riemannian gradient residual Σ log(M^{-1/2} X M^{-1/2}), using Eigen's solver only.
double stationarity(const SpdMatrix& m, const std::vector<SpdMatrix>& pts) {
  const Eigen::MatrixXd is = oracle_fn(m.matrix(), [](double x) { return 1.0 / std::sqrt(x); });
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m.dim(), m.dim());
  for (const auto& x : pts) acc += oracle_fn(is * x.matrix() * is, [](double v) { return std::log(v); });
  return acc.norm() / static_cast<double>(pts.size());
}

Eigen::MatrixXd oracle_midpoint(const SpdMatrix& p, const SpdMatrix& q) {
  const Eigen::MatrixXd s = oracle_fn(p.matrix(), [](double x) { return std::sqrt(x); });
  const Eigen::MatrixXd is = oracle_fn(p.matrix(), [](double x) { return 1.0 / std::sqrt(x); });
  return s * oracle_fn(is * q.matrix() * is, [](double x) { return std::sqrt(x); }) * s;
}

}  // namespace

TEST(MeanGd, SinglePointConvergesImmediately) {
  Gen g(1);
  const SpdMatrix p = g.spd(3);
  const auto r = frechet_mean_gd({p});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.mean, p);
}

TEST(MeanGd, TwoPointsGiveGeodesicMidpoint) {
  Gen g(2);
  for (int t = 0; t < 10; ++t) {
    const SpdMatrix p = g.spd(3), q = g.spd(3);
    const auto r = frechet_mean_gd({p, q});
    EXPECT_TRUE(r.converged);
    EXPECT_LT(rel_err(r.mean.matrix(), oracle_midpoint(p, q)), 1e-7);
  }
}

TEST(MeanGd, CommutingScalarMatrices) {
  const std::vector<SpdMatrix> pts{SpdMatrix::diagonal(Eigen::Vector2d(1, 1)),
                                   SpdMatrix::diagonal(Eigen::Vector2d(4, 4)),
                                   SpdMatrix::diagonal(Eigen::Vector2d(16, 16))};
  const auto r = frechet_mean_gd(pts);
  EXPECT_LT(rel_err(r.mean.matrix(), Eigen::Matrix2d::Identity() * 4.0), 1e-8);
}

TEST(MeanGd, PropertyStationaryPoint) {
  Gen g(3);
  for (int t = 0; t < 20; ++t) {
    const int n = g.integer(2, 5);
    std::vector<SpdMatrix> pts;
    const int count = g.integer(2, 12);
    for (int i = 0; i < count; ++i) pts.push_back(g.spd(n));
    const auto r = frechet_mean_gd(pts);
    ASSERT_TRUE(r.converged);
    EXPECT_LT(stationarity(r.mean, pts), 1e-7);
  }
}

TEST(MeanGd, PropertyCongruenceEquivariant) {
  Gen g(4);
  for (int t = 0; t < 10; ++t) {
    std::vector<SpdMatrix> pts, moved;
    const Eigen::MatrixXd a = g.invertible(3);
    for (int i = 0; i < 6; ++i) {
      pts.push_back(g.spd(3));
      moved.push_back(SpdMatrix::unchecked(symmetrize(a * pts.back().matrix() * a.transpose())));
    }
    const auto m1 = frechet_mean_gd(pts), m2 = frechet_mean_gd(moved);
    EXPECT_LT(rel_err(m2.mean.matrix(), a * m1.mean.matrix() * a.transpose()), 1e-6);
  }
}

TEST(MeanGd, PropertyPermutationInvariant) {
  Gen g(5);
  std::vector<SpdMatrix> pts;
  for (int i = 0; i < 7; ++i) pts.push_back(g.spd(3));
  MeanSolverConfig cfg;
  cfg.init = SpdMatrix::identity(3);
  const auto m1 = frechet_mean_gd(pts, cfg);
  std::vector<SpdMatrix> perm;
  for (int i : g.permutation(7)) perm.push_back(pts[static_cast<std::size_t>(i)]);
  const auto m2 = frechet_mean_gd(perm, cfg);
  EXPECT_LT(rel_err(m1.mean.matrix(), m2.mean.matrix()), 1e-8);
}

TEST(MeanGd, IterationCapReportsUnconverged) {
  Gen g(6);
  std::vector<SpdMatrix> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(g.spd(3, 2.0));
  MeanSolverConfig cfg;
  cfg.max_iter = 1;
  const auto r = frechet_mean_gd(pts, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_GT(r.grad_norm, 0.0);
}

TEST(MeanGd, Validation) {
  EXPECT_THROW(frechet_mean_gd({}), Error);
  EXPECT_THROW(frechet_mean_gd({SpdMatrix::identity(2), SpdMatrix::identity(3)}), Error);
  MeanSolverConfig bad;
  bad.eta = 0.0;
  EXPECT_THROW(frechet_mean_gd({SpdMatrix::identity(2)}, bad), Error);
}

TEST(MeanIcm, UsesOneGeodesicPerExtraPoint) {
  Gen g(7);
  std::vector<SpdMatrix> pts;
  for (int i = 0; i < 9; ++i) pts.push_back(g.spd(3));
  op_counters().reset();
  frechet_mean_icm(pts);
  EXPECT_EQ(op_counters().geodesic.load(), 8u);
}

TEST(MeanIcm, ExactOnCommutingSetsForAnyOrder) {
  Gen g(8);
  for (int t = 0; t < 10; ++t) {
    std::vector<SpdMatrix> pts;
    Eigen::VectorXd log_sum = Eigen::VectorXd::Zero(3);
    for (int i = 0; i < 6; ++i) {
      pts.push_back(g.diag_spd(3, 2.0));
      log_sum += pts.back().matrix().diagonal().array().log().matrix();
    }
    const Eigen::MatrixXd expected = (log_sum / 6.0).array().exp().matrix().asDiagonal();
    std::vector<std::size_t> order;
    for (int i : g.permutation(6)) order.push_back(static_cast<std::size_t>(i));
    EXPECT_LT(rel_err(frechet_mean_icm(pts, order).matrix(), expected), 1e-12);
  }
}

TEST(MeanIcm, TwoPointsGiveMidpoint) {
  Gen g(9);
  const SpdMatrix p = g.spd(4), q = g.spd(4);
  EXPECT_LT(rel_err(frechet_mean_icm({p, q}).matrix(), oracle_midpoint(p, q)), 1e-10);
}

TEST(MeanIcm, CloseToKarcherMeanForConcentratedSets) {
  Gen g(10);
  const SpdMatrix c = g.spd(3);
  const Eigen::MatrixXd s = oracle_fn(c.matrix(), [](double x) { return std::sqrt(x); });
  std::vector<SpdMatrix> pts;
  for (int i = 0; i < 200; ++i) {
    const Eigen::MatrixXd e = oracle_fn(g.symmetric(3, 0.1), [](double x) { return std::exp(x); });
    pts.push_back(SpdMatrix::unchecked(symmetrize(s * e * s)));
  }
  const SpdMatrix gd = frechet_mean_gd(pts).mean;
  EXPECT_LT(dist_affine(gd, frechet_mean_icm(pts)), 0.02);
}

TEST(MeanIcm, RejectsBadOrder) {
  const std::vector<SpdMatrix> pts{SpdMatrix::identity(2), SpdMatrix::identity(2)};
  EXPECT_THROW(frechet_mean_icm(pts, {0, 0}), Error);
  EXPECT_THROW(frechet_mean_icm(pts, {0}), Error);
  EXPECT_THROW(frechet_mean_icm(pts, {0, 2}), Error);
}

TEST(LogEuclideanMean, CommutingCaseMatchesGeometricMean) {
  const std::vector<SpdMatrix> pts{SpdMatrix::diagonal(Eigen::Vector2d(1, 2)),
                                   SpdMatrix::diagonal(Eigen::Vector2d(4, 8))};
  EXPECT_LT(rel_err(log_euclidean_mean(pts).matrix(), Eigen::Vector2d(2, 4).asDiagonal().toDenseMatrix()), 1e-12);
}

TEST(Dispersion, ClosedFormsForBothMetrics) {
  const SpdMatrix c = SpdMatrix::identity(2);
  const std::vector<SpdMatrix> pts{SpdMatrix::diagonal(Eigen::Vector2d(std::exp(1.0), 1)),
                                   SpdMatrix::diagonal(Eigen::Vector2d(1, std::exp(-3.0)))};
  EXPECT_NEAR(cluster_dispersion(pts, c), 5.0, 1e-12);
  EXPECT_NEAR(cluster_dispersion(pts, c, Metric::LogEuclidean), 5.0, 1e-12);
  EXPECT_NEAR(squared_distance(pts[0], pts[1], Metric::Affine), 10.0, 1e-12);
  EXPECT_THROW(cluster_dispersion({}, c), Error);
}
