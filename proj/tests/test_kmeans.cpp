#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "frechet/kmeans.hpp"
#include "test_support.hpp"

using namespace frechet;
using testsupport::Gen;

namespace {

Eigen::MatrixXd row(std::initializer_list<double> xs) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(xs.size()));
  Eigen::Index j = 0;
  for (double x : xs) m(0, j++) = x;
  return m;
}

// Partition as a set of member sets, independent of label names.
std::set<std::set<int>> blocks(const std::vector<int>& labels, int k) {
  std::vector<std::set<int>> b(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) b[static_cast<std::size_t>(labels[i])].insert(static_cast<int>(i));
  return {b.begin(), b.end()};
}

Eigen::MatrixXd gaussian_blobs(Gen& g, int dim, int k, int per, double sep) {
  Eigen::MatrixXd pts(dim, k * per);
  for (int c = 0; c < k; ++c) {
    const Eigen::VectorXd centre = sep * g.gaussian(dim, 1);
    for (int i = 0; i < per; ++i) pts.col(c * per + i) = centre + g.gaussian(dim, 1);
  }
  return pts;
}

}  // namespace

TEST(LloydEuclid, SeparatedPairsInOneDimension) {
  KMeansConfig cfg;
  cfg.k = 2;
  const auto p = lloyd_euclid(row({0, 0.1, 10, 10.1}), cfg);
  EXPECT_EQ(p.labels[0], p.labels[1]);
  EXPECT_EQ(p.labels[2], p.labels[3]);
  EXPECT_NE(p.labels[0], p.labels[2]);
  EXPECT_NEAR(p.euclid_centroids(0, p.labels[0]), 0.05, 1e-12);
  EXPECT_NEAR(p.euclid_centroids(0, p.labels[2]), 10.05, 1e-12);
  EXPECT_TRUE(p.converged);
}

TEST(LloydEuclid, OneClusterPerPointHasZeroDispersion) {
  Gen g(1);
  KMeansConfig cfg;
  cfg.k = 6;
  const auto p = lloyd_euclid(g.gaussian(3, 6), cfg);
  EXPECT_NEAR(p.totdisp, 0.0, 1e-20);
  EXPECT_EQ(blocks(p.labels, 6).size(), 6u);
}

TEST(LloydEuclid, SingleClusterCentroidIsMean) {
  Gen g(2);
  const Eigen::MatrixXd pts = g.gaussian(4, 30);
  KMeansConfig cfg;
  cfg.k = 1;
  const auto p = lloyd_euclid(pts, cfg);
  EXPECT_LT((p.euclid_centroids.col(0) - pts.rowwise().mean()).norm(), 1e-12);
  const double sse = (pts.colwise() - pts.rowwise().mean()).squaredNorm();
  EXPECT_NEAR(p.inertia, sse, 1e-9);
  EXPECT_NEAR(p.totdisp, sse / 30.0, 1e-10);
}

TEST(LloydEuclid, Errors) {
  KMeansConfig cfg;
  cfg.k = 3;
  try {
    lloyd_euclid(row({1, 2}), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
  cfg.k = 0;
  EXPECT_THROW(lloyd_euclid(row({1, 2}), cfg), Error);
  cfg.k = 1;
  cfg.restarts = 0;
  EXPECT_THROW(lloyd_euclid(row({1, 2}), cfg), Error);
  EXPECT_THROW(lloyd_euclid(std::vector<Eigen::VectorXd>{Eigen::Vector2d(0, 0), Eigen::Vector3d(0, 0, 0)}, KMeansConfig{}),
               Error);
}

TEST(LloydEuclid, TiesGoToLowestIndex) {
  KMeansConfig cfg;
  cfg.k = 2;
  cfg.init = KMeansConfig::Init::Provided;
  cfg.max_iter = 1;
  Eigen::MatrixXd init(1, 2);
  init << -1, 1;
  cfg.initial_centroids = init;
  // Point 0 is equidistant from both initial centroids.
  const auto p = lloyd_euclid(row({0, -1, 1}), cfg);
  EXPECT_EQ(p.labels[0], 0);
}

TEST(LloydEuclid, EmptyClusterSeizesFarthestPoint) {
  KMeansConfig cfg;
  cfg.k = 2;
  cfg.init = KMeansConfig::Init::Provided;
  cfg.max_iter = 1;
  Eigen::MatrixXd init(1, 2);
  init << 0, 100;
  cfg.initial_centroids = init;
  // Every point is closer to 0; the farthest (x = 5) moves to the empty cluster.
  const auto p = lloyd_euclid(row({0, 1, 5, -2}), cfg);
  EXPECT_EQ(p.labels, (std::vector<int>{0, 0, 1, 0}));
  EXPECT_NEAR(p.euclid_centroids(0, 1), 5.0, 1e-15);
}

TEST(LloydEuclid, ProvidedInitNeedsKCentroids) {
  KMeansConfig cfg;
  cfg.k = 2;
  cfg.init = KMeansConfig::Init::Provided;
  EXPECT_THROW(lloyd_euclid(row({0, 1, 2}), cfg), Error);
  cfg.initial_centroids = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_THROW(lloyd_euclid(row({0, 1, 2}), cfg), Error);
}

TEST(LloydEuclid, PropertyInertiaNonIncreasing) {
  Gen g(3);
  for (int trial = 0; trial < 50; ++trial) {
    KMeansConfig cfg;
    cfg.k = g.integer(2, 6);
    cfg.restarts = 1;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const auto p = lloyd_euclid(gaussian_blobs(g, 3, 4, 20, 2.0), cfg);
    for (std::size_t i = 1; i < p.inertia_history.size(); ++i)
      EXPECT_LE(p.inertia_history[i], p.inertia_history[i - 1] * (1 + 1e-12)) << "trial " << trial;
    EXPECT_NEAR(p.inertia_history.back(), p.inertia, 1e-9 * (1 + p.inertia));
  }
}

// Every point sits on its side of the bisector hyperplanes.
TEST(LloydEuclid, PropertyMediatrix) {
  Gen g(4);
  for (int trial = 0; trial < 50; ++trial) {
    KMeansConfig cfg;
    cfg.k = g.integer(2, 5);
    cfg.seed = static_cast<std::uint64_t>(trial);
    cfg.restarts = 3;
    const Eigen::MatrixXd pts = gaussian_blobs(g, 2, 3, 15, 1.5);
    const auto p = lloyd_euclid(pts, cfg);
    if (!p.converged) continue;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      const double own = (pts.col(i) - p.euclid_centroids.col(p.labels[static_cast<std::size_t>(i)])).norm();
      for (int j = 0; j < cfg.k; ++j) EXPECT_LE(own, (pts.col(i) - p.euclid_centroids.col(j)).norm() + 1e-9);
    }
  }
}

TEST(LloydEuclid, PropertyLabelsInRangeAndCentroidsAreMeans) {
  Gen g(5);
  for (int trial = 0; trial < 30; ++trial) {
    KMeansConfig cfg;
    cfg.k = g.integer(1, 5);
    cfg.seed = static_cast<std::uint64_t>(trial);
    const Eigen::MatrixXd pts = g.gaussian(3, 40);
    const auto p = lloyd_euclid(pts, cfg);
    ASSERT_EQ(p.labels.size(), 40u);
    std::vector<int> count(static_cast<std::size_t>(cfg.k), 0);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(3, cfg.k);
    for (int i = 0; i < 40; ++i) {
      const int l = p.labels[static_cast<std::size_t>(i)];
      ASSERT_GE(l, 0);
      ASSERT_LT(l, cfg.k);
      ++count[static_cast<std::size_t>(l)];
      sum.col(l) += pts.col(i);
    }
    for (int j = 0; j < cfg.k; ++j) {
      ASSERT_GT(count[static_cast<std::size_t>(j)], 0);
      EXPECT_LT((sum.col(j) / count[static_cast<std::size_t>(j)] - p.euclid_centroids.col(j)).norm(), 1e-12);
    }
    EXPECT_GE(p.totdisp, 0.0);
  }
}

TEST(LloydEuclid, DeterministicPerSeed) {
  Gen g(6);
  const Eigen::MatrixXd pts = gaussian_blobs(g, 3, 3, 30, 1.0);
  KMeansConfig cfg;
  cfg.k = 3;
  cfg.seed = 99;
  const auto a = lloyd_euclid(pts, cfg), b = lloyd_euclid(pts, cfg);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.inertia, b.inertia);
}

TEST(LloydEuclid, BestRestartIsNoWorseThanAnySingleRestart) {
  Gen g(7);
  const Eigen::MatrixXd pts = gaussian_blobs(g, 2, 5, 20, 1.2);
  KMeansConfig cfg;
  cfg.k = 5;
  cfg.restarts = 8;
  cfg.seed = 3;
  const auto best = lloyd_euclid(pts, cfg);
  const EuclideanSpace space(pts);
  for (int r = 0; r < 8; ++r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    const auto run = lloyd_single(space, 5, kmeanspp_init(space, 5, rng), cfg.max_iter);
    EXPECT_LE(best.inertia, run.inertia + 1e-12);
  }
}

// Permuting the input permutes the labels when the provided initial centroids are the same.
TEST(LloydEuclid, PropertyRelabelingInvariance) {
  Gen g(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd pts = gaussian_blobs(g, 2, 3, 15, 3.0);
    KMeansConfig cfg;
    cfg.k = 3;
    cfg.init = KMeansConfig::Init::Provided;
    cfg.initial_centroids = pts(Eigen::all, std::vector<Eigen::Index>{0, 15, 30});
    const auto perm = g.permutation(static_cast<int>(pts.cols()));
    Eigen::MatrixXd moved(pts.rows(), pts.cols());
    for (std::size_t i = 0; i < perm.size(); ++i) moved.col(static_cast<Eigen::Index>(i)) = pts.col(perm[i]);
    const auto a = lloyd_euclid(pts, cfg), b = lloyd_euclid(moved, cfg);
    std::vector<int> back(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) back[static_cast<std::size_t>(perm[i])] = b.labels[i];
    EXPECT_EQ(a.labels, back);
  }
}

TEST(KMeansPP, SeedsAreDistinctDataPoints) {
  Gen g(9);
  const Eigen::MatrixXd pts = g.gaussian(2, 50);
  const EuclideanSpace space(pts);
  Rng rng(1);
  const auto seeds = kmeanspp_init(space, 6, rng);
  ASSERT_EQ(seeds.size(), 6u);
  for (std::size_t a = 0; a < seeds.size(); ++a) {
    bool found = false;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) found |= (pts.col(i) - seeds[a]).norm() == 0.0;
    EXPECT_TRUE(found);
    for (std::size_t b = 0; b < a; ++b) EXPECT_GT((seeds[a] - seeds[b]).norm(), 0.0);
  }
}
