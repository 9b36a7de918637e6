#include <cmath>

#include <gtest/gtest.h>

#include "frechet/embed.hpp"
#include "test_support.hpp"

using namespace frechet;
using testsupport::Gen;
using testsupport::rel_err;

namespace {

// Embedding of exp_P(t V_j) where V_j = P^{1/2} B_j P^{1/2} is the j-th metric-weighted direction.
Eigen::VectorXd embed_along(const FrechetMapSpec& spec, const SpdMatrix& p, const Eigen::MatrixXd& b, double t) {
  const SqrtFactors f(p);
  return embed(spec, exp_map(p, SymTangent::unchecked(t * f.color(b))));
}

Eigen::MatrixXd central_differences(const FrechetMapSpec& spec, const SpdMatrix& p, const SymBasis& basis,
                                    double h) {
  Eigen::MatrixXd out(spec.size(), basis.size());
  for (int j = 0; j < basis.size(); ++j)
    out.col(j) = (embed_along(spec, p, basis[j], h) - embed_along(spec, p, basis[j], -h)) / (2.0 * h);
  return out;
}

}  // namespace

TEST(SymBasis, OrthonormalWithExpectedSize) {
  for (int n : {1, 2, 3, 5}) {
    const SymBasis b(n);
    ASSERT_EQ(b.size(), n * (n + 1) / 2);
    for (int i = 0; i < b.size(); ++i)
      for (int j = 0; j < b.size(); ++j)
        EXPECT_NEAR((b[i].array() * b[j].array()).sum(), i == j ? 1.0 : 0.0, 1e-14);
  }
}

TEST(SymBasis, ElementsMatchCoordinateOrder) {
  for (int n : {1, 4, 7}) {
    const SymBasis b(n);
    for (int j = 0; j < b.size(); ++j) {
      const Eigen::VectorXd c = b.coords(b[j]);
      EXPECT_NEAR(c(j), 1.0, 1e-14);
      EXPECT_NEAR(c.norm(), 1.0, 1e-14);
    }
    EXPECT_THROW(b[b.size()], Error);
  }
  // Large n stays cheap: nothing is stored per element.
  const SymBasis big(197);
  EXPECT_EQ(big.size(), 19503);
  EXPECT_NEAR(big[19502](195, 196), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(SymBasis, CoordinateRoundTrip) {
  Gen g(3);
  const SymBasis b(4);
  const Eigen::MatrixXd s = g.symmetric(4);
  EXPECT_LT((b.from_coords(b.coords(s)) - s).norm(), 1e-13);
  EXPECT_NEAR(b.coords(s).norm(), s.norm(), 1e-12);
}

TEST(Embed, SelfDistanceIsZero) {
  const FrechetMapSpec spec({SpdMatrix::identity(2)}, 2);
  EXPECT_EQ(embed(spec, SpdMatrix::identity(2))(0), 0.0);
}

TEST(Embed, DiagonalClosedForm) {
  const FrechetMapSpec spec({SpdMatrix::identity(2)}, 1);
  const SpdMatrix x = SpdMatrix::diagonal(Eigen::Vector2d(std::exp(2.0), 1.0));
  EXPECT_NEAR(embed(spec, x)(0), 2.0, 1e-12);
}

TEST(Embed, SquaredMapIsSquareOfFirstOrderMap) {
  Gen g(7);
  std::vector<SpdMatrix> refs;
  for (int i = 0; i < 5; ++i) refs.push_back(g.spd(3));
  const FrechetMapSpec s1(refs, 1), s2(refs, 2);
  for (int t = 0; t < 20; ++t) {
    const SpdMatrix x = g.spd(3);
    EXPECT_LT(rel_err(embed(s2, x), embed(s1, x).cwiseAbs2()), 1e-12);
  }
}

TEST(Embed, SpecValidation) {
  EXPECT_THROW(FrechetMapSpec({}, 2), Error);
  EXPECT_THROW(FrechetMapSpec({SpdMatrix::identity(2)}, 3), Error);
  EXPECT_THROW(FrechetMapSpec({SpdMatrix::identity(2), SpdMatrix::identity(3)}, 2), Error);
  const FrechetMapSpec spec({SpdMatrix::identity(2)}, 2);
  try {
    embed(spec, SpdMatrix::identity(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimMismatch);
  }
}

TEST(EmbedDataset, OrderAndCallCount) {
  Gen g(9);
  std::vector<SpdMatrix> refs{g.spd(3), g.spd(3)};
  std::vector<SpdMatrix> data{g.spd(3), g.spd(3), g.spd(3)};
  const FrechetMapSpec spec(refs, 2);
  op_counters().reset();
  const Eigen::MatrixXd out = embed_dataset(spec, data);
  EXPECT_EQ(op_counters().dist.load(), 6u);
  for (int j = 0; j < 3; ++j) EXPECT_LT(rel_err(out.col(j), embed(spec, data[static_cast<std::size_t>(j)])), 1e-15);
}

TEST(EmbedDataset, ErrorNamesOffendingIndex) {
  const FrechetMapSpec spec({SpdMatrix::identity(2)}, 2);
  std::vector<SpdMatrix> data{SpdMatrix::identity(2), SpdMatrix::identity(3)};
  try {
    embed_dataset(spec, data);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("data point 1"), std::string::npos);
  }
}

TEST(Jacobian, ZeroRowAtReferenceForSquaredMap) {
  Gen g(13);
  const SpdMatrix r = g.spd(3);
  const FrechetMapSpec spec({r, g.spd(3)}, 2);
  const Eigen::MatrixXd j = jacobian(spec, r, SymBasis(3));
  EXPECT_LT(j.row(0).norm(), 1e-12);
  EXPECT_GT(j.row(1).norm(), 0.0);
}

TEST(Jacobian, FirstOrderMapAtReferenceThrows) {
  const SpdMatrix r = SpdMatrix::identity(2);
  const FrechetMapSpec spec({r}, 1);
  try {
    jacobian(spec, r, SymBasis(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AtReferencePoint);
  }
}

TEST(Jacobian, MatchesCentralDifferences) {
  Gen g(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial % 2 == 0 ? 2 : 3;
    const int p = trial % 4 < 2 ? 2 : 1;
    std::vector<SpdMatrix> refs;
    for (int i = 0; i < 4; ++i) refs.push_back(g.spd(n));
    const FrechetMapSpec spec(refs, p);
    const SpdMatrix at = g.spd(n);
    const SymBasis basis(n);
    const Eigen::MatrixXd j = jacobian(spec, at, basis);
    const Eigen::MatrixXd fd = central_differences(spec, at, basis, 1e-5);
    EXPECT_LT((j - fd).norm() / j.norm(), 1e-5) << "trial " << trial;
  }
}

TEST(Jacobian, ChainRuleForSingleReference) {
  Gen g(21);
  const SpdMatrix r = g.spd(3), at = g.spd(3);
  const FrechetMapSpec spec({r}, 2);
  const SymBasis basis(3);
  const Eigen::MatrixXd v = g.symmetric(3);
  const SqrtFactors f(at);
  const double predicted = (jacobian(spec, at, basis) * basis.coords(f.whiten(v)))(0);
  const double h = 1e-5;
  auto d2 = [&](double t) {
    const double d = dist_affine(r, exp_map(at, SymTangent::unchecked(t * v)));
    return d * d;
  };
  EXPECT_LT(std::abs(predicted - (d2(h) - d2(-h)) / (2 * h)) / std::abs(predicted), 1e-6);
}

TEST(LocalRank, SingleReferenceHasRankAtMostOne) {
  Gen g(23);
  const FrechetMapSpec spec({g.spd(3)}, 2);
  EXPECT_LE(local_rank(spec, g.spd(3)), 1);
}

TEST(LocalRank, FewerReferencesThanDimensionIsRankDeficient) {
  Gen g(29);
  std::vector<SpdMatrix> refs;
  for (int i = 0; i < 5; ++i) refs.push_back(g.spd(3));  // m = 6
  const FrechetMapSpec spec(refs, 2);
  for (int t = 0; t < 10; ++t) EXPECT_LT(local_rank(spec, g.spd(3)), 6);
}

TEST(LocalRank, GenericFullRankForTwoByTwo) {
  Gen g(31);
  frechet::Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    std::vector<SpdMatrix> refs;
    for (int i = 0; i < 3; ++i) refs.push_back(SpdMatrix::unchecked(detail::exp_sym(gaussian_symmetric(2, rng))));
    EXPECT_EQ(local_rank(FrechetMapSpec(refs, 2), g.spd(2)), 3);
  }
}

TEST(LocalRank, EqualsRankOfWhitenedLogs) {
  Gen g(37);
  for (int t = 0; t < 10; ++t) {
    std::vector<SpdMatrix> refs;
    for (int i = 0; i < 4; ++i) refs.push_back(g.spd(3));
    const SpdMatrix at = g.spd(3);
    const SymBasis basis(3);
    const SqrtFactors f(at);
    Eigen::MatrixXd logs(4, basis.size());
    for (int i = 0; i < 4; ++i)
      logs.row(i) = basis.coords(f.whiten(log_map(at, refs[static_cast<std::size_t>(i)]).matrix())).transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(logs);
    lu.setThreshold(1e-8);
    EXPECT_EQ(local_rank(FrechetMapSpec(refs, 2), at), lu.rank());
  }
}

TEST(Distortion, FirstOrderMapIsOneLipschitz) {
  Gen g(41);
  frechet::Rng rng(1);
  std::vector<SpdMatrix> refs, data;
  for (int i = 0; i < 6; ++i) refs.push_back(g.spd(3, 2.0));
  for (int i = 0; i < 40; ++i) data.push_back(g.spd(3, 2.0));
  const auto s = distortion_stats(FrechetMapSpec(refs, 1), data, 300, rng);
  EXPECT_TRUE(s.lipschitz_bound_ok);
  EXPECT_LE(s.max_ratio_inf, 1.0 + 1e-9);
  EXPECT_EQ(s.pairs_used, 300);
}

TEST(Distortion, SingleReferenceAtEndpointGivesRatioOne) {
  Gen g(43);
  const SpdMatrix x = g.spd(3), y = g.spd(3);
  frechet::Rng rng(2);
  const auto s = distortion_stats(FrechetMapSpec({x}, 1), {x, y}, -1, rng);
  EXPECT_NEAR(s.max_ratio_inf, 1.0, 1e-12);
}

TEST(Distortion, SquaredMapBoundHoldsInBall) {
  Gen g(47);
  frechet::Rng rng(3);
  std::vector<SpdMatrix> refs, data;
  for (int i = 0; i < 4; ++i) refs.push_back(g.spd(3));
  for (int i = 0; i < 30; ++i) data.push_back(g.spd(3));
  const auto s = distortion_stats(FrechetMapSpec(refs, 2), data, 100, rng);
  EXPECT_TRUE(s.lipschitz_bound_ok);
  EXPECT_NEAR(s.bound, 4.0 * s.delta, 1e-12);
}

TEST(Distortion, DegeneratePairsAreSkipped) {
  const SpdMatrix x = SpdMatrix::identity(2);
  frechet::Rng rng(4);
  const auto s = distortion_stats(FrechetMapSpec({x}, 1), {x, x}, -1, rng);
  EXPECT_EQ(s.degenerate_pairs, 1);
  EXPECT_EQ(s.pairs_used, 0);
}
