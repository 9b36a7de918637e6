#pragma once

// p-Fréchet map on SPD(n): X ↦ (d(R_1, X)^p, ..., d(R_ℓ, X)^p).

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "frechet/error.hpp"
#include "frechet/rng.hpp"
#include "frechet/spd.hpp"

namespace frechet {

/// Frobenius-orthonormal basis of Sym(n): E_ii, then (E_ij + E_ji)/√2 for i < j in row-major order.
class SymBasis {
 public:
  explicit SymBasis(int n) : n_(n) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "SymBasis dimension must be positive");
  }

  int n() const { return n_; }
  int size() const { return n_ * (n_ + 1) / 2; }

  /// Built on demand: storing all of them is O(n^4) memory, ~6 GB at n = 197.
  Eigen::MatrixXd operator[](int j) const {
    if (j < 0 || j >= size()) fail(ErrorCode::InvalidArgument, "SymBasis index out of range");
    Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n_, n_);
    if (j < n_) {
      e(j, j) = 1.0;
      return e;
    }
    // Off-diagonal (i, l), i < l, in row-major order.
    int k = j - n_, i = 0;
    while (k >= n_ - 1 - i) k -= n_ - 1 - i++;
    const int l = i + 1 + k;
    e(i, l) = e(l, i) = 1.0 / std::sqrt(2.0);
    return e;
  }

  /// Frobenius inner products against each basis element.
  Eigen::VectorXd coords(const Eigen::MatrixXd& s) const {
    check_same_dim(n_, static_cast<int>(s.rows()));
    Eigen::VectorXd c(size());
    const double sqrt2 = std::sqrt(2.0);
    int k = 0;
    for (int i = 0; i < n_; ++i) c(k++) = s(i, i);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) c(k++) = sqrt2 * 0.5 * (s(i, j) + s(j, i));
    return c;
  }

  Eigen::MatrixXd from_coords(const Eigen::VectorXd& c) const {
    check_same_dim(size(), static_cast<int>(c.size()));
    Eigen::MatrixXd s(n_, n_);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    int k = 0;
    for (int i = 0; i < n_; ++i) s(i, i) = c(k++);
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) s(i, j) = s(j, i) = inv_sqrt2 * c(k++);
    return s;
  }

 private:
  int n_;
};

/// Reference list and order defining one Fréchet map.
class FrechetMapSpec {
 public:
  FrechetMapSpec(std::vector<SpdMatrix> refs, int p) : refs_(std::move(refs)), p_(p) {
    if (refs_.empty()) fail(ErrorCode::InvalidArgument, "Fréchet map needs at least one reference point");
    if (p_ != 1 && p_ != 2) fail(ErrorCode::InvalidArgument, "order p must be 1 or 2");
    anchors_.reserve(refs_.size());
    for (const auto& r : refs_) {
      check_same_dim(refs_.front().dim(), r.dim());
      anchors_.emplace_back(r);
    }
  }

  const std::vector<SpdMatrix>& refs() const { return refs_; }
  int p() const { return p_; }
  int dim() const { return refs_.front().dim(); }
  int size() const { return static_cast<int>(refs_.size()); }
  const AffineAnchor& anchor(int i) const { return anchors_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<SpdMatrix> refs_;
  int p_;
  std::vector<AffineAnchor> anchors_;
};

inline Eigen::VectorXd embed(const FrechetMapSpec& spec, const SpdMatrix& x) {
  check_same_dim(spec.dim(), x.dim());
  Eigen::VectorXd out(spec.size());
  for (int i = 0; i < spec.size(); ++i) {
    const double d2 = spec.anchor(i).dist_sq(x);
    out(i) = spec.p() == 2 ? d2 : std::sqrt(d2);
  }
  return out;
}

/// One column per data point, in input order.
inline Eigen::MatrixXd embed_dataset(const FrechetMapSpec& spec, const std::vector<SpdMatrix>& data) {
  if (data.empty()) fail(ErrorCode::TooFewPoints, "cannot embed an empty dataset");
  Eigen::MatrixXd out(spec.size(), static_cast<Eigen::Index>(data.size()));
  for (std::size_t j = 0; j < data.size(); ++j) {
    try {
      out.col(static_cast<Eigen::Index>(j)) = embed(spec, data[j]);
    } catch (const Error& e) {
      throw Error(e.code(), "data point " + std::to_string(j) + ": " + e.what());
    }
  }
  return out;
}

/// Riemannian Jacobian in metric-weighted coordinates: entry (i, j) is
/// ⟨-p d(R_i,P)^{p-2} log_P R_i, P^{1/2} B_j P^{1/2}⟩_P, which reduces to a Frobenius
/// product of log(P^{-1/2} R_i P^{-1/2}) against the basis element B_j.
inline Eigen::MatrixXd jacobian(const FrechetMapSpec& spec, const SpdMatrix& p, const SymBasis& basis) {
  check_same_dim(spec.dim(), p.dim());
  check_same_dim(spec.dim(), basis.n());
  const SqrtFactors f(p);
  Eigen::MatrixXd jac(spec.size(), basis.size());
  for (int i = 0; i < spec.size(); ++i) {
    const Eigen::MatrixXd log_w = detail::log_spd(f.whiten(spec.refs()[static_cast<std::size_t>(i)].matrix()));
    double coef = -2.0;
    if (spec.p() == 1) {
      const double d = log_w.norm();
      if (d < 1e-9) fail(ErrorCode::AtReferencePoint, "p=1 map is not differentiable at reference " + std::to_string(i));
      coef = -1.0 / d;
    }
    jac.row(i) = coef * basis.coords(log_w).transpose();
  }
  return jac;
}

inline int local_rank(const FrechetMapSpec& spec, const SpdMatrix& p, double rank_tol = 1e-8) {
  const SymBasis basis(spec.dim());
  const Eigen::MatrixXd jac = jacobian(spec, p, basis);
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(jac).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_tol * sv(0)) ++rank;
  return rank;
}

struct DistortionSummary {
  double max_ratio_inf = 0.0;  ///< max ‖F(x) - F(x')‖_∞ / d(x, x') over usable pairs
  double bound = 0.0;          ///< Lipschitz bound checked against (1 for p = 1)
  double delta = 0.0;          ///< ball radius around data[0] enclosing refs and data
  bool lipschitz_bound_ok = true;
  int pairs_used = 0;
  int degenerate_pairs = 0;
};

/// Samples point pairs and compares embedded ∞-norm gaps with geodesic distances.
inline DistortionSummary distortion_stats(const FrechetMapSpec& spec, const std::vector<SpdMatrix>& data,
                                          int sample_pairs, Rng& rng) {
  if (data.size() < 2) fail(ErrorCode::TooFewPoints, "distortion needs at least two points");
  const std::uint64_t n = data.size();
  const std::uint64_t total = n * (n - 1) / 2;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (sample_pairs < 0 || static_cast<std::uint64_t>(sample_pairs) >= total) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  } else {
    std::unordered_set<std::uint64_t> seen;
    std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
    while (pairs.size() < static_cast<std::size_t>(sample_pairs)) {
      std::uint64_t a = pick(rng), b = pick(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (seen.insert(a * n + b).second) pairs.emplace_back(a, b);
    }
  }

  DistortionSummary out;
  const AffineAnchor center(data.front());
  for (const auto& r : spec.refs()) out.delta = std::max(out.delta, center.dist(r));
  for (const auto& x : data) out.delta = std::max(out.delta, center.dist(x));
  const int p = spec.p();
  out.bound = p == 1 ? 1.0 : p * std::pow(2.0, p - 1) * std::pow(out.delta, p - 1);

  for (const auto& [i, j] : pairs) {
    const double d = dist_affine(data[i], data[j]);
    if (d < 1e-12) {
      ++out.degenerate_pairs;
      continue;
    }
    const double gap = (embed(spec, data[i]) - embed(spec, data[j])).cwiseAbs().maxCoeff();
    out.max_ratio_inf = std::max(out.max_ratio_inf, gap / d);
    ++out.pairs_used;
  }
  out.lipschitz_bound_ok = out.max_ratio_inf <= out.bound + 1e-9;
  return out;
}

}  // namespace frechet
