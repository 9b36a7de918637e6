#pragma once

// Geometry of SPD(n) under the affine-invariant metric
//   <V, W>_P = Tr(P^-1 V P^-1 W).
// Every matrix function goes through one symmetric eigendecomposition kernel.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frechet/error.hpp"

namespace frechet {

/// Relative Frobenius asymmetry accepted on validation.
inline constexpr double kSymTol = 1e-10;
/// Smallest eigenvalue must exceed kPdTol * max(1, largest |eigenvalue|).
inline constexpr double kPdTol = 1e-12;

/// Operation counters for cost-contract checks. Relaxed atomics; never used for control flow.
struct OpCounters {
  std::atomic<std::uint64_t> dist{0};
  std::atomic<std::uint64_t> geodesic{0};
  std::atomic<std::uint64_t> log_map{0};
  std::atomic<std::uint64_t> exp_map{0};

  void reset() {
    dist = 0;
    geodesic = 0;
    log_map = 0;
    exp_map = 0;
  }
};

inline OpCounters& op_counters() {
  static OpCounters counters;
  return counters;
}

namespace detail {

inline void bump(std::atomic<std::uint64_t>& c) { c.fetch_add(1, std::memory_order_relaxed); }

inline double asymmetry(const Eigen::MatrixXd& m) {
  const double norm = m.norm();
  if (norm == 0.0) return 0.0;
  return (m - m.transpose()).norm() / norm;
}

inline void check_square_finite(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(ErrorCode::DimMismatch, "expected a non-empty square matrix, got " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()));
  if (!m.allFinite()) fail(ErrorCode::NonFinite, "matrix has non-finite entries");
}

inline void check_symmetric(const Eigen::MatrixXd& m) {
  check_square_finite(m);
  const double asym = asymmetry(m);
  if (asym > kSymTol) fail(ErrorCode::NotSymmetric, "relative asymmetry " + std::to_string(asym));
}

struct Eig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline Eig eig_sym(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success) fail(ErrorCode::EigenFailure, "symmetric eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline Eigen::VectorXd eigenvalues_sym(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorCode::EigenFailure, "symmetric eigendecomposition failed");
  return solver.eigenvalues();
}

inline double pd_threshold(const Eigen::VectorXd& values) {
  return kPdTol * std::max(1.0, values.cwiseAbs().maxCoeff());
}

inline void check_positive(const Eigen::VectorXd& values) {
  if (values.minCoeff() <= pd_threshold(values))
    fail(ErrorCode::NotPositiveDefinite, "min eigenvalue " + std::to_string(values.minCoeff()));
}

// Kernels see whitened intermediates whose condition number can legitimately exceed 1/kPdTol
// (far-apart points); there only a strictly positive spectrum is required.
inline void check_computed_positive(const Eigen::VectorXd& values) {
  if (!(values.minCoeff() > 0.0))
    fail(ErrorCode::NotPositiveDefinite, "non-positive computed eigenvalue " + std::to_string(values.minCoeff()));
}

/// U f(L) U^T.
template <typename F>
Eigen::MatrixXd recompose(const Eig& e, F&& f) {
  const Eigen::VectorXd fv = e.values.unaryExpr(f);
  return e.vectors * fv.asDiagonal() * e.vectors.transpose();
}

}  // namespace detail

/// Element of Sym(n); tangent vector at some foot point.
class SymTangent {
 public:
  SymTangent() = default;
  explicit SymTangent(Eigen::MatrixXd m) : m_(std::move(m)) { detail::check_symmetric(m_); }

  static SymTangent unchecked(Eigen::MatrixXd m) {
    SymTangent t;
    t.m_ = std::move(m);
    return t;
  }
  static SymTangent zero(int n) { return unchecked(Eigen::MatrixXd::Zero(n, n)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double norm() const { return m_.norm(); }

  friend SymTangent operator+(const SymTangent& a, const SymTangent& b) { return unchecked(a.m_ + b.m_); }
  friend SymTangent operator-(const SymTangent& a, const SymTangent& b) { return unchecked(a.m_ - b.m_); }
  friend SymTangent operator*(double s, const SymTangent& a) { return unchecked(s * a.m_); }

 private:
  Eigen::MatrixXd m_;
};

/// Element of SPD(n). Construction from a raw matrix validates symmetry and definiteness.
class SpdMatrix {
 public:
  SpdMatrix() = default;
  explicit SpdMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    detail::check_symmetric(m_);
    detail::check_positive(detail::eigenvalues_sym(m_));
  }

  /// For results that are SPD by construction (exp of a symmetric matrix, congruences of SPD matrices).
  static SpdMatrix unchecked(Eigen::MatrixXd m) {
    SpdMatrix p;
    p.m_ = std::move(m);
    return p;
  }
  static SpdMatrix identity(int n) { return unchecked(Eigen::MatrixXd::Identity(n, n)); }
  static SpdMatrix diagonal(const Eigen::VectorXd& d) {
    if (d.size() == 0 || d.minCoeff() <= 0.0) fail(ErrorCode::NotPositiveDefinite, "diagonal must be positive");
    return unchecked(d.asDiagonal().toDenseMatrix());
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  friend bool operator==(const SpdMatrix& a, const SpdMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_.cols() == b.m_.cols() && a.m_ == b.m_;
  }

 private:
  Eigen::MatrixXd m_;
};

/// ½(S + Sᵀ). Applied to raw data on ingestion, never inside the geometric kernels.
inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& s) { return 0.5 * (s + s.transpose()); }

// ---------------------------------------------------------------------------
// Spectral functions

struct SpectralFn {
  enum class Kind { Exp, Log, Sqrt, InvSqrt, Power };
  Kind kind = Kind::Exp;
  double t = 1.0;

  static SpectralFn exp() { return {Kind::Exp, 1.0}; }
  static SpectralFn log() { return {Kind::Log, 1.0}; }
  static SpectralFn sqrt() { return {Kind::Sqrt, 0.5}; }
  static SpectralFn inv_sqrt() { return {Kind::InvSqrt, -0.5}; }
  static SpectralFn power(double t) { return {Kind::Power, t}; }

  bool needs_spd() const { return kind != Kind::Exp; }
};

/// U f(Λ) Uᵀ for a symmetric input S = U Λ Uᵀ.
inline Eigen::MatrixXd spectral_apply(const Eigen::MatrixXd& s, SpectralFn f) {
  detail::check_symmetric(s);
  const detail::Eig e = detail::eig_sym(s);
  if (f.needs_spd()) detail::check_positive(e.values);
  switch (f.kind) {
    case SpectralFn::Kind::Exp: return detail::recompose(e, [](double x) { return std::exp(x); });
    case SpectralFn::Kind::Log: return detail::recompose(e, [](double x) { return std::log(x); });
    case SpectralFn::Kind::Sqrt: return detail::recompose(e, [](double x) { return std::sqrt(x); });
    case SpectralFn::Kind::InvSqrt: return detail::recompose(e, [](double x) { return 1.0 / std::sqrt(x); });
    case SpectralFn::Kind::Power: {
      const double t = f.t;
      return detail::recompose(e, [t](double x) { return std::pow(x, t); });
    }
  }
  return {};
}

namespace detail {

// Unvalidated kernels for inputs already known to be symmetric (and SPD where needed).
inline Eigen::MatrixXd exp_sym(const Eigen::MatrixXd& s) {
  return recompose(eig_sym(s), [](double x) { return std::exp(x); });
}
inline Eigen::MatrixXd log_spd(const Eigen::MatrixXd& s) {
  const Eig e = eig_sym(s);
  check_computed_positive(e.values);
  return recompose(e, [](double x) { return std::log(x); });
}
inline Eigen::MatrixXd pow_spd(const Eigen::MatrixXd& s, double t) {
  const Eig e = eig_sym(s);
  check_computed_positive(e.values);
  return recompose(e, [t](double x) { return std::pow(x, t); });
}

}  // namespace detail

inline SpdMatrix matrix_exp(const SymTangent& v) { return SpdMatrix::unchecked(detail::exp_sym(v.matrix())); }
inline SymTangent matrix_log(const SpdMatrix& p) { return SymTangent::unchecked(detail::log_spd(p.matrix())); }
inline SpdMatrix matrix_sqrt(const SpdMatrix& p) { return SpdMatrix::unchecked(detail::pow_spd(p.matrix(), 0.5)); }
inline SpdMatrix matrix_power(const SpdMatrix& p, double t) {
  return SpdMatrix::unchecked(detail::pow_spd(p.matrix(), t));
}

/// P^{1/2} and P^{-1/2} from a single eigendecomposition.
struct SqrtFactors {
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inv_sqrt;

  explicit SqrtFactors(const SpdMatrix& p) {
    const detail::Eig e = detail::eig_sym(p.matrix());
    detail::check_computed_positive(e.values);
    const Eigen::VectorXd s = e.values.cwiseSqrt();
    sqrt = e.vectors * s.asDiagonal() * e.vectors.transpose();
    inv_sqrt = e.vectors * s.cwiseInverse().asDiagonal() * e.vectors.transpose();
  }

  /// P^{-1/2} X P^{-1/2}
  Eigen::MatrixXd whiten(const Eigen::MatrixXd& x) const { return inv_sqrt * x * inv_sqrt; }
  /// P^{1/2} X P^{1/2}
  Eigen::MatrixXd color(const Eigen::MatrixXd& x) const { return sqrt * x * sqrt; }
};

inline void check_same_dim(int a, int b) {
  if (a != b) fail(ErrorCode::DimMismatch, std::to_string(a) + " vs " + std::to_string(b));
}

// ---------------------------------------------------------------------------
// Metric, distance, geodesics

inline double inner_at(const SpdMatrix& p, const SymTangent& v, const SymTangent& w) {
  check_same_dim(p.dim(), v.dim());
  check_same_dim(p.dim(), w.dim());
  Eigen::LLT<Eigen::MatrixXd> llt(p.matrix());
  if (llt.info() != Eigen::Success) fail(ErrorCode::NotPositiveDefinite, "Cholesky failed in inner_at");
  const Eigen::MatrixXd a = llt.solve(v.matrix());
  const Eigen::MatrixXd b = llt.solve(w.matrix());
  return (a * b).trace();
}

/// Distance from a fixed base point, with the base factorisation hoisted out of the loop.
/// d(P, Q)² = Σ ln² λ_i where λ are the eigenvalues of L⁻¹ Q L⁻ᵀ (P = L Lᵀ), i.e. of P⁻¹Q.
class AffineAnchor {
 public:
  explicit AffineAnchor(const SpdMatrix& base) : base_(base) {
    Eigen::LLT<Eigen::MatrixXd> llt(base.matrix());
    if (llt.info() != Eigen::Success) fail(ErrorCode::NotPositiveDefinite, "Cholesky of anchor failed");
    const int n = base.dim();
    l_inv_ = llt.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
  }

  const SpdMatrix& base() const { return base_; }

  double dist_sq(const SpdMatrix& q) const {
    check_same_dim(base_.dim(), q.dim());
    detail::bump(op_counters().dist);
    if (q == base_) return 0.0;
    const Eigen::MatrixXd w = l_inv_ * q.matrix() * l_inv_.transpose();
    const Eigen::VectorXd lambda = detail::eigenvalues_sym(w);
    if (lambda.minCoeff() <= 0.0) fail(ErrorCode::NotPositiveDefinite, "non-positive generalized eigenvalue");
    return lambda.array().log().square().sum();
  }

  double dist(const SpdMatrix& q) const { return std::sqrt(dist_sq(q)); }

 private:
  SpdMatrix base_;
  Eigen::MatrixXd l_inv_;
};

inline double dist_affine(const SpdMatrix& p, const SpdMatrix& q) {
  check_same_dim(p.dim(), q.dim());
  if (p == q) {
    detail::bump(op_counters().dist);
    return 0.0;
  }
  return AffineAnchor(p).dist(q);
}

inline double dist_log_euclidean(const SpdMatrix& p, const SpdMatrix& q) {
  check_same_dim(p.dim(), q.dim());
  if (p == q) return 0.0;
  return (detail::log_spd(p.matrix()) - detail::log_spd(q.matrix())).norm();
}

/// γ(t) = P^{1/2} (P^{-1/2} Q P^{-1/2})^t P^{1/2}; any real t.
inline SpdMatrix geodesic(const SpdMatrix& p, const SpdMatrix& q, double t) {
  check_same_dim(p.dim(), q.dim());
  detail::bump(op_counters().geodesic);
  if (t == 0.0 || p == q) return p;
  if (t == 1.0) return q;
  const SqrtFactors f(p);
  return SpdMatrix::unchecked(f.color(detail::pow_spd(f.whiten(q.matrix()), t)));
}

inline SpdMatrix exp_map(const SpdMatrix& p, const SymTangent& v) {
  check_same_dim(p.dim(), v.dim());
  detail::bump(op_counters().exp_map);
  const SqrtFactors f(p);
  return SpdMatrix::unchecked(f.color(detail::exp_sym(f.whiten(v.matrix()))));
}

inline SymTangent log_map(const SpdMatrix& p, const SpdMatrix& q) {
  check_same_dim(p.dim(), q.dim());
  detail::bump(op_counters().log_map);
  if (p == q) return SymTangent::zero(p.dim());
  const SqrtFactors f(p);
  return SymTangent::unchecked(f.color(detail::log_spd(f.whiten(q.matrix()))));
}

inline double log_det(const SpdMatrix& p) {
  Eigen::LLT<Eigen::MatrixXd> llt(p.matrix());
  if (llt.info() != Eigen::Success) fail(ErrorCode::NotPositiveDefinite, "Cholesky failed in log_det");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

/// Projection onto the fixed-determinant slice {det = r}: scale by (r / det P)^{1/n}.
inline SpdMatrix project_to_det(const SpdMatrix& p, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCode::InvalidArgument, "determinant target must be positive");
  const double scale = std::exp((std::log(r) - log_det(p)) / p.dim());
  return SpdMatrix::unchecked(scale * p.matrix());
}

}  // namespace frechet
