#pragma once

#include "hfbgeo/core.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace hfbgeo {

// ---------------------------------------------------------------------------
// Fixed-basis conjugation and transposes.
//
// The fixed basis is the standard coordinate basis, so the conjugation I0 is
// entrywise complex conjugation and needs no stored object.
// ---------------------------------------------------------------------------

/// x-bar = I0 x I0, entrywise conjugation in the fixed basis.
inline CMat bar(const CMat& x) { return x.conjugate(); }

/// x^T = (x-bar)^*, the plain transpose in the fixed basis.
inline CMat transpose_t(const CMat& x) { return x.transpose(); }

// ---------------------------------------------------------------------------
// Matrix norms.
// ---------------------------------------------------------------------------

/// Operator (spectral) norm.
inline double op_norm(const CMat& x) {
  if (x.size() == 0) return 0.0;
  return x.jacobiSvd().singularValues()(0);
}

/// Hilbert-Schmidt (Frobenius) norm.
inline double hs_norm(const CMat& x) { return x.norm(); }

/// Trace norm (sum of singular values).
inline double tr_norm(const CMat& x) {
  if (x.size() == 0) return 0.0;
  return x.jacobiSvd().singularValues().sum();
}

// ---------------------------------------------------------------------------
// Block 2x2 operators on H (+) H.
// ---------------------------------------------------------------------------

/// General element of the restricted algebra B2(H (+) H, D): arbitrary
/// diagonal blocks, Hilbert-Schmidt off-diagonal blocks (automatic at finite n).
struct BlockOp {
  CMat x11, x12, x21, x22;

  BlockOp() = default;
  BlockOp(CMat a11, CMat a12, CMat a21, CMat a22)
      : x11(std::move(a11)), x12(std::move(a12)), x21(std::move(a21)), x22(std::move(a22)) {
    const auto d = x11.rows();
    if (x11.cols() != d || x12.rows() != d || x12.cols() != d || x21.rows() != d ||
        x21.cols() != d || x22.rows() != d || x22.cols() != d)
      throw DimensionMismatch("BlockOp blocks must be square of equal dimension");
  }

  int n() const { return static_cast<int>(x11.rows()); }

  static BlockOp zero(int n) {
    return BlockOp(CMat::Zero(n, n), CMat::Zero(n, n), CMat::Zero(n, n), CMat::Zero(n, n));
  }
  static BlockOp identity(int n) {
    return BlockOp(CMat::Identity(n, n), CMat::Zero(n, n), CMat::Zero(n, n),
                   CMat::Identity(n, n));
  }

  CMat assemble() const {
    const int d = n();
    CMat m(2 * d, 2 * d);
    m.topLeftCorner(d, d) = x11;
    m.topRightCorner(d, d) = x12;
    m.bottomLeftCorner(d, d) = x21;
    m.bottomRightCorner(d, d) = x22;
    return m;
  }

  static BlockOp split(const CMat& m) {
    const auto d = m.rows() / 2;
    if (m.rows() != 2 * d || m.cols() != 2 * d)
      throw DimensionMismatch("split expects an even-dimensional square matrix");
    return BlockOp(m.topLeftCorner(d, d), m.topRightCorner(d, d), m.bottomLeftCorner(d, d),
                   m.bottomRightCorner(d, d));
  }

  BlockOp adjoint() const { return BlockOp(x11.adjoint(), x21.adjoint(), x12.adjoint(), x22.adjoint()); }

  friend BlockOp operator*(const BlockOp& a, const BlockOp& b) {
    return BlockOp(a.x11 * b.x11 + a.x12 * b.x21, a.x11 * b.x12 + a.x12 * b.x22,
                   a.x21 * b.x11 + a.x22 * b.x21, a.x21 * b.x12 + a.x22 * b.x22);
  }
  friend BlockOp operator+(const BlockOp& a, const BlockOp& b) {
    return BlockOp(a.x11 + b.x11, a.x12 + b.x12, a.x21 + b.x21, a.x22 + b.x22);
  }
  friend BlockOp operator-(const BlockOp& a, const BlockOp& b) {
    return BlockOp(a.x11 - b.x11, a.x12 - b.x12, a.x21 - b.x21, a.x22 - b.x22);
  }
  friend BlockOp operator*(Complex s, const BlockOp& a) {
    return BlockOp(s * a.x11, s * a.x12, s * a.x21, s * a.x22);
  }
};

/// Restricted norm: 2 max{ ||x11||, ||x22||, ||x12||_2, ||x21||_2 }.
/// The factor 2 makes the norm submultiplicative.
inline double restricted_norm(const BlockOp& x) {
  return 2.0 * std::max(std::max(op_norm(x.x11), op_norm(x.x22)),
                        std::max(hs_norm(x.x12), hs_norm(x.x21)));
}

/// (1,2)-norm: 2 max{ ||x11||_1, ||x22||_1, ||x12||_2, ||x21||_2 }.
inline double norm_12(const BlockOp& x) {
  return 2.0 * std::max(std::max(tr_norm(x.x11), tr_norm(x.x22)),
                        std::max(hs_norm(x.x12), hs_norm(x.x21)));
}

/// Conjugation by I = [[0, I0], [I0, 0]]: X -> I X I.
inline BlockOp conj_I(const BlockOp& x) {
  return BlockOp(bar(x.x22), bar(x.x21), bar(x.x12), bar(x.x11));
}

// ---------------------------------------------------------------------------
// Polar decomposition, exponential, logarithm.
// ---------------------------------------------------------------------------

/// Unitary part Omega(G) = G |G|^{-1} of an invertible matrix, via SVD.
inline CMat polar_unitary(const CMat& g, double tol = Tol::factor) {
  Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= tol * std::max(sv(0), 1e-300))
    throw SingularInput("polar_unitary: smallest singular value below tolerance");
  return svd.matrixU() * svd.matrixV().adjoint();
}

inline BlockOp polar_unitary(const BlockOp& g, double tol = Tol::factor) {
  return BlockOp::split(polar_unitary(g.assemble(), tol));
}

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
/// Accuracy target 1e-12 for ||X|| <= 10.
inline CMat mat_exp(const CMat& x) {
  const double nrm = op_norm(x);
  int s = 0;
  if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  const CMat y = x / std::pow(2.0, s);
  const int d = static_cast<int>(x.rows());
  CMat result = CMat::Identity(d, d);
  CMat term = CMat::Identity(d, d);
  for (int k = 1; k <= 30; ++k) {
    term = (term * y) / static_cast<double>(k);
    result += term;
    if (term.norm() < 1e-18 * result.norm()) break;
  }
  for (int i = 0; i < s; ++i) result = result * result;
  return result;
}

inline BlockOp mat_exp(const BlockOp& x) { return BlockOp::split(mat_exp(x.assemble())); }

namespace detail {

// Mercator series log(1 + E); convergence is guaranteed in any submultiplicative
// norm with ||E|| < 1, so the caller checks the domain in its own norm.
inline CMat log_series(const CMat& e) {
  const int d = static_cast<int>(e.rows());
  CMat result = CMat::Zero(d, d);
  CMat power = CMat::Identity(d, d);
  double sign = 1.0;
  for (int k = 1; k <= 20000; ++k) {
    power = power * e;
    const CMat term = (sign / static_cast<double>(k)) * power;
    result += term;
    if (term.norm() < 1e-17 * std::max(result.norm(), 1.0)) return result;
    sign = -sign;
  }
  throw NumericalFailure("mat_log_near_id: series did not converge");
}

}  // namespace detail

/// Principal logarithm near the identity, log(G) = sum (-1)^{k+1} (G-1)^k / k.
/// Requires ||G - 1|| < 1 in the operator norm.
inline CMat mat_log_near_id(const CMat& g) {
  const int d = static_cast<int>(g.rows());
  const CMat e = g - CMat::Identity(d, d);
  if (op_norm(e) >= 1.0) throw LogDomain("mat_log_near_id: ||G - 1|| >= 1");
  return detail::log_series(e);
}

/// BlockOp logarithm; the domain check uses the restricted norm of the algebra.
inline BlockOp mat_log_near_id(const BlockOp& g) {
  const BlockOp e = g - BlockOp::identity(g.n());
  if (restricted_norm(e) >= 1.0) throw LogDomain("mat_log_near_id: ||G - 1||_res >= 1");
  return BlockOp::split(detail::log_series(e.assemble()));
}

}  // namespace hfbgeo
