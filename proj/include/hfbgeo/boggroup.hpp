#pragma once

#include "hfbgeo/blockmat.hpp"

#include <optional>
#include <utility>

namespace hfbgeo {

// ---------------------------------------------------------------------------
// The Bogoliubov group U_Bog and its Lie algebra u_Bog at truncation n.
// ---------------------------------------------------------------------------

/// Group element U = [[u, v], [v-bar, u-bar]]. Only (u, v) are stored; the
/// assembled matrix commutes with I exactly by construction.
struct BogUnitary {
  CMat u, v;

  BogUnitary() = default;
  BogUnitary(CMat uu, CMat vv) : u(std::move(uu)), v(std::move(vv)) {
    if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows())
      throw DimensionMismatch("BogUnitary blocks must be square of equal dimension");
  }

  int n() const { return static_cast<int>(u.rows()); }

  static BogUnitary identity(int n) { return BogUnitary(CMat::Identity(n, n), CMat::Zero(n, n)); }

  CMat assemble() const {
    const int d = n();
    CMat m(2 * d, 2 * d);
    m.topLeftCorner(d, d) = u;
    m.topRightCorner(d, d) = v;
    m.bottomLeftCorner(d, d) = v.conjugate();
    m.bottomRightCorner(d, d) = u.conjugate();
    return m;
  }

  BlockOp as_block() const { return BlockOp(u, v, v.conjugate(), u.conjugate()); }

  BogUnitary adjoint() const { return BogUnitary(u.adjoint(), v.transpose()); }
};

/// Algebra element X = [[x1, x2], [x2-bar, x1-bar]] with x1 skew-adjoint and
/// x2 antisymmetric.
struct BogAlgebra {
  CMat x1, x2;

  BogAlgebra() = default;
  BogAlgebra(CMat a1, CMat a2) : x1(std::move(a1)), x2(std::move(a2)) {
    if (x1.rows() != x1.cols() || x2.rows() != x2.cols() || x1.rows() != x2.rows())
      throw DimensionMismatch("BogAlgebra blocks must be square of equal dimension");
  }

  int n() const { return static_cast<int>(x1.rows()); }

  static BogAlgebra zero(int n) { return BogAlgebra(CMat::Zero(n, n), CMat::Zero(n, n)); }

  CMat assemble() const {
    const int d = n();
    CMat m(2 * d, 2 * d);
    m.topLeftCorner(d, d) = x1;
    m.topRightCorner(d, d) = x2;
    m.bottomLeftCorner(d, d) = x2.conjugate();
    m.bottomRightCorner(d, d) = x1.conjugate();
    return m;
  }

  BlockOp as_block() const { return BlockOp(x1, x2, x2.conjugate(), x1.conjugate()); }

  friend BogAlgebra operator+(const BogAlgebra& a, const BogAlgebra& b) {
    return BogAlgebra(a.x1 + b.x1, a.x2 + b.x2);
  }
  friend BogAlgebra operator-(const BogAlgebra& a, const BogAlgebra& b) {
    return BogAlgebra(a.x1 - b.x1, a.x2 - b.x2);
  }
  friend BogAlgebra operator*(double s, const BogAlgebra& a) {
    return BogAlgebra(s * a.x1, s * a.x2);
  }
};

/// ||X||_res = 2 max{ ||x1||, ||x2||_2 } on u_Bog.
inline double restricted_norm(const BogAlgebra& x) {
  return 2.0 * std::max(op_norm(x.x1), hs_norm(x.x2));
}
inline double restricted_norm(const BogUnitary& u) {
  return 2.0 * std::max(op_norm(u.u), hs_norm(u.v));
}

/// Lie bracket [X, Y] in u_Bog.
inline BogAlgebra bracket(const BogAlgebra& x, const BogAlgebra& y) {
  CMat z1 = x.x1 * y.x1 + x.x2 * y.x2.conjugate() - y.x1 * x.x1 - y.x2 * x.x2.conjugate();
  CMat z2 = x.x1 * y.x2 + x.x2 * y.x1.conjugate() - y.x1 * x.x2 - y.x2 * x.x1.conjugate();
  return BogAlgebra(std::move(z1), std::move(z2));
}

/// Group product at block level.
inline BogUnitary compose(const BogUnitary& a, const BogUnitary& b) {
  if (a.n() != b.n()) throw DimensionMismatch("compose: mismatched dimensions");
  return BogUnitary(a.u * b.u + a.v * b.v.conjugate(), a.u * b.v + a.v * b.u.conjugate());
}

// ---------------------------------------------------------------------------
// Validation (diagnostic): max violation of the defining relations.
// ---------------------------------------------------------------------------

inline double validate_unitary(const BogUnitary& w) {
  const int d = w.n();
  const CMat id = CMat::Identity(d, d);
  const double r1 = op_norm(w.u * w.u.adjoint() + w.v * w.v.adjoint() - id);
  const double r2 = op_norm(w.u.adjoint() * w.u + w.v.transpose() * w.v.conjugate() - id);
  const double r3 = op_norm(w.u.adjoint() * w.v + w.v.transpose() * w.u.conjugate());
  const double r4 = op_norm(w.u * w.v.transpose() + w.v * w.u.transpose());
  return std::max(std::max(r1, r2), std::max(r3, r4));
}

inline double validate_algebra(const BogAlgebra& x) {
  return std::max(op_norm(x.x1 + x.x1.adjoint()), op_norm(x.x2 + x.x2.transpose()));
}

// ---------------------------------------------------------------------------
// Exponential and logarithm.
// ---------------------------------------------------------------------------

inline BogUnitary exp_alg(const BogAlgebra& x) {
  const CMat e = mat_exp(x.assemble());
  const int d = x.n();
  return BogUnitary(e.topLeftCorner(d, d), e.topRightCorner(d, d));
}

/// log(U) for ||U - 1||_res < 1; the result blocks are symmetrized so the
/// algebra invariants hold exactly.
inline BogAlgebra log_near_id(const BogUnitary& w) {
  const BlockOp e = w.as_block() - BlockOp::identity(w.n());
  if (restricted_norm(e) >= 1.0) throw LogDomain("log_near_id: ||U - 1||_res >= 1");
  const CMat l = detail::log_series(e.assemble());
  const int d = w.n();
  CMat x1 = l.topLeftCorner(d, d);
  CMat x2 = l.topRightCorner(d, d);
  x1 = 0.5 * (x1 - x1.adjoint()).eval();
  x2 = 0.5 * (x2 - x2.transpose()).eval();
  return BogAlgebra(std::move(x1), std::move(x2));
}

// ---------------------------------------------------------------------------
// Z2 index: dim ker(u) mod 2. Parity is discrete, so an ambiguous numerical
// kernel raises instead of guessing.
// ---------------------------------------------------------------------------

inline int z2_index(const BogUnitary& w, double tol_rel = 1e-8) {
  const auto sv = w.u.jacobiSvd().singularValues();
  const double smax = sv(0);
  if (smax == 0.0) return w.n() % 2;
  const double tol = tol_rel * smax;
  int kernel = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tol) {
      ++kernel;
    } else if (sv(i) <= 10.0 * tol) {
      throw IllConditionedIndex("z2_index: singular value inside the guard band");
    }
  }
  return kernel % 2;
}

/// Swap on basis vector k (1-based): S(phi_k, 0) = (0, phi_k); index 1 element.
inline BogUnitary swap_s1(int n, int k) {
  if (k < 1 || k > n) throw IndexOutOfRange("swap_s1: basis index out of range");
  CMat u = CMat::Identity(n, n);
  CMat v = CMat::Zero(n, n);
  u(k - 1, k - 1) = 0.0;
  v(k - 1, k - 1) = 1.0;
  return BogUnitary(std::move(u), std::move(v));
}

// ---------------------------------------------------------------------------
// Random generation (deterministic per seed).
// ---------------------------------------------------------------------------

inline BogAlgebra random_algebra(std::uint64_t seed, int n, double scale = 0.5) {
  if (scale <= 0.0) throw BadSpec("random_algebra: scale must be positive");
  Rng rng(seed);
  CMat a = rng.cgaussian_matrix(n, n);
  CMat b = rng.cgaussian_matrix(n, n);
  CMat x1 = scale * 0.5 * (a - a.adjoint());
  CMat x2 = scale * 0.5 * (b - b.transpose());
  return BogAlgebra(std::move(x1), std::move(x2));
}

/// Haar-ish random element of the requested connected component.
inline BogUnitary random_unitary(std::uint64_t seed, int n, int component = 0,
                                 double scale = 0.5) {
  BogUnitary w = exp_alg(random_algebra(seed, n, scale));
  if (component == 1) w = compose(w, swap_s1(n, 1));
  return w;
}

// ---------------------------------------------------------------------------
// Isomorphism with the restricted orthogonal picture.
//
// H^R uses the interleaved basis (Re phi_1, Im phi_1, Re phi_2, ...): J0 is
// block-diagonal rotation by 90 degrees and the linear/antilinear projections
// act on local 2x2 cells.
// ---------------------------------------------------------------------------

/// Real matrix of the complex-linear operator u.
inline RMat realify_linear(const CMat& u) {
  const int n = static_cast<int>(u.rows());
  RMat o = RMat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double re = u(j, k).real(), im = u(j, k).imag();
      o(2 * j, 2 * k) = re;
      o(2 * j, 2 * k + 1) = -im;
      o(2 * j + 1, 2 * k) = im;
      o(2 * j + 1, 2 * k + 1) = re;
    }
  return o;
}

/// Real matrix of the antilinear operator f -> v conj(f), i.e. v I0.
inline RMat realify_antilinear(const CMat& v) {
  const int n = static_cast<int>(v.rows());
  RMat o = RMat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double re = v(j, k).real(), im = v(j, k).imag();
      o(2 * j, 2 * k) = re;
      o(2 * j, 2 * k + 1) = im;
      o(2 * j + 1, 2 * k) = im;
      o(2 * j + 1, 2 * k + 1) = -re;
    }
  return o;
}

/// J0 = multiplication by i on H^R.
inline RMat j0_matrix(int n) {
  RMat j = RMat::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    j(2 * k, 2 * k + 1) = -1.0;
    j(2 * k + 1, 2 * k) = 1.0;
  }
  return j;
}

/// Xi^{-1}: O = u + v I0 on H^R.
inline RMat to_orthogonal(const BogUnitary& w) {
  return realify_linear(w.u) + realify_antilinear(w.v);
}

inline RMat realify_algebra(const BogAlgebra& x) {
  return realify_linear(x.x1) + realify_antilinear(x.x2);
}

/// Xi: recover (u, v) from an orthogonal O via its linear/antilinear parts.
inline BogUnitary from_orthogonal(const RMat& o, double tol = Tol::factor) {
  const int dim = static_cast<int>(o.rows());
  if (dim % 2 != 0 || o.cols() != dim)
    throw DimensionMismatch("from_orthogonal: expected even-dimensional square matrix");
  const int n = dim / 2;
  if ((o.transpose() * o - RMat::Identity(dim, dim)).norm() > tol * dim)
    throw NotOrthogonal("from_orthogonal: input is not orthogonal");
  const RMat j0 = j0_matrix(n);
  const RMat oc = 0.5 * (o - j0 * o * j0);
  const RMat oa = 0.5 * (o + j0 * o * j0);
  CMat u(n, n), v(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      u(j, k) = Complex(oc(2 * j, 2 * k), oc(2 * j + 1, 2 * k));
      v(j, k) = Complex(oa(2 * j, 2 * k), oa(2 * j + 1, 2 * k));
    }
  BogUnitary w(std::move(u), std::move(v));
  if (validate_unitary(w) > 10.0 * tol * dim)
    throw NotOrthogonal("from_orthogonal: recovered blocks violate the Bogoliubov relations");
  return w;
}

/// Vershik cocycle alpha(A, B) = Tr([A_a, B_a] J0) = 2 Tr(A_a B_a J0) on o_res.
inline double vershik_cocycle(const RMat& a, const RMat& b) {
  if (a.rows() != b.rows() || a.rows() != a.cols() || b.rows() != b.cols())
    throw DimensionMismatch("vershik_cocycle: mismatched dimensions");
  const int n = static_cast<int>(a.rows()) / 2;
  const RMat j0 = j0_matrix(n);
  const RMat aa = 0.5 * (a + j0 * a * j0);
  const RMat ba = 0.5 * (b + j0 * b * j0);
  return 2.0 * (aa * ba * j0).trace();
}

}  // namespace hfbgeo
