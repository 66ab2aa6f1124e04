#pragma once

#include "hfbgeo/orbitgeo.hpp"

#include <cmath>
#include <vector>

namespace hfbgeo {

// ---------------------------------------------------------------------------
// Cocycles.
// ---------------------------------------------------------------------------

/// s_+(X, Y) = Tr(X [iP_+, Y]) = 2 Im Tr(x2 y2-bar).
inline double cocycle_splus(const BogAlgebra& x, const BogAlgebra& y) {
  if (x.n() != y.n()) throw DimensionMismatch("cocycle_splus: mismatched dimensions");
  return 2.0 * (x.x2 * y.x2.conjugate()).trace().imag();
}

/// s_Gamma(X, Y) = Tr(X [i Gamma, Y]).
inline double cocycle_gamma(const G1pdm& g, const BogAlgebra& x, const BogAlgebra& y) {
  if (g.n() != x.n() || g.n() != y.n())
    throw DimensionMismatch("cocycle_gamma: mismatched dimensions");
  const CMat gm = g.assemble();
  const CMat ym = y.assemble();
  return (x.assemble() * (Complex(0.0, 1.0) * (gm * ym - ym * gm))).trace().real();
}

/// C-bilinear extension of s_Gamma to the complexified algebra (dense inputs).
inline Complex cocycle_gamma_c(const CMat& gamma_dense, const CMat& a, const CMat& b) {
  return (a * (Complex(0.0, 1.0) * (gamma_dense * b - b * gamma_dense))).trace();
}

/// Coboundary f_{Gamma_0}(Z) = -Tr(Z i Gamma_0) with Gamma_0 = Gamma - P_-.
inline double coboundary_f(const G1pdm& g, const BogAlgebra& z) {
  const int n = g.n();
  CMat gamma0 = g.assemble();
  gamma0.bottomRightCorner(n, n) -= CMat::Identity(n, n);
  return -(z.assemble() * (Complex(0.0, 1.0) * gamma0)).trace().real();
}

// ---------------------------------------------------------------------------
// Adapted real bases of u_Bog. Elements are orthonormal for the real
// Hilbert-Schmidt pairing Re Tr(A^* B) of the assembled matrices and each one
// lies either in the isotropy algebra or in its reductive complement.
// ---------------------------------------------------------------------------

namespace detail {

inline void append_x1_bases(int n, int k, int l, std::vector<BogAlgebra>& out) {
  CMat z = CMat::Zero(n, n);
  if (k == l) {
    z(k, k) = Complex(0.0, 1.0);
    out.emplace_back((1.0 / std::sqrt(2.0)) * z, CMat::Zero(n, n));
  } else {
    z(k, l) = 1.0;
    z(l, k) = -1.0;
    out.emplace_back(0.5 * z, CMat::Zero(n, n));
    z.setZero();
    z(k, l) = Complex(0.0, 1.0);
    z(l, k) = Complex(0.0, 1.0);
    out.emplace_back(0.5 * z, CMat::Zero(n, n));
  }
}

inline void append_x2_bases(int n, int k, int l, std::vector<BogAlgebra>& out) {
  CMat z = CMat::Zero(n, n);
  z(k, l) = 1.0;
  z(l, k) = -1.0;
  out.emplace_back(CMat::Zero(n, n), 0.5 * z);
  z *= Complex(0.0, 1.0);
  out.emplace_back(CMat::Zero(n, n), 0.5 * z);
}

}  // namespace detail

/// Orthonormal real basis of u_Bog; dimension 2n^2 - n.
inline std::vector<BogAlgebra> u_bog_basis(int n) {
  std::vector<BogAlgebra> out;
  out.reserve(2 * n * n - n);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) detail::append_x1_bases(n, k, l, out);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) detail::append_x2_bases(n, k, l, out);
  return out;
}

/// Orthonormal basis of the isotropy algebra u_Bog^Gamma at a diagonal base.
inline std::vector<BogAlgebra> isotropy_basis(const BasePoint& bp) {
  const int n = bp.n();
  std::vector<BogAlgebra> out;
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l)
      if (bp.cluster[k] == bp.cluster[l]) detail::append_x1_bases(n, k, l, out);
  if (bp.spec.has_half) {
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l)
        if (bp.cluster[k] == 0 && bp.cluster[l] == 0) detail::append_x2_bases(n, k, l, out);
  }
  return out;
}

/// Orthonormal basis of the reductive complement m_Gamma = ker(E_Gamma).
inline std::vector<BogAlgebra> complement_basis(const BasePoint& bp) {
  const int n = bp.n();
  std::vector<BogAlgebra> out;
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l)
      if (bp.cluster[k] != bp.cluster[l]) detail::append_x1_bases(n, k, l, out);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const bool in_corner =
          bp.spec.has_half && bp.cluster[k] == 0 && bp.cluster[l] == 0;
      if (!in_corner) detail::append_x2_bases(n, k, l, out);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Radical of s_Gamma.
// ---------------------------------------------------------------------------

struct RadicalReport {
  int null_dim = 0;          ///< numerical null-space dimension of the Gram matrix
  int iso_dim = 0;           ///< dimension of the isotropy algebra
  double max_angle = 0.0;    ///< largest principal angle (radians) between the spans
  double gram_gap = 0.0;     ///< smallest nonzero singular value of the Gram matrix
};

/// Builds the Gram matrix of s_Gamma on a real basis of u_Bog and compares its
/// numerical null space with the isotropy algebra.
inline RadicalReport radical_check(const BasePoint& bp, double tol = 1e-10) {
  const G1pdm g = bp.gamma();
  const std::vector<BogAlgebra> basis = u_bog_basis(bp.n());
  const int d = static_cast<int>(basis.size());
  RMat gram(d, d);
  for (int a = 0; a < d; ++a) {
    gram(a, a) = 0.0;
    for (int b = a + 1; b < d; ++b) {
      const double v = cocycle_gamma(g, basis[a], basis[b]);
      gram(a, b) = v;
      gram(b, a) = -v;
    }
  }
  Eigen::JacobiSVD<RMat> svd(gram, Eigen::ComputeFullV);
  const RVec sv = svd.singularValues();
  const double smax = std::max(sv(0), 1.0);
  RadicalReport rep;
  rep.gram_gap = 0.0;
  for (int i = 0; i < d; ++i) {
    if (sv(i) <= tol * smax) {
      ++rep.null_dim;
    } else if (sv(i) <= 10.0 * tol * smax) {
      throw RankAmbiguity("radical_check: singular value inside the guard band");
    } else {
      rep.gram_gap = sv(i);
    }
  }
  const RMat null_basis = svd.matrixV().rightCols(rep.null_dim);

  // Isotropy span in the same coordinates: the basis is adapted, so isotropy
  // elements are coordinate unit vectors.
  std::vector<int> iso_coords;
  {
    const std::vector<BogAlgebra> iso = isotropy_basis(bp);
    rep.iso_dim = static_cast<int>(iso.size());
    for (int a = 0; a < d; ++a)
      for (const auto& e : iso)
        if ((basis[a].x1 - e.x1).norm() + (basis[a].x2 - e.x2).norm() < 1e-14) {
          iso_coords.push_back(a);
          break;
        }
  }
  if (static_cast<int>(iso_coords.size()) != rep.iso_dim)
    throw NumericalFailure("radical_check: isotropy basis is not adapted");

  if (rep.null_dim == rep.iso_dim && rep.null_dim > 0) {
    RMat qiso = RMat::Zero(d, rep.iso_dim);
    for (int i = 0; i < rep.iso_dim; ++i) qiso(iso_coords[i], i) = 1.0;
    // sine formulation: accurate for small angles
    const RMat resid = null_basis - qiso * (qiso.transpose() * null_basis);
    const double s = std::min(1.0, op_norm(resid.cast<Complex>()));
    rep.max_angle = std::asin(s);
  } else if (rep.null_dim != rep.iso_dim) {
    rep.max_angle = 1.5707963267948966;  // dimensions differ; report pi/2
  }
  return rep;
}

/// Invariant symplectic form at Gamma_1 = U Gamma U^* on tangent
/// representatives: omega([X, Gamma_1], [Y, Gamma_1]) = s_Gamma(U^*XU, U^*YU).
inline double symplectic_form(const BasePoint& bp, const BogUnitary& u, const BogAlgebra& x,
                              const BogAlgebra& y) {
  const CMat um = u.assemble();
  const int n = bp.n();
  const auto pull = [&](const BogAlgebra& a) {
    const CMat m = um.adjoint() * a.assemble() * um;
    return BogAlgebra(0.5 * (m.topLeftCorner(n, n) - m.topLeftCorner(n, n).adjoint().eval()),
                      0.5 * (m.topRightCorner(n, n) - m.topRightCorner(n, n).transpose().eval()));
  };
  return cocycle_gamma(bp.gamma(), pull(x), pull(y));
}

// ---------------------------------------------------------------------------
// Kaehler polarizations.
// ---------------------------------------------------------------------------

/// Element [[x, z], [y, -x^T]] of g = gl_2(H (+) H, I, D); z, y antisymmetric.
struct GComplexElem {
  CMat x, z, y;

  int n() const { return static_cast<int>(x.rows()); }

  static GComplexElem zero(int n) {
    return GComplexElem{CMat::Zero(n, n), CMat::Zero(n, n), CMat::Zero(n, n)};
  }

  CMat assemble() const {
    const int d = n();
    CMat m(2 * d, 2 * d);
    m.topLeftCorner(d, d) = x;
    m.topRightCorner(d, d) = z;
    m.bottomLeftCorner(d, d) = y;
    m.bottomRightCorner(d, d) = -x.transpose();
    return m;
  }

  double norm() const { return std::sqrt(x.squaredNorm() + z.squaredNorm() + y.squaredNorm()); }
};

/// Embedding u_Bog -> g.
inline GComplexElem embed(const BogAlgebra& a) {
  return GComplexElem{a.x1, a.x2, a.x2.conjugate()};
}

/// Involution of g with fixed-point set u_Bog: A -> -A^*.
inline GComplexElem g_involution(const GComplexElem& a) {
  return GComplexElem{-a.x.adjoint(), -a.y.adjoint(), -a.z.adjoint()};
}

struct Polarization {
  bool has_half = false;
  std::vector<GComplexElem> basis_mod_k;  ///< spans P modulo k_C
  std::vector<GComplexElem> basis_kc;     ///< spans k_C = (u_Bog^Gamma)_C
  int dim_p = 0;                          ///< complex dimension of P
};

/// Builds the polarization adapted to the base point: x upper block-triangular
/// w.r.t. the ordering lambda_1 > ... > lambda_r > lambda_{r+1} = 0, y free
/// antisymmetric, and in the half branch the p1-corner of z.
inline Polarization polarization_build(const BasePoint& bp) {
  const int n = bp.n();
  Polarization p;
  p.has_half = bp.spec.has_half;
  const auto& cl = bp.cluster;

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (cl[a] < cl[b]) {  // strict upper block
        GComplexElem e = GComplexElem::zero(n);
        e.x(a, b) = 1.0;
        p.basis_mod_k.push_back(std::move(e));
      } else if (cl[a] == cl[b]) {  // block diagonal: k_C
        GComplexElem e = GComplexElem::zero(n);
        e.x(a, b) = 1.0;
        p.basis_kc.push_back(std::move(e));
      }
    }
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const bool corner = p.has_half && cl[k] == 0 && cl[l] == 0;
      GComplexElem e = GComplexElem::zero(n);
      e.y(k, l) = 1.0;
      e.y(l, k) = -1.0;
      if (corner)
        p.basis_kc.push_back(e);
      else
        p.basis_mod_k.push_back(e);
      if (corner) {
        GComplexElem ez = GComplexElem::zero(n);
        ez.z(k, l) = 1.0;
        ez.z(l, k) = -1.0;
        p.basis_kc.push_back(std::move(ez));
      }
    }
  // dim P = strict-upper + block-diagonal x's + all antisymmetric y + corner z.
  int corner_pairs = 0;
  if (p.has_half) {
    const int m1 = bp.spec.mults[0];
    corner_pairs = m1 * (m1 - 1) / 2;
  }
  int x_dims = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (cl[a] <= cl[b]) ++x_dims;
  p.dim_p = x_dims + n * (n - 1) / 2 + corner_pairs;
  return p;
}

/// Distance components of an arbitrary g-element from the pattern of P.
inline double in_p_residual(const BasePoint& bp, const GComplexElem& e) {
  const int n = bp.n();
  const auto& cl = bp.cluster;
  double sq = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (cl[a] > cl[b]) sq += std::norm(e.x(a, b));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const bool corner = bp.spec.has_half && cl[k] == 0 && cl[l] == 0;
      if (!corner) sq += std::norm(e.z(k, l));
    }
  sq += 0.25 * (e.z + e.z.transpose()).squaredNorm();
  sq += 0.25 * (e.y + e.y.transpose()).squaredNorm();
  return std::sqrt(sq);
}

/// Squared distance from the span of k_C (entrywise patterns, exact).
inline double kc_distance(const BasePoint& bp, const GComplexElem& e) {
  const int n = bp.n();
  const auto& cl = bp.cluster;
  double sq = 0.0;
  // x: off-block entries are orthogonal to k_C
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (cl[a] != cl[b]) sq += std::norm(e.x(a, b));
  // z, y: everything except (half) the antisymmetric corner
  auto corner_excess = [&](const CMat& m) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const bool corner = bp.spec.has_half && cl[k] == 0 && cl[l] == 0;
        if (!corner) s += std::norm(m(k, l));
      }
    if (bp.spec.has_half) s += 0.25 * (m + m.transpose()).squaredNorm();
    return s;
  };
  sq += corner_excess(e.z);
  sq += corner_excess(e.y);
  return std::sqrt(std::max(sq, 0.0));
}

/// Max |s_Gamma(a, b)| over pairs of polarization generators (C-bilinear).
inline double polarization_isotropy_residual(const BasePoint& bp, const Polarization& p) {
  const CMat gm = bp.gamma().assemble();
  std::vector<CMat> gens;
  for (const auto& e : p.basis_mod_k) gens.push_back(e.assemble());
  for (const auto& e : p.basis_kc) gens.push_back(e.assemble());
  double worst = 0.0;
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a + 1; b < gens.size(); ++b)
      worst = std::max(worst, std::abs(cocycle_gamma_c(gm, gens[a], gens[b])));
  return worst;
}

struct PositivityValue {
  double value = 0.0;    ///< -i s_Gamma(X, X-bar), trace evaluation
  double a_term = 0.0;   ///< 2 sum_{i<j} (l_i - l_j) ||p_i x p_j||_2^2
  double b_term = 0.0;   ///< Tr(y y^*) - Tr((y^* y + y y^*) Lambda)
  double c_term = 0.0;   ///< corner z contribution (zero when z = p1 z p1)
  double closed_form() const { return a_term + b_term + c_term; }
};

/// Positivity certificate -i s_Gamma(X, X-bar) for X in P \ k_C, together
/// with its closed-form block decomposition.
inline PositivityValue kaehler_positivity(const BasePoint& bp, const GComplexElem& e,
                                          double tol = 1e-10) {
  if (kc_distance(bp, e) <= tol * std::max(1.0, e.norm()))
    throw InKernel("kaehler_positivity: element lies in k_C");
  const CMat gm = bp.gamma().assemble();
  PositivityValue out;
  const GComplexElem eb = g_involution(e);
  out.value = (Complex(0.0, -1.0) * cocycle_gamma_c(gm, e.assemble(), eb.assemble())).real();

  const int n = bp.n();
  const int nc = bp.spec.cluster_count();
  std::vector<double> lam_of_cluster(nc + 1, 0.0);
  for (int i = 0; i < nc; ++i) lam_of_cluster[i] = bp.spec.lambdas[i];
  for (int i = 0; i <= nc; ++i)
    for (int j = i + 1; j <= nc; ++j) {
      double blk = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (bp.cluster[a] == i && bp.cluster[b] == j) blk += std::norm(e.x(a, b));
      out.a_term += 2.0 * (lam_of_cluster[i] - lam_of_cluster[j]) * blk;
    }

  CMat lambda_mat = CMat::Zero(n, n);
  for (int k = 0; k < n; ++k) lambda_mat(k, k) = bp.lambda(k);
  const CMat ys = e.y.adjoint();
  out.b_term = ((e.y * ys).trace() - ((ys * e.y + e.y * ys) * lambda_mat).trace()).real();
  const CMat zs = e.z.adjoint();
  out.c_term =
      -(e.z * ((CMat::Identity(n, n) - lambda_mat) * zs - zs * lambda_mat)).trace().real();
  return out;
}

/// Complex structure J on the reductive complement, induced by the splitting
/// X = a + a-bar with a in P. Signs are fixed so that omega(v, Jv) > 0.
inline BogAlgebra complex_structure(const BasePoint& bp, const BogAlgebra& xtan,
                                    double tol = 1e-8) {
  const BogAlgebra iso_part = cond_expectation(bp, xtan);
  if (std::max(op_norm(iso_part.x1), op_norm(iso_part.x2)) >
      tol * std::max(1.0, restricted_norm(xtan)))
    throw NotInComplement("complex_structure: input has an isotropy component");

  const int n = bp.n();
  const auto& cl = bp.cluster;
  GComplexElem a = GComplexElem::zero(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (cl[r] < cl[c])
        a.x(r, c) = xtan.x1(r, c);
      else if (cl[r] == cl[c])
        a.x(r, c) = 0.5 * xtan.x1(r, c);
    }
  a.y = xtan.x2.conjugate();
  if (bp.spec.has_half) {
    const CMat corner_x2 = detail::keep_half_corner(xtan.x2, bp);
    a.z = 0.5 * corner_x2;
    a.y -= (0.5 * corner_x2.conjugate()).eval();
  }
  const GComplexElem abar = g_involution(a);
  const CMat jx = Complex(0.0, 1.0) * (a.x - abar.x);
  const CMat jz = Complex(0.0, 1.0) * (a.z - abar.z);
  CMat x1 = 0.5 * (jx - jx.adjoint());
  CMat x2 = 0.5 * (jz - jz.transpose());
  return BogAlgebra(std::move(x1), std::move(x2));
}

}  // namespace hfbgeo
