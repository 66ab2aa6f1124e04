#pragma once

#include "hfbgeo/g1pdm.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace hfbgeo {

// ---------------------------------------------------------------------------
// Orbit-level geometry around a diagonal base point Gamma = Gamma[Lambda, 0].
// ---------------------------------------------------------------------------

struct BasePoint {
  RVec lambda;        ///< diagonal of Lambda, sorted decreasing
  SpectralData spec;
  std::vector<int> cluster;  ///< cluster id per basis index (kernel = last slot)

  int n() const { return static_cast<int>(lambda.size()); }
  G1pdm gamma() const { return G1pdm::diagonal(lambda); }

  static BasePoint from_lambda(const RVec& lam, double tol = Tol::cluster) {
    BasePoint b;
    b.lambda = lam;
    std::sort(b.lambda.data(), b.lambda.data() + b.lambda.size(), std::greater<double>());
    for (int i = 0; i < b.lambda.size(); ++i) {
      if (std::abs(b.lambda(i) - 0.5) <= 0.5 * tol) b.lambda(i) = 0.5;
      if (std::abs(b.lambda(i)) <= tol) b.lambda(i) = 0.0;
    }
    b.spec = spectral_data(b.lambda, tol);
    b.cluster = b.spec.cluster_of();
    return b;
  }

  static BasePoint from_request(const std::vector<double>& request, int n,
                                double tol = Tol::cluster) {
    if (static_cast<int>(request.size()) > n)
      throw BadSpec("BasePoint: more eigenvalues than modes");
    RVec lam = RVec::Zero(n);
    for (std::size_t i = 0; i < request.size(); ++i) {
      if (request[i] < 0.0 || request[i] > 0.5)
        throw BadSpec("BasePoint: eigenvalue outside [0, 1/2]");
      lam(static_cast<int>(i)) = request[i];
    }
    return from_lambda(lam, tol);
  }
};

// ---------------------------------------------------------------------------
// Conditional expectation E_Gamma and its extension to the full block algebra.
// Both are block-diagonal compressions w.r.t. the spectral projections; in the
// half branch the p1-corner of the off-diagonal blocks survives as well.
// ---------------------------------------------------------------------------

namespace detail {

inline CMat compress_block_diagonal(const CMat& x, const std::vector<int>& cluster) {
  CMat out = x;
  const int n = static_cast<int>(x.rows());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (cluster[a] != cluster[b]) out(a, b) = 0.0;
  return out;
}

inline CMat keep_half_corner(const CMat& x, const BasePoint& bp) {
  const int n = static_cast<int>(x.rows());
  CMat out = CMat::Zero(n, n);
  if (!bp.spec.has_half) return out;
  for (int a : bp.spec.members[0])
    for (int b : bp.spec.members[0]) out(a, b) = x(a, b);
  return out;
}

}  // namespace detail

inline BogAlgebra cond_expectation(const BasePoint& bp, const BogAlgebra& x) {
  if (x.n() != bp.n()) throw DimensionMismatch("cond_expectation: mismatched dimensions");
  CMat x1 = detail::compress_block_diagonal(x.x1, bp.cluster);
  CMat x2 = detail::keep_half_corner(x.x2, bp);
  return BogAlgebra(std::move(x1), std::move(x2));
}

/// Extension E~_Gamma to the whole restricted algebra B2(H (+) H, D).
inline BlockOp cond_expectation_full(const BasePoint& bp, const BlockOp& x) {
  if (x.n() != bp.n()) throw DimensionMismatch("cond_expectation_full: mismatched dimensions");
  return BlockOp(detail::compress_block_diagonal(x.x11, bp.cluster),
                 detail::keep_half_corner(x.x12, bp), detail::keep_half_corner(x.x21, bp),
                 detail::compress_block_diagonal(x.x22, bp.cluster));
}

/// Derivation delta_Gamma(X) = [i Gamma, X]; kernel = isotropy algebra.
inline BogAlgebra derivation(const G1pdm& g, const BogAlgebra& x) {
  if (g.n() != x.n()) throw DimensionMismatch("derivation: mismatched dimensions");
  const CMat gm = g.assemble();
  const CMat xm = x.assemble();
  const CMat c = Complex(0.0, 1.0) * (gm * xm - xm * gm);
  const int d = g.n();
  CMat z1 = c.topLeftCorner(d, d);
  CMat z2 = c.topRightCorner(d, d);
  z1 = 0.5 * (z1 - z1.adjoint()).eval();
  z2 = 0.5 * (z2 - z2.transpose()).eval();
  return BogAlgebra(std::move(z1), std::move(z2));
}

/// Extension of the derivation to BlockOp arguments.
inline BlockOp derivation_full(const G1pdm& g, const BlockOp& x) {
  if (g.n() != x.n()) throw DimensionMismatch("derivation_full: mismatched dimensions");
  const CMat gm = g.assemble();
  const CMat xm = x.assemble();
  return BlockOp::split((Complex(0.0, 1.0) * (gm * xm - xm * gm)).eval());
}

/// Projection onto the reductive complement m_Gamma = ker(E_Gamma).
inline BogAlgebra tangent_project(const BasePoint& bp, const BogAlgebra& x) {
  return x - cond_expectation(bp, x);
}

// ---------------------------------------------------------------------------
// Closed-range constants and the cross-section radius.
// ---------------------------------------------------------------------------

struct SectionConstants {
  double c_tilde = 0.0;  ///< restricted-norm closed-range constant
  double c_zero = 0.0;   ///< operator-norm closed-range constant
  double c_one = 0.0;    ///< C1 of the norm-control estimate
  double big_k = 0.0;    ///< bound on ||U||_res near the base point
  double radius = 0.0;   ///< cross-section radius r_Gamma
};

/// Inverse-gap sums of the closed-range estimate. The index set is the
/// distinct eigenvalues plus lambda_0 = 0; in the half branch the second sum
/// excludes the (1/2, 1/2) term. Empty sums contribute an infinite reciprocal
/// that drops out of the min.
inline std::pair<double, double> closed_range_constants(const SpectralData& spec,
                                                        double tol = 1e-12) {
  std::vector<double> vals = spec.lambdas;  // in (0, 1/2], decreasing
  vals.push_back(0.0);                      // lambda_0, present regardless of p0 rank
  const std::size_t m = vals.size();
  const double inf = std::numeric_limits<double>::infinity();

  double sum1 = 0.0;
  bool any1 = false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const double d = std::abs(vals[i] - vals[j]);
      if (d <= tol) throw DegenerateSpectrum("closed_range_constants: |l_i - l_j| ~ 0");
      sum1 += 1.0 / d;
      any1 = true;
    }

  double sum2 = 0.0;
  bool any2 = false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (spec.has_half && i == 0 && j == 0) continue;  // the (1/2, 1/2) slot
      const double d = std::abs(vals[i] + vals[j] - 1.0);
      if (d <= tol) throw DegenerateSpectrum("closed_range_constants: |l_i + l_j - 1| ~ 0");
      sum2 += 1.0 / d;
      any2 = true;
    }

  const double inv1 = any1 ? 1.0 / sum1 : inf;
  const double inv2 = any2 ? 1.0 / sum2 : inf;
  const double c_tilde = std::min(inv1, inv2);
  const double c_zero = (any1 || any2) ? 0.5 / (sum1 + sum2) : inf;
  return {c_tilde, c_zero};
}

/// All constants entering the local cross section.
///
/// C1 and K follow the norm-control estimate: C1 = c0/6 + 2 ||Lambda||_2 +
/// 2 ||1 - p0||_2 and (9/sqrt(65)) C1 + 2 ||1 - p0||_2 bounds ||v||_2. The
/// stored K bounds the full restricted norm ||U||_res = 2 max{||u||, ||v||_2}
/// with ||u|| <= 1, hence the outer 2 max{1, .}.
inline SectionConstants section_constants(const BasePoint& bp) {
  SectionConstants sc;
  const auto [ct, cz] = closed_range_constants(bp.spec);
  sc.c_tilde = ct;
  sc.c_zero = cz;
  double lam2sq = 0.0;
  for (std::size_t i = 0; i < bp.spec.lambdas.size(); ++i)
    lam2sq += bp.spec.mults[i] * bp.spec.lambdas[i] * bp.spec.lambdas[i];
  const double rank_not_p0 = static_cast<double>(bp.n() - bp.spec.p0_rank());
  const double hs_one_minus_p0 = std::sqrt(rank_not_p0);
  sc.c_one = sc.c_zero / 6.0 + 2.0 * std::sqrt(lam2sq) + 2.0 * hs_one_minus_p0;
  sc.big_k = 2.0 * std::max(1.0, (9.0 / std::sqrt(65.0)) * sc.c_one + 2.0 * hs_one_minus_p0);
  if (!std::isfinite(sc.c_tilde) || !std::isfinite(sc.c_zero)) {
    sc.radius = 1.0;
  } else {
    sc.radius = 0.5 * std::min(sc.c_zero / 3.0, sc.c_tilde / (sc.big_k * sc.big_k));
  }
  return sc;
}

// ---------------------------------------------------------------------------
// Local cross section s(U Gamma U^*) = U Omega(E~_Gamma(U^*)).
// ---------------------------------------------------------------------------

inline BogUnitary local_cross_section(const BasePoint& bp, const BogUnitary& witness,
                                      const SectionConstants& sc, double tol = Tol::factor) {
  const G1pdm g = bp.gamma();
  const double dist = restricted_norm(BlockOp::split(
      act(witness, g).assemble() - g.assemble()));
  if (dist >= sc.radius)
    throw OutsideRadius("local_cross_section: orbit point outside the section radius");
  const BlockOp compressed = cond_expectation_full(bp, witness.adjoint().as_block());
  CMat omega;
  try {
    omega = polar_unitary(compressed.assemble(), tol);
  } catch (const SingularInput&) {
    throw SingularCompression(
        "local_cross_section: compressed witness is singular inside the radius");
  }
  const int n = bp.n();
  const BogUnitary om(omega.topLeftCorner(n, n), omega.topRightCorner(n, n));
  return compose(witness, om);
}

inline BogUnitary local_cross_section(const BasePoint& bp, const BogUnitary& witness) {
  return local_cross_section(bp, witness, section_constants(bp));
}

/// Projection onto the reductive complement at Gamma_1 = U Gamma U^*:
/// X -> X - U E_Gamma(U^* X U) U^*. Well defined by witness independence.
inline BogAlgebra reductive_complement_project(const BasePoint& bp, const BogUnitary& u,
                                               const BogAlgebra& x) {
  const CMat um = u.assemble();
  const CMat inner = um.adjoint() * x.assemble() * um;
  const int n = bp.n();
  BogAlgebra pulled(0.5 * (inner.topLeftCorner(n, n) -
                           inner.topLeftCorner(n, n).adjoint().eval()),
                    0.5 * (inner.topRightCorner(n, n) -
                           inner.topRightCorner(n, n).transpose().eval()));
  const BogAlgebra compressed = cond_expectation(bp, pulled);
  const CMat back = um * compressed.assemble() * um.adjoint();
  BogAlgebra proj(0.5 * (back.topLeftCorner(n, n) - back.topLeftCorner(n, n).adjoint().eval()),
                  0.5 * (back.topRightCorner(n, n) - back.topRightCorner(n, n).transpose().eval()));
  return x - proj;
}

// ---------------------------------------------------------------------------
// Geodesics on O(P_-) and connectivity.
// ---------------------------------------------------------------------------

namespace detail {

/// f(sqrt(H)) for Hermitian PSD H via eigendecomposition.
template <class F>
CMat func_of_sqrt(const CMat& h, F f) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const RVec d = es.eigenvalues().cwiseMax(0.0);
  CVec fd(d.size());
  for (int i = 0; i < d.size(); ++i) fd(i) = f(std::sqrt(d(i)));
  return es.eigenvectors() * fd.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Closed-form geodesic of the canonical connection on O(P_-) starting at P_-
/// with velocity [X, P_-], X = [[0, y], [y-bar, 0]], y antisymmetric.
inline G1pdm geodesic_pminus(const CMat& y, double t) {
  const int n = static_cast<int>(y.rows());
  if (op_norm(y + y.transpose()) > 1e-10 * std::max(1.0, op_norm(y)))
    throw BadSpec("geodesic_pminus: y must be antisymmetric");
  const CMat ysy = y.adjoint() * y;   // |y|^2
  const CMat yys = y * y.adjoint();   // |y*|^2
  const auto cos_f = [t](double s) { return std::cos(t * s); };
  const auto sinc_f = [t](double s) { return s == 0.0 ? t : std::sin(t * s) / s; };
  const CMat cos_ystar = detail::func_of_sqrt(yys, cos_f);
  const CMat cos_y = detail::func_of_sqrt(ysy, cos_f);
  const CMat sinc_y = detail::func_of_sqrt(ysy, sinc_f);       // t sinc(|ty|)
  const CMat sinc_ystar = detail::func_of_sqrt(yys, sinc_f);   // t sinc(|ty*|)

  CMat left(2 * n, 2 * n), right(2 * n, 2 * n);
  left.topLeftCorner(n, n) = cos_ystar;
  left.topRightCorner(n, n) = y * sinc_y;
  left.bottomLeftCorner(n, n) = y.adjoint() * sinc_ystar;
  left.bottomRightCorner(n, n) = cos_y;
  right.topLeftCorner(n, n) = cos_ystar;
  right.topRightCorner(n, n) = sinc_ystar * y;
  right.bottomLeftCorner(n, n) = sinc_y * y.adjoint();
  right.bottomRightCorner(n, n) = cos_y;

  CMat pm = CMat::Zero(2 * n, 2 * n);
  pm.bottomRightCorner(n, n) = CMat::Identity(n, n);
  const CMat prod = left * pm * right;
  CMat gamma = prod.topLeftCorner(n, n);
  CMat alpha = prod.topRightCorner(n, n);
  gamma = 0.5 * (gamma + gamma.adjoint()).eval();
  alpha = 0.5 * (alpha - alpha.transpose()).eval();
  return G1pdm(std::move(gamma), std::move(alpha));
}

/// Witness for the connectivity dichotomy: when 1/2 is an eigenvalue, an
/// index-1 stabilizer exists (the swap on a half-eigenvector); otherwise none.
inline std::optional<BogUnitary> connectivity_witness(const BasePoint& bp) {
  if (!bp.spec.has_half) return std::nullopt;
  const int k = bp.spec.members[0].front();
  return swap_s1(bp.n(), k + 1);
}

}  // namespace hfbgeo
