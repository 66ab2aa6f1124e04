#pragma once

#include "hfbgeo/boggroup.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

namespace hfbgeo {

// ---------------------------------------------------------------------------
// Admissible generalized one-particle density matrices.
// ---------------------------------------------------------------------------

/// Gamma = [[gamma, alpha], [alpha^*, 1 - gamma-bar]] with 0 <= Gamma <= 1.
struct G1pdm {
  CMat gamma, alpha;

  G1pdm() = default;
  G1pdm(CMat g, CMat a) : gamma(std::move(g)), alpha(std::move(a)) {
    if (gamma.rows() != gamma.cols() || alpha.rows() != alpha.cols() ||
        gamma.rows() != alpha.rows())
      throw DimensionMismatch("G1pdm blocks must be square of equal dimension");
  }

  int n() const { return static_cast<int>(gamma.rows()); }

  static G1pdm p_minus(int n) { return G1pdm(CMat::Zero(n, n), CMat::Zero(n, n)); }

  /// Diagonal point Gamma[Lambda, 0].
  static G1pdm diagonal(const RVec& lambda) {
    const int n = static_cast<int>(lambda.size());
    CMat g = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = lambda(i);
    return G1pdm(std::move(g), CMat::Zero(n, n));
  }

  CMat assemble() const {
    const int d = n();
    CMat m(2 * d, 2 * d);
    m.topLeftCorner(d, d) = gamma;
    m.topRightCorner(d, d) = alpha;
    m.bottomLeftCorner(d, d) = alpha.adjoint();
    m.bottomRightCorner(d, d) = CMat::Identity(d, d) - gamma.conjugate();
    return m;
  }

  BlockOp as_block() const {
    return BlockOp(gamma, alpha, alpha.adjoint(), CMat::Identity(n(), n()) - gamma.conjugate());
  }
};

/// Max violation of the structural and positivity constraints.
inline double validate_g1pdm(const G1pdm& g) {
  double r = op_norm(g.gamma - g.gamma.adjoint());
  r = std::max(r, op_norm(g.alpha + g.alpha.transpose()));
  Eigen::SelfAdjointEigenSolver<CMat> es(g.assemble(), Eigen::EigenvaluesOnly);
  r = std::max(r, std::max(-es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff() - 1.0));
  return std::max(r, 0.0);
}

/// Conjugation action U . Gamma = U Gamma U^*, assembled block-by-block.
inline G1pdm act(const BogUnitary& w, const G1pdm& g) {
  if (w.n() != g.n()) throw DimensionMismatch("act: mismatched dimensions");
  const int d = g.n();
  const CMat one_minus = CMat::Identity(d, d) - g.gamma.conjugate();
  const CMat as = g.alpha.adjoint();
  CMat gp = w.u * g.gamma * w.u.adjoint() + w.v * as * w.u.adjoint() +
            w.u * g.alpha * w.v.adjoint() + w.v * one_minus * w.v.adjoint();
  CMat ap = w.u * g.gamma * w.v.transpose() + w.v * as * w.v.transpose() +
            w.u * g.alpha * w.u.transpose() + w.v * one_minus * w.u.transpose();
  gp = 0.5 * (gp + gp.adjoint()).eval();
  ap = 0.5 * (ap - ap.transpose()).eval();
  return G1pdm(std::move(gp), std::move(ap));
}

// ---------------------------------------------------------------------------
// Spectral data of a diagonal Lambda: distinct eigenvalues in (0, 1/2],
// multiplicities, 0/1 diagonal projections, kernel projection.
// ---------------------------------------------------------------------------

struct SpectralData {
  int n = 0;
  std::vector<double> lambdas;              ///< distinct, strictly decreasing, in (0, 1/2]
  std::vector<int> mults;
  std::vector<std::vector<int>> members;    ///< basis indices per eigenvalue cluster
  std::vector<int> p0_members;              ///< basis indices of ker(Lambda)
  bool has_half = false;                    ///< lambda_1 = 1/2 present

  int cluster_count() const { return static_cast<int>(lambdas.size()); }
  int p0_rank() const { return static_cast<int>(p0_members.size()); }

  /// Cluster id per basis index; kernel gets id cluster_count() (the r+1 slot).
  std::vector<int> cluster_of() const {
    std::vector<int> c(n, cluster_count());
    for (int i = 0; i < cluster_count(); ++i)
      for (int k : members[i]) c[k] = i;
    return c;
  }

  CMat projection(int i) const {
    CMat p = CMat::Zero(n, n);
    for (int k : members[i]) p(k, k) = 1.0;
    return p;
  }
  CMat p0() const {
    CMat p = CMat::Zero(n, n);
    for (int k : p0_members) p(k, k) = 1.0;
    return p;
  }
};

/// Cluster the diagonal of Lambda into distinct eigenvalues. Values within
/// tol/2 of 1/2 are snapped to 1/2; values within tol of 0 go to the kernel.
inline SpectralData spectral_data(const RVec& lambda_diag, double tol = Tol::cluster) {
  const int n = static_cast<int>(lambda_diag.size());
  std::vector<std::pair<double, int>> vals(n);
  for (int k = 0; k < n; ++k) {
    double lv = lambda_diag(k);
    if (lv < -tol || lv > 0.5 + tol)
      throw BadSpec("spectral_data: eigenvalue outside [0, 1/2]");
    if (std::abs(lv - 0.5) <= 0.5 * tol) lv = 0.5;
    lv = std::clamp(lv, 0.0, 0.5);
    vals[k] = {lv, k};
  }
  std::sort(vals.begin(), vals.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  SpectralData sd;
  sd.n = n;
  std::size_t i = 0;
  while (i < vals.size()) {
    std::size_t j = i;
    while (j + 1 < vals.size() && vals[i].first - vals[j + 1].first <= tol) ++j;
    const double rep = vals[i].first;
    if (j + 1 < vals.size() && vals[j].first - vals[j + 1].first < 2.0 * tol)
      throw ClusterAmbiguity("spectral_data: clusters separated by less than 2*tol");
    std::vector<int> idx;
    for (std::size_t k = i; k <= j; ++k) idx.push_back(vals[k].second);
    std::sort(idx.begin(), idx.end());
    if (rep <= tol) {
      sd.p0_members = idx;
    } else {
      sd.lambdas.push_back(rep);
      sd.mults.push_back(static_cast<int>(idx.size()));
      sd.members.push_back(std::move(idx));
    }
    i = j + 1;
  }
  sd.has_half = !sd.lambdas.empty() && sd.lambdas.front() == 0.5;
  return sd;
}

// ---------------------------------------------------------------------------
// Bogoliubov diagonalization: W Gamma W^* = diag(Lambda, 1 - Lambda).
//
// The Hermitian eigenproblem of the assembled Gamma pairs eigenvectors
// psi <-> I psi across lambda <-> 1 - lambda. Columns of W^* are eigenvectors
// for lambda <= 1/2 followed by their I-images, which forces W = I W I.
// The lambda = 1/2 eigenspace needs an isotropic half: it is produced from an
// I-fixed orthonormal basis obtained by Takagi factorization of the Gram
// matrix B_ij = <xi_i, I xi_j>.
// ---------------------------------------------------------------------------

struct DiagonalizeResult {
  BogUnitary w;
  RVec lambda;     ///< diagonal of Lambda, sorted decreasing, values in [0, 1/2]
  double residual; ///< || act(w, g) - diag(Lambda, 1-Lambda) ||
};

namespace detail {

/// Antilinear conjugation I on H (+) H: (f, g) -> (conj g, conj f).
inline CVec apply_conj_I(const CVec& psi) {
  const int d = static_cast<int>(psi.size()) / 2;
  CVec out(2 * d);
  out.head(d) = psi.tail(d).conjugate();
  out.tail(d) = psi.head(d).conjugate();
  return out;
}

/// Takagi factorization B = Q Q^T of a unitary complex symmetric matrix.
/// The columns of Q are a real-orthonormal basis of the fixed space of the
/// antilinear involution w -> B conj(w); on that space the inner product is
/// real, so Gram-Schmidt over the reals yields a complex-unitary Q.
inline CMat takagi_unitary_symmetric(const CMat& b) {
  const int m = static_cast<int>(b.rows());
  const auto tau = [&b](const CVec& w) -> CVec { return b * w.conjugate(); };
  std::vector<CVec> candidates;
  candidates.reserve(2 * m);
  for (int k = 0; k < m; ++k) {
    CVec e = CVec::Zero(m);
    e(k) = 1.0;
    candidates.push_back(e + tau(e));
    CVec ie = CVec::Zero(m);
    ie(k) = Complex(0.0, 1.0);
    candidates.push_back(ie + tau(ie));
  }
  std::vector<CVec> basis;
  for (const CVec& c : candidates) {
    CVec w = c;
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& q : basis) w -= q * q.dot(w).real();
    const double nrm = w.norm();
    if (nrm > 1e-6) basis.push_back(w / nrm);
    if (static_cast<int>(basis.size()) == m) break;
  }
  if (static_cast<int>(basis.size()) != m)
    throw NumericalFailure("takagi: fixed-space dimension deficit");
  CMat q(m, m);
  for (int k = 0; k < m; ++k) q.col(k) = basis[k];
  if ((q * q.transpose() - b).norm() > 1e-8 * m)
    throw NumericalFailure("takagi: factorization residual too large");
  return q;
}

}  // namespace detail

inline DiagonalizeResult diagonalize(const G1pdm& g, double tol = Tol::cluster) {
  const int n = g.n();
  Eigen::SelfAdjointEigenSolver<CMat> es(g.assemble());
  if (es.info() != Eigen::Success) throw NumericalFailure("diagonalize: eigensolver failed");
  const RVec ev = es.eigenvalues();  // ascending
  const CMat evec = es.eigenvectors();

  // Partition eigenpairs: mu < 1/2 - tol (lower family) and |mu - 1/2| <= tol.
  std::vector<int> lower, half;
  for (int k = 0; k < 2 * n; ++k) {
    if (std::abs(ev(k) - 0.5) <= tol)
      half.push_back(k);
    else if (ev(k) < 0.5)
      lower.push_back(k);
  }
  if (half.size() % 2 != 0)
    throw NumericalFailure("diagonalize: odd-dimensional half eigenspace");
  const int jh = static_cast<int>(half.size()) / 2;
  if (static_cast<int>(lower.size()) + jh != n)
    throw NumericalFailure("diagonalize: eigenvalues do not pair across 1/2");

  CMat psi(2 * n, n);
  RVec lam(n);
  int col = 0;
  for (int k : lower) {
    psi.col(col) = evec.col(k);
    lam(col) = std::clamp(ev(k), 0.0, 0.5);
    ++col;
  }
  if (jh > 0) {
    // Isotropic half-basis of the 1/2-eigenspace.
    CMat xi(2 * n, 2 * jh);
    for (int t = 0; t < 2 * jh; ++t) xi.col(t) = evec.col(half[t]);
    CMat b(2 * jh, 2 * jh);
    for (int a = 0; a < 2 * jh; ++a) {
      const CVec ixb = detail::apply_conj_I(xi.col(a));
      for (int c = 0; c < 2 * jh; ++c) b(c, a) = xi.col(c).dot(ixb);
    }
    b = 0.5 * (b + b.transpose()).eval();
    const CMat q = detail::takagi_unitary_symmetric(b);
    const CMat eta = xi * q;  // I-fixed orthonormal basis of the eigenspace
    for (int t = 0; t < jh; ++t) {
      psi.col(col) = (eta.col(2 * t) + Complex(0, 1) * eta.col(2 * t + 1)) / std::sqrt(2.0);
      lam(col) = 0.5;
      ++col;
    }
  }

  // Order columns by eigenvalue decreasing; ties by largest-component index.
  std::vector<int> order(n);
  for (int k = 0; k < n; ++k) order[k] = k;
  std::vector<int> argmax(n);
  for (int k = 0; k < n; ++k) {
    int am = 0;
    for (int r = 1; r < 2 * n; ++r)
      if (std::abs(psi(r, k)) > std::abs(psi(am, k))) am = r;
    argmax[k] = am;
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
    if (lam(a) != lam(c)) return lam(a) > lam(c);
    return argmax[a] < argmax[c];
  });

  CMat wstar(2 * n, 2 * n);
  RVec lam_sorted(n);
  for (int k = 0; k < n; ++k) {
    wstar.col(k) = psi.col(order[k]);
    wstar.col(n + k) = detail::apply_conj_I(psi.col(order[k]));
    lam_sorted(k) = lam(order[k]);
  }

  const CMat wmat = wstar.adjoint();
  BogUnitary w(wmat.topLeftCorner(n, n), wmat.topRightCorner(n, n));

  const G1pdm diag_target = G1pdm::diagonal(lam_sorted);
  double residual = op_norm(act(w, g).assemble() - diag_target.assemble());
  if (residual > std::max(tol, 1e-9)) {
    // refine: replace W by the closest Bogoliubov unitary and re-check
    const CMat pw = polar_unitary(w.assemble());
    w = BogUnitary(pw.topLeftCorner(n, n), pw.topRightCorner(n, n));
    residual = op_norm(act(w, g).assemble() - diag_target.assemble());
    if (residual > std::max(tol, 1e-9) * 100.0)
      throw NumericalFailure("diagonalize: residual above tolerance after refinement");
  }
  return DiagonalizeResult{std::move(w), std::move(lam_sorted), residual};
}

// ---------------------------------------------------------------------------
// Derived predicates.
// ---------------------------------------------------------------------------

/// || Gamma^2 - Gamma || <= tol, i.e. the state is pure.
inline bool is_pure(const G1pdm& g, double tol = Tol::factor) {
  const CMat m = g.assemble();
  return op_norm(m * m - m) <= tol;
}

struct OrbitWitness {
  bool same = false;
  std::optional<BogUnitary> witness;  ///< conjugates g1 to g2 when same
  double residual = 0.0;
};

/// Orbits are classified by the eigenvalue list of Lambda.
inline OrbitWitness same_orbit(const G1pdm& g1, const G1pdm& g2, double tol = 1e-8) {
  if (g1.n() != g2.n()) throw DimensionMismatch("same_orbit: mismatched dimensions");
  const DiagonalizeResult d1 = diagonalize(g1);
  const DiagonalizeResult d2 = diagonalize(g2);
  OrbitWitness out;
  if ((d1.lambda - d2.lambda).cwiseAbs().maxCoeff() > tol) return out;
  out.same = true;
  BogUnitary w = compose(d2.w.adjoint(), d1.w);
  out.residual = op_norm(act(w, g1).assemble() - g2.assemble());
  out.witness = std::move(w);
  return out;
}

/// act(random_unitary(seed), Gamma[Lambda, 0]) for the requested eigenvalues.
/// `request` may be shorter than n; missing entries are zero.
inline G1pdm random_g1pdm(std::uint64_t seed, int n, const std::vector<double>& request) {
  if (static_cast<int>(request.size()) > n)
    throw BadSpec("random_g1pdm: more eigenvalues than modes");
  RVec lam = RVec::Zero(n);
  for (std::size_t i = 0; i < request.size(); ++i) {
    if (request[i] < 0.0 || request[i] > 0.5)
      throw BadSpec("random_g1pdm: requested eigenvalue outside [0, 1/2]");
    lam(static_cast<int>(i)) = request[i];
  }
  std::sort(lam.data(), lam.data() + n, std::greater<double>());
  return act(random_unitary(seed, n), G1pdm::diagonal(lam));
}

}  // namespace hfbgeo
