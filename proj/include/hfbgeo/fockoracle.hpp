#pragma once

#include "hfbgeo/g1pdm.hpp"

#include <vector>

namespace hfbgeo {

// ---------------------------------------------------------------------------
// Brute-force fermionic Fock space at n <= kMaxModes modes (dimension 2^n).
// Basis states are bitmasks: bit k set = mode k occupied; index 0 = vacuum.
// ---------------------------------------------------------------------------

inline constexpr int kMaxModes = 6;

using FockOp = CMat;

inline int fock_dim(int n) { return 1 << n; }

inline void check_mode_cap(int n) {
  if (n < 1) throw BadSpec("fock: need at least one mode");
  if (n > kMaxModes) throw CapExceeded("fock: mode count exceeds the brute-force cap");
}

/// Jordan-Wigner creation operator c*_k (k is 1-based).
inline FockOp creation(int n, int k) {
  check_mode_cap(n);
  if (k < 1 || k > n) throw IndexOutOfRange("creation: mode index out of range");
  const int bit = k - 1;
  const int dim = fock_dim(n);
  FockOp m = FockOp::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    if (s & (1 << bit)) continue;
    int below = 0;
    for (int i = 0; i < bit; ++i)
      if (s & (1 << i)) ++below;
    m(s | (1 << bit), s) = (below % 2 == 0) ? 1.0 : -1.0;
  }
  return m;
}

inline FockOp annihilation(int n, int k) { return creation(n, k).adjoint(); }

/// c*(f) = sum_k f_k c*_k (linear in f).
inline FockOp creation_of(int n, const CVec& f) {
  const int dim = fock_dim(n);
  FockOp m = FockOp::Zero(dim, dim);
  for (int k = 0; k < n; ++k)
    if (f(k) != Complex(0.0)) m += f(k) * creation(n, k + 1);
  return m;
}

/// c(f) = (c*(f))^* (conjugate-linear in f).
inline FockOp annihilation_of(int n, const CVec& f) { return creation_of(n, f).adjoint(); }

/// Particle number operator; diagonal with occupation counts.
inline FockOp number_operator(int n) {
  check_mode_cap(n);
  const int dim = fock_dim(n);
  FockOp m = FockOp::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    int cnt = 0;
    for (int i = 0; i < n; ++i)
      if (s & (1 << i)) ++cnt;
    m(s, s) = static_cast<double>(cnt);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Unitary implementer of a Bogoliubov transformation.
//
// The transformed operators d*_k = c*(u phi_k) + c(v conj(phi_k)) satisfy the
// CARs; the d-vacuum is the null vector of sum_k d*_k d_k (unique at finite n,
// gap 1). The implementer maps each occupation basis vector, written as an
// ordered c*-monomial on the vacuum, to the same d*-monomial on the d-vacuum.
// Phase gauge: largest-magnitude entry of the first column is real positive.
// ---------------------------------------------------------------------------

inline FockOp implementer(const BogUnitary& w) {
  const int n = w.n();
  check_mode_cap(n);
  const int dim = fock_dim(n);

  std::vector<FockOp> dstar(n);
  for (int k = 0; k < n; ++k)
    dstar[k] = creation_of(n, w.u.col(k)) + annihilation_of(n, w.v.col(k));

  // number operator of the d-modes: sum_k d*_k d_k
  FockOp nd = FockOp::Zero(dim, dim);
  for (int k = 0; k < n; ++k) nd += dstar[k] * dstar[k].adjoint();
  Eigen::SelfAdjointEigenSolver<CMat> es(nd);
  const RVec ev = es.eigenvalues();
  if (ev(0) > 1e-10 || (dim > 1 && ev(1) < 0.5))
    throw VacuumDegeneracy("implementer: d-vacuum is not numerically unique");
  const CVec vac = es.eigenvectors().col(0);

  FockOp u = FockOp::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    CVec col = vac;
    for (int k = n - 1; k >= 0; --k)
      if (s & (1 << k)) col = (dstar[k] * col).eval();
    u.col(s) = col;
  }
  // phase gauge
  int am = 0;
  for (int r = 1; r < dim; ++r)
    if (std::abs(u(r, 0)) > std::abs(u(am, 0))) am = r;
  const Complex pivot = u(am, 0);
  if (std::abs(pivot) > 0.0) u *= std::conj(pivot) / std::abs(pivot);
  return u;
}

/// Max residual of the implementing relation over the basis modes:
/// || U c*_k U^* - (c*(u phi_k) + c(v conj(phi_k))) ||.
inline double implementer_residual(const BogUnitary& w, const FockOp& u) {
  const int n = w.n();
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    const FockOp lhs = u * creation(n, k + 1) * u.adjoint();
    const FockOp rhs = creation_of(n, w.u.col(k)) + annihilation_of(n, w.v.col(k));
    worst = std::max(worst, op_norm(lhs - rhs));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Quasi-free states.
// ---------------------------------------------------------------------------

struct QfState {
  FockOp rho;
  int n = 0;
};

/// Density matrix of the unique quasi-free state with g1-pdm G: diagonalize
/// G, build the product state rho_diag = prod_k (l_k n_k + (1-l_k)(1-n_k)),
/// and transport it back with the implementer of the diagonalizer W so the
/// extraction round-trip closes: rho = U_W^* rho_diag U_W.
inline QfState quasifree_state(const G1pdm& g) {
  const int n = g.n();
  check_mode_cap(n);
  const DiagonalizeResult d = diagonalize(g);
  const int dim = fock_dim(n);
  RVec diag(dim);
  for (int s = 0; s < dim; ++s) {
    double p = 1.0;
    for (int k = 0; k < n; ++k)
      p *= (s & (1 << k)) ? d.lambda(k) : 1.0 - d.lambda(k);
    diag(s) = p;
  }
  const FockOp uw = implementer(d.w);
  FockOp rho = uw.adjoint() * diag.asDiagonal().toDenseMatrix().cast<Complex>() * uw;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return QfState{std::move(rho), n};
}

/// Extracts the g1-pdm from a state: gamma_mk = omega(c*_k c_m) and
/// (alpha^*)_mk = omega(c*_k c*_m).
inline G1pdm g1pdm_of_state(const QfState& state) {
  const int n = state.n;
  CMat gamma(n, n), alpha_star(n, n);
  std::vector<FockOp> cr(n);
  for (int k = 0; k < n; ++k) cr[k] = creation(n, k + 1);
  for (int k = 0; k < n; ++k)
    for (int m = 0; m < n; ++m) {
      gamma(m, k) = (state.rho * cr[k] * cr[m].adjoint()).trace();
      alpha_star(m, k) = (state.rho * cr[k] * cr[m]).trace();
    }
  CMat alpha = alpha_star.adjoint();
  gamma = 0.5 * (gamma + gamma.adjoint()).eval();
  alpha = 0.5 * (alpha - alpha.transpose()).eval();
  return G1pdm(std::move(gamma), std::move(alpha));
}

// ---------------------------------------------------------------------------
// Wick's theorem.
// ---------------------------------------------------------------------------

/// Selector for one creation or annihilation operator of a basis mode.
struct WickOp {
  bool create = true;
  int mode = 1;  // 1-based
};

namespace detail {

/// Signed ordered pairings of {0, ..., 2m-1}: pair the smallest free index
/// with every larger free index; the sign is the parity of the flattened
/// permutation.
inline void enumerate_pairings(std::vector<int>& free_idx, std::vector<int>& current,
                               std::vector<std::pair<std::vector<int>, int>>& out) {
  if (free_idx.empty()) {
    // parity of the permutation written as (pi(1), pi(2), ..., pi(2m))
    int inv = 0;
    for (std::size_t a = 0; a < current.size(); ++a)
      for (std::size_t b = a + 1; b < current.size(); ++b)
        if (current[a] > current[b]) ++inv;
    out.emplace_back(current, inv % 2 == 0 ? 1 : -1);
    return;
  }
  const int first = free_idx.front();
  for (std::size_t j = 1; j < free_idx.size(); ++j) {
    std::vector<int> rest;
    for (std::size_t t = 1; t < free_idx.size(); ++t)
      if (t != j) rest.push_back(free_idx[t]);
    current.push_back(first);
    current.push_back(free_idx[j]);
    enumerate_pairings(rest, current, out);
    current.pop_back();
    current.pop_back();
  }
}

}  // namespace detail

/// |direct expectation - Wick pairing sum| for an even monomial; for odd
/// monomials, the absolute value of the direct expectation (which must
/// vanish on quasi-free states).
inline double wick_residual(const QfState& state, const std::vector<WickOp>& ops) {
  const int n = state.n;
  if (ops.size() > 8) throw BadSpec("wick_residual: monomial degree above 8");
  std::vector<FockOp> mats;
  for (const auto& o : ops)
    mats.push_back(o.create ? creation(n, o.mode) : annihilation(n, o.mode));

  FockOp prod = FockOp::Identity(fock_dim(n), fock_dim(n));
  for (const auto& m : mats) prod = (prod * m).eval();
  const Complex direct = (state.rho * prod).trace();

  if (ops.size() % 2 != 0) return std::abs(direct);

  // two-point table
  const std::size_t len = ops.size();
  std::vector<std::vector<Complex>> two(len, std::vector<Complex>(len, Complex(0.0)));
  for (std::size_t a = 0; a < len; ++a)
    for (std::size_t b = a + 1; b < len; ++b)
      two[a][b] = (state.rho * mats[a] * mats[b]).trace();

  std::vector<int> free_idx(len);
  for (std::size_t i = 0; i < len; ++i) free_idx[i] = static_cast<int>(i);
  std::vector<std::pair<std::vector<int>, int>> pairings;
  std::vector<int> current;
  detail::enumerate_pairings(free_idx, current, pairings);

  Complex sum(0.0);
  for (const auto& [perm, sign] : pairings) {
    Complex term(static_cast<double>(sign));
    for (std::size_t j = 0; j < perm.size(); j += 2) term *= two[perm[j]][perm[j + 1]];
    sum += term;
  }
  return std::abs(direct - sum);
}

// ---------------------------------------------------------------------------
// Particle-number statistics.
// ---------------------------------------------------------------------------

struct NumberStats {
  double mean = 0.0;          ///< Tr(rho N)
  double variance = 0.0;      ///< Tr(rho N^2) - mean^2
  double two_tr_alpha = 0.0;  ///< 2 Tr(alpha^* alpha) of the extracted g1-pdm
};

inline NumberStats number_stats(const QfState& state) {
  const FockOp nop = number_operator(state.n);
  NumberStats s;
  s.mean = (state.rho * nop).trace().real();
  s.variance = (state.rho * nop * nop).trace().real() - s.mean * s.mean;
  const G1pdm g = g1pdm_of_state(state);
  s.two_tr_alpha = 2.0 * g.alpha.squaredNorm();
  return s;
}

}  // namespace hfbgeo
