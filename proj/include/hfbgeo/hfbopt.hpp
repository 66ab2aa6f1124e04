#pragma once

#include "hfbgeo/fockoracle.hpp"
#include "hfbgeo/sympkahler.hpp"

#include <vector>

namespace hfbgeo {

// ---------------------------------------------------------------------------
// Finite Hubbard-type lattice Hamiltonians on the brute-force Fock space.
// ---------------------------------------------------------------------------

enum class LatticeConvention { kSpinless, kSpinHalf };

struct LatticeHamiltonian {
  int sites = 0;
  double t = 0.0, u_int = 0.0, mu = 0.0;
  LatticeConvention convention = LatticeConvention::kSpinless;
  int n = 0;       ///< mode count (L or 2L)
  FockOp h;        ///< assembled operator on the 2^n Fock space
  CMat one_body;   ///< hopping - mu part, for quadratic-spectrum oracles
};

/// Open chain. Spin-1/2: mode = 2*site + spin, on-site n_up n_down repulsion.
/// Spinless: nearest-neighbour density-density interaction.
inline LatticeHamiltonian build_hubbard(int sites, double t, double u_int, double mu,
                                        LatticeConvention convention) {
  LatticeHamiltonian ham;
  ham.sites = sites;
  ham.t = t;
  ham.u_int = u_int;
  ham.mu = mu;
  ham.convention = convention;
  ham.n = (convention == LatticeConvention::kSpinHalf) ? 2 * sites : sites;
  check_mode_cap(ham.n);
  const int n = ham.n;
  const int dim = fock_dim(n);

  CMat hop = CMat::Zero(n, n);
  if (convention == LatticeConvention::kSpinHalf) {
    for (int s = 0; s + 1 < sites; ++s)
      for (int sp = 0; sp < 2; ++sp) {
        hop(2 * s + sp, 2 * (s + 1) + sp) = -t;
        hop(2 * (s + 1) + sp, 2 * s + sp) = -t;
      }
  } else {
    for (int s = 0; s + 1 < sites; ++s) {
      hop(s, s + 1) = -t;
      hop(s + 1, s) = -t;
    }
  }
  for (int k = 0; k < n; ++k) hop(k, k) -= mu;
  ham.one_body = hop;

  FockOp h = FockOp::Zero(dim, dim);
  std::vector<FockOp> cr(n);
  for (int k = 0; k < n; ++k) cr[k] = creation(n, k + 1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (hop(a, b) != Complex(0.0)) h += hop(a, b) * cr[a] * cr[b].adjoint();
  if (u_int != 0.0) {
    if (convention == LatticeConvention::kSpinHalf) {
      for (int s = 0; s < sites; ++s) {
        const FockOp nu = cr[2 * s] * cr[2 * s].adjoint();
        const FockOp nd = cr[2 * s + 1] * cr[2 * s + 1].adjoint();
        h += u_int * nu * nd;
      }
    } else {
      for (int s = 0; s + 1 < sites; ++s) {
        const FockOp na = cr[s] * cr[s].adjoint();
        const FockOp nb = cr[s + 1] * cr[s + 1].adjoint();
        h += u_int * na * nb;
      }
    }
  }
  h = 0.5 * (h + h.adjoint()).eval();
  ham.h = std::move(h);
  return ham;
}

/// HFB functional E(Gamma) = omega_Gamma(H) through the Fock oracle.
inline double hfb_energy(const LatticeHamiltonian& ham, const G1pdm& g) {
  if (g.n() != ham.n) throw DimensionMismatch("hfb_energy: mismatched mode counts");
  return (quasifree_state(g).rho * ham.h).trace().real();
}

/// Exact ground energy in the grand canonical ensemble.
inline double ground_energy(const LatticeHamiltonian& ham) {
  Eigen::SelfAdjointEigenSolver<CMat> es(ham.h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Quadratic Fock generator of a one-parameter Bogoliubov group: T(X) with
/// exp(s T(X)) implementing exp(s X) up to phase.
inline FockOp quad_generator(const BogAlgebra& x) {
  const int n = x.n();
  check_mode_cap(n);
  const int dim = fock_dim(n);
  std::vector<FockOp> cr(n);
  for (int k = 0; k < n; ++k) cr[k] = creation(n, k + 1);
  FockOp t = FockOp::Zero(dim, dim);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      if (x.x1(j, k) != Complex(0.0)) t += x.x1(j, k) * cr[j] * cr[k].adjoint();
      const Complex x2bar = std::conj(x.x2(j, k));
      if (x2bar != Complex(0.0)) t += 0.5 * x2bar * cr[j].adjoint() * cr[k].adjoint();
      if (x.x2(j, k) != Complex(0.0)) t += 0.5 * x.x2(j, k) * cr[j] * cr[k];
    }
  return t;
}

// ---------------------------------------------------------------------------
// Riemannian minimization of E over orbits, with an outer orbit search.
// ---------------------------------------------------------------------------

struct MinimizeParams {
  double step = 0.5;          ///< initial line-search step
  int max_iter = 400;         ///< inner iterations for the final polish
  double grad_tol = 1e-7;     ///< stop when the FD gradient norm drops below
  std::uint64_t seed = 1;
  double fd_h = 1e-4;         ///< central-difference half step
  std::vector<double> lambda_grid = {0.0, 0.125, 0.25, 0.375, 0.5};
  bool refine = true;         ///< golden-section refinement of grid minima
  int search_max_iter = 80;   ///< inner iterations during the orbit search
  int outer_passes = 1;
};

struct HfbResult {
  G1pdm gamma_star;
  double energy = 0.0;
  double pairing_norm = 0.0;         ///< ||alpha||_2
  double projection_residual = 0.0;  ///< ||Gamma^2 - Gamma||
  int iterations = 0;
  bool converged = false;
  RVec lambda;                       ///< orbit parameters of the minimizer
};

namespace detail {

struct OrbitProblem {
  const LatticeHamiltonian* ham;
  RVec lambda;                     // base-point eigenvalues (sorted desc)
  std::vector<BogAlgebra> basis;   // orthonormal basis of m_Gamma
  RVec rho_diag;                   // diagonal quasi-free weights

  explicit OrbitProblem(const LatticeHamiltonian& h, const RVec& lam) : ham(&h) {
    BasePoint bp = BasePoint::from_lambda(lam);
    lambda = bp.lambda;
    basis = complement_basis(bp);
    const int n = h.n;
    const int dim = fock_dim(n);
    rho_diag.resize(dim);
    for (int s = 0; s < dim; ++s) {
      double p = 1.0;
      for (int k = 0; k < n; ++k)
        p *= (s & (1 << k)) ? lambda(k) : 1.0 - lambda(k);
      rho_diag(s) = p;
    }
  }

  /// E(V) = Tr(rho_diag U H U^*) for Gamma = V Gamma_base V^*, U = impl(V^*).
  double energy(const BogUnitary& v) const {
    const FockOp uw = implementer(v.adjoint());
    const CMat m = uw * ham->h * uw.adjoint();
    double e = 0.0;
    for (int s = 0; s < rho_diag.size(); ++s) e += rho_diag(s) * m(s, s).real();
    return e;
  }
};

struct InnerResult {
  BogUnitary v;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Riemannian gradient descent on one orbit. Directions live in the fixed
/// complement basis at the base point; the group element is updated on the
/// right, V <- V exp(-eta D), which retracts Gamma along exp in u_Bog.
inline InnerResult minimize_on_orbit(const OrbitProblem& prob, BogUnitary v,
                                     const MinimizeParams& params, int max_iter) {
  InnerResult res;
  const std::size_t m = prob.basis.size();
  double energy = prob.energy(v);
  double step = params.step;
  int it = 0;
  for (; it < max_iter; ++it) {
    RVec grad(static_cast<int>(m));
    for (std::size_t a = 0; a < m; ++a) {
      const BogUnitary vp = compose(v, exp_alg(params.fd_h * prob.basis[a]));
      const BogUnitary vm = compose(v, exp_alg(-params.fd_h * prob.basis[a]));
      grad(static_cast<int>(a)) = (prob.energy(vp) - prob.energy(vm)) / (2.0 * params.fd_h);
    }
    const double gnorm = grad.norm();
    if (gnorm <= params.grad_tol) {
      res.converged = true;
      break;
    }
    BogAlgebra dir = BogAlgebra::zero(v.n());
    for (std::size_t a = 0; a < m; ++a) dir = dir + grad(static_cast<int>(a)) * prob.basis[a];

    bool accepted = false;
    double eta = step;
    for (int ls = 0; ls < 40; ++ls) {
      const BogUnitary cand = compose(v, exp_alg(-eta * dir));
      const double e_new = prob.energy(cand);
      if (e_new <= energy - 1e-4 * eta * gnorm * gnorm) {
        v = cand;
        energy = e_new;
        step = std::min(eta * 1.5, 2.0);
        accepted = true;
        break;
      }
      eta *= 0.5;
    }
    if (!accepted) break;  // stationary to line-search resolution
  }
  res.v = std::move(v);
  res.energy = energy;
  res.iterations = it;
  return res;
}

}  // namespace detail

/// Minimize the HFB functional. Inner loop: Riemannian descent on the orbit
/// through the current base point. Outer loop: coordinate descent over the
/// orbit parameters lambda in [0, 1/2] (grid, then golden-section refinement),
/// since E_HFB is an infimum over all admissible g1-pdms, not one orbit.
inline HfbResult minimize_hfb(const LatticeHamiltonian& ham, const G1pdm& init,
                              const MinimizeParams& params = {}) {
  if (init.n() != ham.n) throw DimensionMismatch("minimize_hfb: mismatched mode counts");
  const DiagonalizeResult d0 = diagonalize(init);

  RVec lam = d0.lambda;
  BogUnitary v = d0.w.adjoint();
  int total_iters = 0;

  auto run = [&](const RVec& l, const BogUnitary& v0, int iters) {
    detail::OrbitProblem prob(ham, l);
    detail::InnerResult r = detail::minimize_on_orbit(prob, v0, params, iters);
    total_iters += r.iterations;
    return r;
  };

  detail::InnerResult best = run(lam, v, params.search_max_iter);
  const bool search = params.lambda_grid.size() > 1;
  if (search) {
    for (int pass = 0; pass < params.outer_passes; ++pass) {
      for (int coord = 0; coord < lam.size(); ++coord) {
        double best_val = lam(coord);
        // grid stage
        for (double g : params.lambda_grid) {
          if (std::abs(g - best_val) < 1e-12) continue;
          RVec cand = lam;
          cand(coord) = g;
          const detail::InnerResult r = run(cand, best.v, params.search_max_iter);
          if (r.energy < best.energy - 1e-12) {
            best = r;
            best_val = g;
          }
        }
        lam(coord) = best_val;
        // golden-section refinement around the grid winner
        if (params.refine) {
          double lo = std::max(0.0, best_val - 0.125), hi = std::min(0.5, best_val + 0.125);
          const double gr = 0.6180339887498949;
          double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
          auto feval = [&](double lv) {
            RVec cand = lam;
            cand(coord) = lv;
            return run(cand, best.v, params.search_max_iter);
          };
          detail::InnerResult r1 = feval(x1), r2 = feval(x2);
          for (int gi = 0; gi < 6; ++gi) {
            if (r1.energy < r2.energy) {
              hi = x2;
              x2 = x1;
              r2 = r1;
              x1 = hi - gr * (hi - lo);
              r1 = feval(x1);
            } else {
              lo = x1;
              x1 = x2;
              r1 = r2;
              x2 = lo + gr * (hi - lo);
              r2 = feval(x2);
            }
          }
          const detail::InnerResult& rb = (r1.energy < r2.energy) ? r1 : r2;
          const double xb = (r1.energy < r2.energy) ? x1 : x2;
          if (rb.energy < best.energy - 1e-12) {
            best = rb;
            lam(coord) = xb;
          }
        }
      }
    }
  }

  // final polish on the winning orbit
  {
    detail::OrbitProblem prob(ham, lam);
    detail::InnerResult r = detail::minimize_on_orbit(prob, best.v, params, params.max_iter);
    total_iters += r.iterations;
    best = std::move(r);
  }

  detail::OrbitProblem prob(ham, lam);
  HfbResult out;
  out.lambda = prob.lambda;
  out.gamma_star = act(best.v, G1pdm::diagonal(prob.lambda));
  out.energy = best.energy;
  out.pairing_norm = hs_norm(out.gamma_star.alpha);
  const CMat gm = out.gamma_star.assemble();
  out.projection_residual = op_norm(gm * gm - gm);
  out.iterations = total_iters;
  out.converged = best.converged;
  return out;
}

}  // namespace hfbgeo
