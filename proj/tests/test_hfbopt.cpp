#include "helpers.hpp"

#include "hfbgeo/hfbopt.hpp"

using namespace hfbgeo;

TEST_CASE("lattice Hamiltonian assembly") {
  // t = u = 0, mu = -1: H = N, ground energy 0 at the vacuum
  const LatticeHamiltonian nhat = build_hubbard(3, 0.0, 0.0, -1.0,
                                                LatticeConvention::kSpinless);
  REQUIRE(op_norm(nhat.h - number_operator(3)) < 1e-14);
  REQUIRE(ground_energy(nhat) == Catch::Approx(0.0).margin(1e-12));

  // mu = +1: H = -N, ground energy -n
  const LatticeHamiltonian mnhat = build_hubbard(3, 0.0, 0.0, 1.0,
                                                 LatticeConvention::kSpinless);
  REQUIRE(ground_energy(mnhat) == Catch::Approx(-3.0).margin(1e-12));

  // L = 2 spinless hopping chain: one-body eigenvalues +-1, E_gs = -1
  const LatticeHamiltonian chain = build_hubbard(2, 1.0, 0.0, 0.0,
                                                 LatticeConvention::kSpinless);
  const auto ev1 = Eigen::SelfAdjointEigenSolver<CMat>(chain.one_body).eigenvalues();
  REQUIRE(ev1(0) == Catch::Approx(-1.0));
  REQUIRE(ev1(1) == Catch::Approx(1.0));
  REQUIRE(ground_energy(chain) == Catch::Approx(-1.0).margin(1e-12));

  // quadratic case: ground energy is the sum of negative one-body eigenvalues
  for (int tr = 0; tr < 4; ++tr) {
    const double mu = -1.0 + 0.6 * tr;
    const LatticeHamiltonian q = build_hubbard(3, 1.3, 0.0, mu,
                                               LatticeConvention::kSpinless);
    const auto ev = Eigen::SelfAdjointEigenSolver<CMat>(q.one_body).eigenvalues();
    double expect = 0.0;
    for (int i = 0; i < ev.size(); ++i) expect += std::min(0.0, ev(i));
    REQUIRE(ground_energy(q) == Catch::Approx(expect).margin(1e-11));
  }

  // self-adjointness and the spin convention mode count
  const LatticeHamiltonian hub = build_hubbard(2, 1.0, 4.0, 0.5,
                                               LatticeConvention::kSpinHalf);
  REQUIRE(hub.n == 4);
  REQUIRE(op_norm(hub.h - hub.h.adjoint()) < 1e-13);

  REQUIRE_THROWS_AS(build_hubbard(4, 1.0, 1.0, 0.0, LatticeConvention::kSpinHalf),
                    CapExceeded);
}

TEST_CASE("HFB energy through the oracle") {
  const LatticeHamiltonian nhat = build_hubbard(3, 0.0, 0.0, -1.0,
                                                LatticeConvention::kSpinless);
  REQUIRE(hfb_energy(nhat, G1pdm::p_minus(3)) == Catch::Approx(0.0).margin(1e-12));

  // Slater state on a quadratic Hamiltonian: one-body sum
  const LatticeHamiltonian chain = build_hubbard(3, 1.0, 0.0, 0.2,
                                                 LatticeConvention::kSpinless);
  Eigen::SelfAdjointEigenSolver<CMat> es(chain.one_body);
  const CMat modes = es.eigenvectors();
  CMat gamma = modes.col(0) * modes.col(0).adjoint();  // fill the lowest orbital
  const double e = hfb_energy(chain, G1pdm(gamma, CMat::Zero(3, 3)));
  REQUIRE(e == Catch::Approx(es.eigenvalues()(0)).margin(1e-9));

  // energies are real for self-adjoint H
  const G1pdm g = random_g1pdm(42, 3, {0.3, 0.1});
  const Complex raw = (quasifree_state(g).rho * chain.h).trace();
  REQUIRE(std::abs(raw.imag()) < 1e-10);
}

TEST_CASE("quadratic generator gives analytic directional derivatives") {
  const int n = 3;
  const LatticeHamiltonian ham = build_hubbard(n, 1.0, 0.0, 0.3,
                                               LatticeConvention::kSpinless);
  const G1pdm g = random_g1pdm(5, n, {0.2});
  const QfState rho = quasifree_state(g);
  for (int tr = 0; tr < 10; ++tr) {
    const BogAlgebra x = random_algebra(900 + tr, n, 1.0);
    const FockOp t = quad_generator(x);
    REQUIRE(op_norm(t + t.adjoint()) < 1e-12);  // skew-hermitian
    const double analytic = (rho.rho * (ham.h * t - t * ham.h)).trace().real();
    const double h = 1e-5;
    auto shifted = [&](double s) {
      const FockOp e = mat_exp((s * t).eval());
      return ((e * rho.rho * e.adjoint()) * ham.h).trace().real();
    };
    const double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
    REQUIRE(analytic == Catch::Approx(fd).epsilon(1e-6).margin(1e-8));
  }
}

TEST_CASE("minimization: immediate convergence on the number operator") {
  const LatticeHamiltonian nhat = build_hubbard(2, 0.0, 0.0, -1.0,
                                                LatticeConvention::kSpinless);
  MinimizeParams params;
  params.lambda_grid = {0.0};  // single orbit
  params.max_iter = 50;
  const HfbResult res = minimize_hfb(nhat, G1pdm::p_minus(2), params);
  REQUIRE(res.converged);
  REQUIRE(res.energy == Catch::Approx(0.0).margin(1e-9));
  REQUIRE(res.energy >= ground_energy(nhat) - 1e-8);
}

TEST_CASE("minimization reaches the ground energy of a quadratic Hamiltonian") {
  const LatticeHamiltonian chain = build_hubbard(2, 1.0, 0.0, 0.0,
                                                 LatticeConvention::kSpinless);
  MinimizeParams params;
  params.lambda_grid = {0.0};
  params.max_iter = 400;
  params.grad_tol = 1e-8;
  const HfbResult res = minimize_hfb(chain, G1pdm::p_minus(2), params);
  const double egs = ground_energy(chain);
  REQUIRE(res.energy == Catch::Approx(egs).margin(1e-6));
  REQUIRE(res.energy >= egs - 1e-8);
  REQUIRE(res.projection_residual < 1e-6);

  // restarting from the minimizer is stationary
  const HfbResult again = minimize_hfb(chain, res.gamma_star, params);
  REQUIRE(std::abs(again.energy - res.energy) < 1e-7);
}

TEST_CASE("interacting chain: variational bound and reporting") {
  const LatticeHamiltonian hub = build_hubbard(2, 1.0, 2.0, 0.0,
                                               LatticeConvention::kSpinless);
  MinimizeParams params;
  params.lambda_grid = {0.0, 0.25, 0.5};
  params.refine = false;
  params.max_iter = 150;
  params.search_max_iter = 40;
  const HfbResult res = minimize_hfb(hub, G1pdm::p_minus(2), params);
  const double egs = ground_energy(hub);
  REQUIRE(res.energy >= egs - 1e-8);
  REQUIRE(std::isfinite(res.pairing_norm));
  REQUIRE(std::isfinite(res.projection_residual));
}
