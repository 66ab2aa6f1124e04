#include "helpers.hpp"

#include "hfbgeo/fockoracle.hpp"

using namespace hfbgeo;

TEST_CASE("creation and annihilation matrices") {
  // n = 1 in the (vacuum, occupied) basis
  const FockOp c1 = creation(1, 1);
  REQUIRE(c1(1, 0) == Complex(1.0));
  REQUIRE(std::abs(c1(0, 0)) + std::abs(c1(0, 1)) + std::abs(c1(1, 1)) == 0.0);

  for (int n = 1; n <= 4; ++n) {
    const int dim = fock_dim(n);
    for (int j = 1; j <= n; ++j) {
      for (int k = 1; k <= n; ++k) {
        const FockOp cj = creation(n, j), ck = creation(n, k);
        FockOp expect = FockOp::Zero(dim, dim);
        if (j == k) expect = FockOp::Identity(dim, dim);
        REQUIRE(op_norm(annihilation(n, j) * ck + ck * annihilation(n, j) - expect) < 1e-13);
        REQUIRE(op_norm(cj * ck + ck * cj) < 1e-13);
      }
      // annihilation kills the vacuum
      REQUIRE(annihilation(n, j).col(0).norm() == 0.0);
    }
  }
  REQUIRE_THROWS_AS(creation(3, 4), IndexOutOfRange);
  REQUIRE_THROWS_AS(creation(7, 1), CapExceeded);
}

TEST_CASE("number operator") {
  const int n = 3;
  const FockOp nop = number_operator(n);
  REQUIRE(nop(0, 0) == Complex(0.0));
  REQUIRE(nop(fock_dim(n) - 1, fock_dim(n) - 1) == Complex(static_cast<double>(n)));

  FockOp sum = FockOp::Zero(fock_dim(n), fock_dim(n));
  for (int k = 1; k <= n; ++k) sum += creation(n, k) * annihilation(n, k);
  REQUIRE(op_norm(nop - sum) == 0.0);
}

TEST_CASE("implementer") {
  const int n = 3;
  const int dim = fock_dim(n);

  // identity transforms to the identity after the phase gauge
  REQUIRE(op_norm(implementer(BogUnitary::identity(n)) - FockOp::Identity(dim, dim)) <
          1e-12);

  // v = 0: the one-particle sector transforms by u
  Rng rng(7);
  CMat a = rng.cgaussian_matrix(n, n);
  const CMat u_only = polar_unitary((a + 3.0 * CMat::Identity(n, n)).eval());
  const BogUnitary diag_w(u_only, CMat::Zero(n, n));
  const FockOp impl = implementer(diag_w);
  for (int k = 0; k < n; ++k) {
    const CVec lhs = impl * creation(n, k + 1).col(0);
    const CVec rhs = creation_of(n, u_only.col(k)).col(0);
    REQUIRE((lhs - rhs).norm() < 1e-10);
  }

  for (int tr = 0; tr < 20; ++tr) {
    const BogUnitary w = random_unitary(7700 + tr, n, tr % 2);
    const FockOp uw = implementer(w);
    REQUIRE(op_norm(uw * uw.adjoint() - FockOp::Identity(dim, dim)) < 1e-10);
    REQUIRE(implementer_residual(w, uw) < 1e-9);

    // projective property
    const BogUnitary w2 = random_unitary(7800 + tr, n, (tr / 2) % 2);
    const FockOp lhs = implementer(compose(w, w2));
    const FockOp rhs = implementer(w) * implementer(w2);
    const double overlap = std::abs((lhs.adjoint() * rhs).trace()) / dim;
    REQUIRE(overlap == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("quasi-free states") {
  const int n = 3;
  const int dim = fock_dim(n);

  // vacuum state
  const QfState vac = quasifree_state(G1pdm::p_minus(n));
  FockOp proj0 = FockOp::Zero(dim, dim);
  proj0(0, 0) = 1.0;
  REQUIRE(op_norm(vac.rho - proj0) < 1e-12);

  // single-mode thermal form
  RVec lam1(1);
  lam1 << 0.3;
  const QfState th = quasifree_state(G1pdm::diagonal(lam1));
  REQUIRE(th.rho(0, 0).real() == Catch::Approx(0.7));
  REQUIRE(th.rho(1, 1).real() == Catch::Approx(0.3));

  // pure g1-pdm gives a rank-one density matrix, and conversely
  for (int tr = 0; tr < 10; ++tr) {
    const G1pdm pure = act(random_unitary(8000 + tr, n, tr % 2), G1pdm::p_minus(n));
    const QfState rho = quasifree_state(pure);
    const auto ev = Eigen::SelfAdjointEigenSolver<CMat>(rho.rho).eigenvalues();
    REQUIRE(ev(dim - 1) == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(ev(dim - 2) < 1e-9);

    const G1pdm mixed = random_g1pdm(8100 + tr, n, {0.25});
    const auto ev2 =
        Eigen::SelfAdjointEigenSolver<CMat>(quasifree_state(mixed).rho).eigenvalues();
    REQUIRE(ev2(dim - 2) > 1e-3);  // not rank one
    REQUIRE_FALSE(is_pure(mixed));
  }
}

TEST_CASE("g1-pdm extraction and round trip") {
  const int n = 3;
  // vacuum extracts to P_-
  const QfState vac = quasifree_state(G1pdm::p_minus(n));
  REQUIRE(op_norm(g1pdm_of_state(vac).assemble() - G1pdm::p_minus(n).assemble()) < 1e-12);

  // Slater state c*_1 c*_2 |0>
  FockOp slater = FockOp::Zero(fock_dim(n), fock_dim(n));
  slater(3, 3) = 1.0;  // bits {0,1} occupied
  const G1pdm gs = g1pdm_of_state(QfState{slater, n});
  CMat expect = CMat::Zero(n, n);
  expect(0, 0) = 1.0;
  expect(1, 1) = 1.0;
  REQUIRE(op_norm(gs.gamma - expect) < 1e-13);
  REQUIRE(op_norm(gs.alpha) < 1e-13);

  for (int tr = 0; tr < 20; ++tr) {
    const G1pdm g = random_g1pdm(8200 + tr, n, {0.5, 0.2});
    const G1pdm back = g1pdm_of_state(quasifree_state(g));
    REQUIRE(op_norm(back.assemble() - g.assemble()) < 1e-9);
  }

  // equivariance under the transported action
  for (int tr = 0; tr < 20; ++tr) {
    const G1pdm g = random_g1pdm(8300 + tr, n, {0.35, 0.1});
    const QfState rho = quasifree_state(g);
    const BogUnitary w = random_unitary(8400 + tr, n, tr % 2);
    const FockOp uw = implementer(w);
    const QfState moved{(uw.adjoint() * rho.rho * uw).eval(), n};
    const CMat expect_g = w.assemble().adjoint() * g.assemble() * w.assemble();
    REQUIRE(op_norm(g1pdm_of_state(moved).assemble() - expect_g) < 1e-9);
  }
}

TEST_CASE("Wick's theorem") {
  const int n = 3;

  // vacuum two-point contraction: omega(c(f) c*(g)) = <f, g>
  const QfState vac = quasifree_state(G1pdm::p_minus(n));
  REQUIRE(wick_residual(vac, {WickOp{false, 1}, WickOp{true, 1}}) < 1e-14);
  const Complex direct =
      (vac.rho * annihilation(n, 1) * creation(n, 1)).trace();
  REQUIRE(std::abs(direct - Complex(1.0)) < 1e-14);

  for (int tr = 0; tr < 20; ++tr) {
    const QfState rho = quasifree_state(random_g1pdm(8500 + tr, n, {0.4, 0.2}));
    Rng rng(8600 + tr);
    auto pick = [&] {
      return WickOp{rng.uniform() < 0.5, 1 + static_cast<int>(rng.next_u64() % n)};
    };
    // degree 4: the three-term identity
    std::vector<WickOp> ops4 = {pick(), pick(), pick(), pick()};
    REQUIRE(wick_residual(rho, ops4) < 1e-10);
    std::vector<FockOp> m;
    for (auto& o : ops4) m.push_back(o.create ? creation(n, o.mode) : annihilation(n, o.mode));
    auto two = [&](int a, int b) { return (rho.rho * m[a] * m[b]).trace(); };
    const Complex rhs = two(0, 3) * two(1, 2) - two(0, 2) * two(1, 3) + two(0, 1) * two(2, 3);
    const Complex lhs = (rho.rho * m[0] * m[1] * m[2] * m[3]).trace();
    REQUIRE(std::abs(lhs - rhs) < 1e-10);

    // degree 6: fifteen pairings
    std::vector<WickOp> ops6 = {pick(), pick(), pick(), pick(), pick(), pick()};
    REQUIRE(wick_residual(rho, ops6) < 1e-9);

    // odd monomials vanish
    std::vector<WickOp> ops3 = {pick(), pick(), pick()};
    REQUIRE(wick_residual(rho, ops3) < 1e-10);
  }

  REQUIRE_THROWS_AS(wick_residual(vac, std::vector<WickOp>(10, WickOp{true, 1})), BadSpec);
}

TEST_CASE("pairing enumeration count") {
  std::vector<int> idx = {0, 1, 2, 3, 4, 5};
  std::vector<std::pair<std::vector<int>, int>> out;
  std::vector<int> cur;
  hfbgeo::detail::enumerate_pairings(idx, cur, out);
  REQUIRE(out.size() == 15);
}

TEST_CASE("number statistics") {
  const int n = 4;
  const NumberStats vac = number_stats(quasifree_state(G1pdm::p_minus(n)));
  REQUIRE(vac.mean == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(vac.variance == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(vac.two_tr_alpha == Catch::Approx(0.0).margin(1e-12));

  // Slater state with N orbitals: variance 0
  CMat gamma = CMat::Zero(n, n);
  gamma(0, 0) = 1.0;
  gamma(2, 2) = 1.0;
  const NumberStats slater = number_stats(quasifree_state(G1pdm(gamma, CMat::Zero(n, n))));
  REQUIRE(slater.mean == Catch::Approx(2.0).margin(1e-10));
  REQUIRE(slater.variance == Catch::Approx(0.0).margin(1e-9));

  for (int tr = 0; tr < 20; ++tr) {
    const G1pdm g = act(random_unitary(8700 + tr, n, tr % 2), G1pdm::p_minus(n));
    const NumberStats st = number_stats(quasifree_state(g));
    REQUIRE(st.mean == Catch::Approx(g.gamma.trace().real()).margin(1e-10));
    REQUIRE(st.variance == Catch::Approx(st.two_tr_alpha).margin(1e-9));
  }
}
