#include "helpers.hpp"

using namespace hfbgeo;
using hfbgeo::testing::random_isotropy_element;

namespace {

BogAlgebra pull_back(const BogUnitary& v, const BogAlgebra& x) {
  const int n = x.n();
  const CMat m = v.assemble().adjoint() * x.assemble() * v.assemble();
  return BogAlgebra(0.5 * (m.topLeftCorner(n, n) - m.topLeftCorner(n, n).adjoint().eval()),
                    0.5 * (m.topRightCorner(n, n) - m.topRightCorner(n, n).transpose().eval()));
}

CVec coordinates(const GComplexElem& e) {
  const int n = e.n();
  CVec v(3 * n * n);
  int idx = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) v(idx++) = e.x(a, b);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) v(idx++) = e.z(a, b);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) v(idx++) = e.y(a, b);
  return v;
}

int span_rank(const std::vector<GComplexElem>& gens) {
  if (gens.empty()) return 0;
  CMat m(coordinates(gens[0]).size(), static_cast<int>(gens.size()));
  for (std::size_t c = 0; c < gens.size(); ++c) m.col(static_cast<int>(c)) = coordinates(gens[c]);
  const auto sv = m.jacobiSvd().singularValues();
  int r = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * sv(0)) ++r;
  return r;
}

}  // namespace

TEST_CASE("s_plus closed form vs trace definition") {
  const int n = 3;
  CMat pplus = CMat::Zero(2 * n, 2 * n);
  pplus.topLeftCorner(n, n) = CMat::Identity(n, n);

  BogAlgebra no_pair = random_algebra(50, n, 1.0);
  no_pair.x2.setZero();
  for (int tr = 0; tr < 10; ++tr)
    REQUIRE(cocycle_splus(no_pair, random_algebra(51 + tr, n, 1.0)) == 0.0);

  for (int tr = 0; tr < 30; ++tr) {
    const BogAlgebra x = random_algebra(60 + tr, n, 1.0);
    const BogAlgebra y = random_algebra(90 + tr, n, 1.0);
    REQUIRE(cocycle_splus(x, x) == 0.0);
    REQUIRE(cocycle_splus(x, y) == Catch::Approx(-cocycle_splus(y, x)).margin(1e-14));
    const CMat ym = y.assemble();
    const double trace_route =
        (x.assemble() * (Complex(0, 1) * (pplus * ym - ym * pplus))).trace().real();
    REQUIRE(std::abs(cocycle_splus(x, y) - trace_route) < 1e-12);
  }
}

TEST_CASE("s_Gamma: radical, sign at the vacuum, coboundary split, invariance") {
  const int n = 3;
  const BasePoint bp = BasePoint::from_request({0.4, 0.2}, n);
  const G1pdm g = bp.gamma();

  // isotropy arguments annihilate the cocycle
  for (int tr = 0; tr < 10; ++tr) {
    const BogAlgebra xiso = log_near_id(random_isotropy_element(bp, 100 + tr));
    for (int s = 0; s < 5; ++s)
      REQUIRE(std::abs(cocycle_gamma(g, xiso, random_algebra(200 + 7 * tr + s, n, 1.0))) <
              1e-11);
  }

  const G1pdm pm = G1pdm::p_minus(n);
  for (int tr = 0; tr < 30; ++tr) {
    const BogAlgebra x = random_algebra(300 + tr, n, 1.0);
    const BogAlgebra y = random_algebra(400 + tr, n, 1.0);

    // s_{P_-} = -s_+
    REQUIRE(std::abs(cocycle_gamma(pm, x, y) + cocycle_splus(x, y)) < 1e-12);

    // coboundary split s_Gamma = -s_+ + f_{Gamma_0}([.,.])
    const double split =
        cocycle_gamma(g, x, y) + cocycle_splus(x, y) - coboundary_f(g, bracket(x, y));
    REQUIRE(std::abs(split) < 1e-10);

    // cocycle identity
    const BogAlgebra z = random_algebra(500 + tr, n, 1.0);
    const double jac = cocycle_gamma(g, x, bracket(y, z)) +
                       cocycle_gamma(g, z, bracket(x, y)) +
                       cocycle_gamma(g, y, bracket(z, x));
    REQUIRE(std::abs(jac) < 1e-10);

    // invariance: s_Gamma(Ad_V X, Ad_V Y) = s_{V^* Gamma V}(X, Y)
    const BogUnitary v = random_unitary(600 + tr, n, tr % 2);
    const double lhs = cocycle_gamma(g, pull_back(v.adjoint(), x), pull_back(v.adjoint(), y));
    const double rhs = cocycle_gamma(act(v.adjoint(), g), x, y);
    REQUIRE(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("radical equals the isotropy algebra") {
  // no-half: dim = sum m_i^2 over clusters incl. kernel
  const BasePoint a = BasePoint::from_request({0.4}, 3);  // mults 1 + kernel 2
  const RadicalReport ra = radical_check(a);
  REQUIRE(ra.iso_dim == 1 + 4);
  REQUIRE(ra.null_dim == ra.iso_dim);
  REQUIRE(ra.max_angle < 1e-8);

  // half branch adds the antisymmetric p1-corner
  const BasePoint b = BasePoint::from_request({0.5, 0.5}, 3);  // m1 = 2, kernel 1
  const RadicalReport rb = radical_check(b);
  REQUIRE(rb.iso_dim == (4 + 1) + 2 * 1);  // x1 blocks + corner pairs (2 real dims)
  REQUIRE(rb.null_dim == rb.iso_dim);
  REQUIRE(rb.max_angle < 1e-8);

  // vacuum point: the radical is the full block-diagonal algebra, dim n^2
  const RadicalReport rc = radical_check(BasePoint::from_request({}, 3));
  REQUIRE(rc.iso_dim == 9);
  REQUIRE(rc.null_dim == 9);

  // dimensions are conjugation invariant: Gram of the conjugated point
  const BasePoint bp = BasePoint::from_request({0.4}, 3);
  const G1pdm g1 = act(random_unitary(700, 3, 1), bp.gamma());
  const std::vector<BogAlgebra> basis = u_bog_basis(3);
  const int d = static_cast<int>(basis.size());
  RMat gram(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gram(i, j) = cocycle_gamma(g1, basis[i], basis[j]);
  const auto sv = gram.jacobiSvd().singularValues();
  int null_dim = 0;
  for (int i = 0; i < d; ++i)
    if (sv(i) <= 1e-10 * sv(0)) ++null_dim;
  REQUIRE(null_dim == ra.null_dim);
}

TEST_CASE("invariant symplectic form on the orbit") {
  const int n = 3;
  const BasePoint bp = BasePoint::from_request({0.45, 0.15}, n);
  const BogUnitary u = random_unitary(800, n);
  const G1pdm g1 = act(u, bp.gamma());

  for (int tr = 0; tr < 20; ++tr) {
    const BogAlgebra x = random_algebra(900 + tr, n, 1.0);
    const BogAlgebra y = random_algebra(1000 + tr, n, 1.0);
    const double base = symplectic_form(bp, u, x, y);

    // antisymmetry
    REQUIRE(symplectic_form(bp, u, y, x) == Catch::Approx(-base).margin(1e-12));

    // representative shift: adding an isotropy element of Gamma_1 changes nothing
    const BogAlgebra xiso = log_near_id(random_isotropy_element(bp, 1100 + tr, 0.2));
    const BogAlgebra iso_shift = pull_back(u.adjoint(), xiso);  // Ad_u of a stabilizer
    const CMat gm = g1.assemble(), sm = iso_shift.assemble();
    REQUIRE(op_norm(sm * gm - gm * sm) < 1e-10);
    const double shifted = symplectic_form(bp, u, x + iso_shift, y);
    REQUIRE(shifted == Catch::Approx(base).margin(1e-9));

    // pullback consistency with the base-point cocycle
    REQUIRE(base == Catch::Approx(cocycle_gamma(bp.gamma(), pull_back(u, x), pull_back(u, y)))
                        .margin(1e-11));
  }

  // nondegeneracy of omega on the reductive complement
  const std::vector<BogAlgebra> mb = complement_basis(bp);
  const int dm = static_cast<int>(mb.size());
  RMat gram(dm, dm);
  for (int i = 0; i < dm; ++i)
    for (int j = 0; j < dm; ++j) gram(i, j) = cocycle_gamma(bp.gamma(), mb[i], mb[j]);
  const auto sv = gram.jacobiSvd().singularValues();
  REQUIRE(sv(sv.size() - 1) > 1e-6);
}

TEST_CASE("polarization span structure") {
  for (const auto& req : {std::vector<double>{0.4}, std::vector<double>{0.5, 0.5}}) {
    const int n = 3;
    const BasePoint bp = BasePoint::from_request(req, n);
    const Polarization p = polarization_build(bp);

    // dimension bookkeeping on explicit spans
    std::vector<GComplexElem> pspan = p.basis_mod_k;
    pspan.insert(pspan.end(), p.basis_kc.begin(), p.basis_kc.end());
    REQUIRE(span_rank(pspan) == p.dim_p);

    std::vector<GComplexElem> pbar;
    for (const auto& e : pspan) pbar.push_back(g_involution(e));
    std::vector<GComplexElem> both = pspan;
    both.insert(both.end(), pbar.begin(), pbar.end());
    const int dim_g = n * n + n * (n - 1);
    const int dim_kc = span_rank(p.basis_kc);
    REQUIRE(span_rank(both) == dim_g);                  // P + P-bar = g
    REQUIRE(2 * p.dim_p - dim_kc == dim_g);             // P cap P-bar = k_C
    REQUIRE(polarization_isotropy_residual(bp, p) < 1e-10);

    // mixed pairs s(a, b-bar) are generically nonzero
    double mixed = 0.0;
    const CMat gm = bp.gamma().assemble();
    for (const auto& e : p.basis_mod_k)
      mixed = std::max(mixed, std::abs(cocycle_gamma_c(
                                  gm, e.assemble(), g_involution(e).assemble())));
    REQUIRE(mixed > 1e-3);
  }
}

TEST_CASE("positivity certificates") {
  const int n = 3;
  const BasePoint bp = BasePoint::from_request({0.4, 0.25}, n);

  // single strictly-upper block: exactly 2 (l_i - l_j) ||x||_2^2
  GComplexElem single = GComplexElem::zero(n);
  single.x(0, 1) = Complex(0.7, -0.2);
  const PositivityValue pv = kaehler_positivity(bp, single);
  const double expect = 2.0 * (0.4 - 0.25) * std::norm(single.x(0, 1));
  REQUIRE(pv.value == Catch::Approx(expect).margin(1e-10));
  REQUIRE(pv.a_term == Catch::Approx(expect).margin(1e-12));
  REQUIRE(pv.b_term == Catch::Approx(0.0).margin(1e-14));

  // y-only element: value >= (1 - 2 lambda_1) ||y||_2^2 in the no-half branch
  GComplexElem yel = GComplexElem::zero(n);
  yel.y(0, 2) = 1.1;
  yel.y(2, 0) = -1.1;
  yel.y(1, 2) = Complex(0, 0.4);
  yel.y(2, 1) = Complex(0, -0.4);
  const PositivityValue py = kaehler_positivity(bp, yel);
  REQUIRE(py.value >= (1.0 - 2.0 * 0.4) * yel.y.squaredNorm() - 1e-10);
  REQUIRE(py.value == Catch::Approx(py.closed_form()).margin(1e-10));

  // k_C elements are rejected
  GComplexElem kc = GComplexElem::zero(n);
  kc.x(0, 0) = 1.0;
  REQUIRE_THROWS_AS(kaehler_positivity(bp, kc), InKernel);

  // random elements of P \ k_C: strict positivity and closed-form match
  const Polarization p = polarization_build(bp);
  for (int tr = 0; tr < 200; ++tr) {
    Rng rng(1200 + tr);
    GComplexElem x = GComplexElem::zero(n);
    for (const auto& b : p.basis_mod_k) {
      const Complex cc = rng.cgaussian();
      x.x += cc * b.x;
      x.z += cc * b.z;
      x.y += cc * b.y;
    }
    const PositivityValue v = kaehler_positivity(bp, x);
    REQUIRE(v.value > 0.0);
    REQUIRE(std::abs(v.value - v.closed_form()) < 1e-8);
  }

  // half branch: the corner z term contributes zero
  const BasePoint bph = BasePoint::from_request({0.5, 0.5, 0.2}, 4);
  GComplexElem xh = GComplexElem::zero(4);
  xh.z(0, 1) = 1.0;
  xh.z(1, 0) = -1.0;
  xh.x(0, 2) = 0.5;
  const PositivityValue ph = kaehler_positivity(bph, xh);
  REQUIRE(std::abs(ph.c_term) < 1e-12);
  REQUIRE(ph.value > 0.0);
  REQUIRE(ph.value == Catch::Approx(ph.closed_form()).margin(1e-8));
}

TEST_CASE("complex structure") {
  for (const auto& req : {std::vector<double>{0.3, 0.1}, std::vector<double>{0.5, 0.1}}) {
    const int n = 3;
    const BasePoint bp = BasePoint::from_request(req, n);
    const G1pdm g = bp.gamma();

    for (int tr = 0; tr < 50; ++tr) {
      const BogAlgebra x = tangent_project(bp, random_algebra(1300 + tr, n, 1.0));
      if (restricted_norm(x) < 1e-8) continue;
      const BogAlgebra jx = complex_structure(bp, x);
      REQUIRE(validate_algebra(jx) < 1e-12);
      // J stays in the complement
      REQUIRE(op_norm(cond_expectation(bp, jx).assemble()) < 1e-12);
      // J^2 = -id modulo the isotropy algebra (exactly -id on the complement)
      const BogAlgebra jjx = complex_structure(bp, jx);
      REQUIRE(op_norm(tangent_project(bp, jjx + x).assemble()) < 1e-10);

      // omega(Jv, Jw) = omega(v, w) and positivity of the metric
      const BogAlgebra y = tangent_project(bp, random_algebra(1400 + tr, n, 1.0));
      const BogAlgebra jy = complex_structure(bp, y);
      REQUIRE(cocycle_gamma(g, jx, jy) ==
              Catch::Approx(cocycle_gamma(g, x, y)).margin(1e-8));
      REQUIRE(cocycle_gamma(g, x, jx) > 0.0);

      // equivariance under the isotropy group
      const BogUnitary w = random_isotropy_element(bp, 1500 + tr);
      const BogAlgebra adx = pull_back(w.adjoint(), x);
      const CMat lhs = complex_structure(bp, adx).assemble();
      const CMat rhs = pull_back(w.adjoint(), jx).assemble();
      REQUIRE(op_norm(lhs - rhs) < 1e-9);
    }

    BogAlgebra bad = BogAlgebra::zero(n);
    bad.x1(0, 0) = Complex(0, 1);
    REQUIRE_THROWS_AS(complex_structure(bp, bad), NotInComplement);
  }
}
