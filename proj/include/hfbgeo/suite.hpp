#pragma once

#include "hfbgeo/hfbopt.hpp"

#include <string>
#include <vector>

namespace hfbgeo {

// ---------------------------------------------------------------------------
// Cross-module property sweeps, shared by the CLI `suite` subcommand and the
// test binaries. The conjugation is routed through the Ops policy so a broken
// `bar` can be injected to verify that the suite localizes failures.
// ---------------------------------------------------------------------------

struct DefaultOps {
  static CMat bar(const CMat& x) { return hfbgeo::bar(x); }
};

struct CheckResult {
  std::string name;
  int trials = 0;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

namespace detail {

inline void record(std::vector<CheckResult>& out, const std::string& name, int trials,
                   double max_res, double threshold) {
  out.push_back(CheckResult{name, trials, max_res, threshold, max_res <= threshold});
}

}  // namespace detail

template <class Ops = DefaultOps>
std::vector<CheckResult> run_suite(const std::vector<int>& ns, std::uint64_t seed,
                                   int trials) {
  if (trials < 1) throw NoTrials("run_suite: trial count must be positive");
  std::vector<CheckResult> out;
  Rng master(seed);

  // --- CAR relations (independent of the conjugation) --------------------
  {
    double worst = 0.0;
    for (int n : ns) {
      if (n > 4) continue;
      const int dim = fock_dim(n);
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
          const FockOp cj = creation(n, j), ck = creation(n, k);
          const FockOp anti = cj.adjoint() * ck + ck * cj.adjoint();
          FockOp expect = FockOp::Zero(dim, dim);
          if (j == k) expect = FockOp::Identity(dim, dim);
          worst = std::max(worst, op_norm(anti - expect));
          worst = std::max(worst, op_norm(cj * ck + ck * cj));
        }
    }
    detail::record(out, "car", static_cast<int>(ns.size()), worst, 1e-13);
  }

  // --- bar is multiplicative (policy-routed) ------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        Rng rng(master.split(1000 + t + 97 * n));
        const CMat a = rng.cgaussian_matrix(n, n), b = rng.cgaussian_matrix(n, n);
        worst = std::max(worst, op_norm(Ops::bar((a * b).eval()) - Ops::bar(a) * Ops::bar(b)));
        ++count;
      }
    detail::record(out, "bar-multiplicative", count, worst, 1e-12);
  }

  // --- I Gamma I = 1 - Gamma (policy-routed) ------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        const G1pdm g = random_g1pdm(master.split(2000 + t + 97 * n), n, {0.4, 0.1});
        const BlockOp blk = g.as_block();
        const BlockOp conj(Ops::bar(blk.x22), Ops::bar(blk.x21), Ops::bar(blk.x12),
                           Ops::bar(blk.x11));
        const CMat lhs = conj.assemble();
        const CMat rhs = CMat::Identity(2 * n, 2 * n) - g.assemble();
        worst = std::max(worst, op_norm(lhs - rhs));
        ++count;
      }
    detail::record(out, "conj-I-g1pdm", count, worst, 1e-12);
  }

  // --- restricted norm submultiplicative ----------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        Rng rng(master.split(3000 + t + 97 * n));
        const BlockOp x(rng.cgaussian_matrix(n, n), rng.cgaussian_matrix(n, n),
                        rng.cgaussian_matrix(n, n), rng.cgaussian_matrix(n, n));
        const BlockOp y(rng.cgaussian_matrix(n, n), rng.cgaussian_matrix(n, n),
                        rng.cgaussian_matrix(n, n), rng.cgaussian_matrix(n, n));
        const double excess =
            restricted_norm(x * y) - restricted_norm(x) * restricted_norm(y);
        worst = std::max(worst, excess);
        ++count;
      }
    detail::record(out, "res-norm-submultiplicative", count, worst, 1e-12);
  }

  // --- exp/log round trip --------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        const BogAlgebra x = random_algebra(master.split(4000 + t + 97 * n), n, 0.1);
        const BogUnitary w = exp_alg(x);
        const BogAlgebra back = log_near_id(w);
        worst = std::max(worst, op_norm(exp_alg(back).assemble() - w.assemble()));
        ++count;
      }
    detail::record(out, "exp-log-roundtrip", count, worst, 1e-10);
  }

  // --- Z2 index is a homomorphism ------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = master.split(5000 + t + 97 * n);
        const int ca = static_cast<int>(s % 2), cb = static_cast<int>((s >> 1) % 2);
        const BogUnitary a = random_unitary(s, n, ca);
        const BogUnitary b = random_unitary(s ^ 0x5555, n, cb);
        const int lhs = z2_index(compose(a, b));
        if (lhs != (ca + cb) % 2) worst = 1.0;
        ++count;
      }
    detail::record(out, "z2-homomorphism", count, worst, 0.0);
  }

  // --- action matches dense conjugation ------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = master.split(6000 + t + 97 * n);
        const BogUnitary w = random_unitary(s, n);
        const G1pdm g = random_g1pdm(s ^ 0xabc, n, {0.45, 0.2});
        const CMat dense = w.assemble() * g.assemble() * w.assemble().adjoint();
        worst = std::max(worst, op_norm(act(w, g).assemble() - dense));
        ++count;
      }
    detail::record(out, "act-dense-oracle", count, worst, 1e-11);
  }

  // --- diagonalization ------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = master.split(7000 + t + 97 * n);
        std::vector<double> req = {0.5, 0.3};
        if (t % 3 == 1) req = {0.4, 0.4};
        if (t % 3 == 2) req = {0.25};
        const G1pdm g = random_g1pdm(s, n, req);
        const DiagonalizeResult d = diagonalize(g);
        worst = std::max(worst, d.residual);
        worst = std::max(worst, validate_unitary(d.w));
        ++count;
      }
    detail::record(out, "diagonalize", count, worst, 1e-9);
  }

  // --- conditional expectation ----------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = master.split(8000 + t + 97 * n);
        const BasePoint bp =
            BasePoint::from_request(t % 2 ? std::vector<double>{0.5, 0.2}
                                          : std::vector<double>{0.35, 0.1},
                                    n);
        const BogAlgebra x = random_algebra(s, n, 1.0);
        const BogAlgebra ex = cond_expectation(bp, x);
        worst = std::max(worst, op_norm(cond_expectation(bp, ex).assemble() - ex.assemble()));
        worst = std::max(worst, std::max(0.0, restricted_norm(ex) - restricted_norm(x)));
        const CMat gm = bp.gamma().assemble();
        const CMat exm = ex.assemble();
        worst = std::max(worst, op_norm(gm * exm - exm * gm));
        ++count;
      }
    detail::record(out, "cond-expectation", count, worst, 1e-10);
  }

  // --- closed-range inequalities ---------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = master.split(9000 + t + 97 * n);
        const BasePoint bp =
            BasePoint::from_request(t % 2 ? std::vector<double>{0.5, 0.15}
                                          : std::vector<double>{0.4, 0.1},
                                    n);
        Rng rng(s);
        const BlockOp x(rng.cgaussian_matrix(n, n), rng.cgaussian_matrix(n, n),
                        rng.cgaussian_matrix(n, n), rng.cgaussian_matrix(n, n));
        const auto [ct, cz] = closed_range_constants(bp.spec);
        const G1pdm g = bp.gamma();
        const BlockOp dx = derivation_full(g, x);
        const BlockOp rem = x - cond_expectation_full(bp, x);
        worst = std::max(worst, ct * restricted_norm(rem) - restricted_norm(dx));
        worst = std::max(worst, cz * op_norm(rem.assemble()) - op_norm(dx.assemble()));
        ++count;
      }
    detail::record(out, "closed-range", count, worst, 1e-12);
  }

  // --- cocycle identities ------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = master.split(10000 + t + 97 * n);
        const G1pdm g = random_g1pdm(s ^ 0x77, n, {0.4, 0.2});
        const BogAlgebra x = random_algebra(s, n, 1.0);
        const BogAlgebra y = random_algebra(s ^ 0x1, n, 1.0);
        const BogAlgebra z = random_algebra(s ^ 0x2, n, 1.0);
        const double jac = cocycle_gamma(g, x, bracket(y, z)) +
                           cocycle_gamma(g, z, bracket(x, y)) +
                           cocycle_gamma(g, y, bracket(z, x));
        worst = std::max(worst, std::abs(jac));
        // coboundary split s_Gamma = -s_+ + f([. , .])
        const double split = cocycle_gamma(g, x, y) + cocycle_splus(x, y) -
                             coboundary_f(g, bracket(x, y));
        worst = std::max(worst, std::abs(split));
        ++count;
      }
    detail::record(out, "cocycle", count, worst, 1e-10);
  }

  // --- radical = isotropy --------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns) {
      for (const auto& req :
           {std::vector<double>{0.4, 0.1}, std::vector<double>{0.5, 0.25}}) {
        const BasePoint bp = BasePoint::from_request(req, n);
        const RadicalReport rep = radical_check(bp);
        if (rep.null_dim != rep.iso_dim) worst = 1.0;
        worst = std::max(worst, rep.max_angle);
        ++count;
      }
    }
    detail::record(out, "radical", count, worst, 1e-8);
  }

  // --- polarization ----------------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int rep = 0; rep < 2; ++rep) {
        const BasePoint bp = BasePoint::from_request(
            rep ? std::vector<double>{0.5, 0.2} : std::vector<double>{0.45, 0.15}, n);
        const Polarization p = polarization_build(bp);
        worst = std::max(worst, polarization_isotropy_residual(bp, p));
        for (int t = 0; t < std::max(1, trials / 2); ++t) {
          Rng rng(master.split(11000 + 31 * n + 7 * rep + t));
          GComplexElem x = GComplexElem::zero(n);
          for (const auto& b : p.basis_mod_k) {
            const Complex c = rng.cgaussian();
            x.x += c * b.x;
            x.z += c * b.z;
            x.y += c * b.y;
          }
          const PositivityValue pv = kaehler_positivity(bp, x);
          worst = std::max(worst, std::abs(pv.value - pv.closed_form()));
          if (pv.value <= 0.0) worst = 1.0;
          ++count;
        }
      }
    detail::record(out, "polarization", count, worst, 1e-8);
  }

  // --- complex structure --------------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = master.split(12000 + t + 97 * n);
        const BasePoint bp = BasePoint::from_request(
            t % 2 ? std::vector<double>{0.5, 0.1} : std::vector<double>{0.3, 0.1}, n);
        const BogAlgebra x = tangent_project(bp, random_algebra(s, n, 1.0));
        const BogAlgebra jx = complex_structure(bp, x);
        const BogAlgebra jjx = complex_structure(bp, jx);
        worst = std::max(worst,
                         op_norm(tangent_project(bp, jjx + x).assemble()));
        const double g_metric = cocycle_gamma(bp.gamma(), x, jx);
        const double xnorm = restricted_norm(x);
        if (xnorm > 1e-6 && g_metric <= 0.0) worst = 1.0;
        ++count;
      }
    detail::record(out, "complex-structure", count, worst, 1e-8);
  }

  // --- geodesics -------------------------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        Rng rng(master.split(13000 + t + 97 * n));
        CMat y = rng.cgaussian_matrix(n, n);
        y = 0.5 * (y - y.transpose()).eval();
        const double tt = 0.3 + 3.0 * rng.uniform();
        const G1pdm closed = geodesic_pminus(y, tt);
        CMat xm = CMat::Zero(2 * n, 2 * n);
        xm.topRightCorner(n, n) = y;
        xm.bottomLeftCorner(n, n) = y.conjugate();
        const CMat e = mat_exp((tt * xm).eval());
        CMat pm = CMat::Zero(2 * n, 2 * n);
        pm.bottomRightCorner(n, n) = CMat::Identity(n, n);
        worst = std::max(worst, op_norm(closed.assemble() - e * pm * e.adjoint()));
        ++count;
      }
    detail::record(out, "geodesic", count, worst, 1e-9);
  }

  // --- Fock round trip -------------------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns) {
      if (n > 4) continue;
      for (int t = 0; t < std::max(1, trials / 4); ++t) {
        const std::uint64_t s = master.split(14000 + t + 97 * n);
        const G1pdm g = random_g1pdm(s, n, {0.35, 0.1});
        const G1pdm back = g1pdm_of_state(quasifree_state(g));
        worst = std::max(worst, op_norm(back.assemble() - g.assemble()));
        ++count;
      }
    }
    detail::record(out, "fock-roundtrip", count, worst, 1e-9);
  }

  // --- implementer relation ---------------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns) {
      if (n > 4) continue;
      for (int t = 0; t < std::max(1, trials / 4); ++t) {
        const BogUnitary w = random_unitary(master.split(15000 + t + 97 * n), n,
                                            t % 2);
        const FockOp u = implementer(w);
        worst = std::max(worst, implementer_residual(w, u));
        worst = std::max(worst,
                         op_norm(u * u.adjoint() -
                                 FockOp::Identity(fock_dim(n), fock_dim(n))));
        ++count;
      }
    }
    detail::record(out, "implementer", count, worst, 1e-9);
  }

  // --- Wick degree 4 ------------------------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns) {
      if (n > 4) continue;
      for (int t = 0; t < std::max(1, trials / 4); ++t) {
        const std::uint64_t s = master.split(16000 + t + 97 * n);
        const QfState rho = quasifree_state(random_g1pdm(s, n, {0.3, 0.15}));
        Rng rng(s ^ 0xf00);
        std::vector<WickOp> ops;
        for (int j = 0; j < 4; ++j)
          ops.push_back(WickOp{rng.uniform() < 0.5,
                               1 + static_cast<int>(rng.next_u64() % n)});
        worst = std::max(worst, wick_residual(rho, ops));
        ops.pop_back();
        worst = std::max(worst, wick_residual(rho, ops));  // odd monomial
        ++count;
      }
    }
    detail::record(out, "wick", count, worst, 1e-9);
  }

  // --- number statistics ----------------------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns) {
      if (n > 4) continue;
      for (int t = 0; t < std::max(1, trials / 4); ++t) {
        const std::uint64_t s = master.split(17000 + t + 97 * n);
        const G1pdm g = act(random_unitary(s, n), G1pdm::p_minus(n));
        const QfState rho = quasifree_state(g);
        const NumberStats st = number_stats(rho);
        worst = std::max(worst, std::abs(st.mean - g.gamma.trace().real()));
        worst = std::max(worst, std::abs(st.variance - st.two_tr_alpha));
        ++count;
      }
    }
    detail::record(out, "number-stats", count, worst, 1e-9);
  }

  // --- cross section ---------------------------------------------------------------------------
  {
    double worst = 0.0;
    int count = 0;
    for (int n : ns)
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = master.split(18000 + t + 97 * n);
        const BasePoint bp = BasePoint::from_request({0.4, 0.1}, n);
        const SectionConstants sc = section_constants(bp);
        const G1pdm g = bp.gamma();
        const BogAlgebra x = random_algebra(s, n, 1.0);
        double eps = 0.05;
        BogUnitary u = exp_alg(eps * x);
        double dist = restricted_norm(
            BlockOp::split(act(u, g).assemble() - g.assemble()));
        while (dist >= sc.radius && eps > 1e-8) {
          eps *= 0.25;
          u = exp_alg(eps * x);
          dist = restricted_norm(BlockOp::split(act(u, g).assemble() - g.assemble()));
        }
        if (dist >= sc.radius) continue;
        const BogUnitary sec = local_cross_section(bp, u, sc);
        worst = std::max(worst, op_norm(act(sec, g).assemble() - act(u, g).assemble()));
        ++count;
      }
    detail::record(out, "cross-section", count, worst, 1e-9);
  }

  return out;
}

}  // namespace hfbgeo
