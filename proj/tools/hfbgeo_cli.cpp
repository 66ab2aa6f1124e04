// hfbgeo command-line runner: seeded experiment suites over the orbit
// geometry, with JSON/CSV persistence. Exit codes: 0 all asserted properties
// hold, 1 property failure (the report names the violated invariant and the
// reproducing trial seed), 2 configuration error.

#include "hfbgeo/hfbopt.hpp"
#include "hfbgeo/json_io.hpp"
#include "hfbgeo/suite.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

constexpr const char* kVersion = "hfbgeo 0.1.0";

using namespace hfbgeo;

// ---------------------------------------------------------------------------
// JSON config files: {"subcommand": {"option": value, ...}} or flat.
// Flags given on the command line take precedence (CLI11 default).
// ---------------------------------------------------------------------------

class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    Json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_lnames().empty() && opt->get_configurable()) {
        const std::string name = opt->get_lnames()[0];
        if (opt->count() == 1) {
          j[name] = opt->results().at(0);
        } else if (opt->count() > 1) {
          j[name] = opt->results();
        } else if (default_also && !opt->get_default_str().empty()) {
          j[name] = opt->get_default_str();
        }
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json j;
    input >> j;
    return collect(j, {});
  }

 private:
  static std::vector<CLI::ConfigItem> collect(const Json& j, std::vector<std::string> parents) {
    std::vector<CLI::ConfigItem> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_object()) {
        auto deeper = parents;
        deeper.push_back(it.key());
        auto sub = collect(it.value(), deeper);
        out.insert(out.end(), sub.begin(), sub.end());
      } else {
        CLI::ConfigItem item;
        item.parents = parents;
        item.name = it.key();
        if (it.value().is_array()) {
          for (const auto& v : it.value())
            item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        } else if (it.value().is_string()) {
          item.inputs.push_back(it.value().get<std::string>());
        } else {
          item.inputs.push_back(it.value().dump());
        }
        out.push_back(item);
      }
    }
    return out;
  }
};

// ---------------------------------------------------------------------------
// Deterministic trial-level parallelism. Per-trial seeds come from a
// splittable counter, results are ordered by trial index regardless of the
// completion order, and HFBGEO_THREADS caps the worker count.
// ---------------------------------------------------------------------------

int thread_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("HFBGEO_THREADS")) {
    const long lim = std::strtol(env, nullptr, 10);
    if (lim >= 1 && static_cast<unsigned>(lim) < hw) hw = static_cast<unsigned>(lim);
  }
  return static_cast<int>(hw);
}

template <class Row, class Fn>
std::vector<Row> run_trials(int trials, Fn fn) {
  std::vector<Row> rows(trials);
  const int workers = std::min(thread_cap(), std::max(1, trials));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) rows[t] = fn(t);
    });
  for (auto& th : pool) th.join();
  return rows;
}

struct OutputSink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  void open(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw BadSpec("cannot open output file: " + path);
    os = &file;
  }
  std::ostream& stream() { return *os; }
};

std::vector<double> parse_spec(const std::string& spec) {
  std::vector<double> vals;
  if (spec.empty()) return vals;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  return vals;
}

struct Failure {
  std::string invariant;
  std::uint64_t trial_seed = 0;
  double value = 0.0;
  double threshold = 0.0;
};

int report_failures(const std::vector<Failure>& failures) {
  if (failures.empty()) return 0;
  for (const auto& f : failures)
    std::cerr << "FAIL " << f.invariant << ": value " << f.value << " exceeds "
              << f.threshold << " (reproduce with sub-seed " << f.trial_seed << ")\n";
  return 1;
}

void csv_header(std::ostream& os, const std::string& cols) {
  os << "# " << kVersion << "\n" << cols << "\n";
}

// ---------------------------------------------------------------------------
// Subcommand implementations.
// ---------------------------------------------------------------------------

int cmd_diagonalize(const std::string& in_path, const std::string& out_path, double tol) {
  std::ifstream in(in_path);
  if (!in) {
    std::cerr << "cannot open " << in_path << "\n";
    return 2;
  }
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    std::cerr << "malformed JSON: " << e.what() << "\n";
    return 2;
  }
  const G1pdm g = g1pdm_from_json(j);
  const DiagonalizeResult d = diagonalize(g, tol);
  Json out;
  out["version"] = kVersion;
  out["W"] = to_json(d.w);
  out["lambda"] = std::vector<double>(d.lambda.data(), d.lambda.data() + d.lambda.size());
  out["residual"] = d.residual;
  OutputSink sink;
  sink.open(out_path);
  sink.stream() << out.dump(2) << "\n";
  std::cerr << "residual " << d.residual << "\n";
  return d.residual <= std::max(tol, 1e-9) ? 0 : 1;
}

int cmd_constants(const std::vector<double>& spec, int n, const std::string& out_path) {
  const BasePoint bp = BasePoint::from_request(spec, n);
  const SectionConstants sc = section_constants(bp);
  Json out;
  out["version"] = kVersion;
  out["lambda"] = std::vector<double>(bp.lambda.data(), bp.lambda.data() + bp.lambda.size());
  out["c_tilde"] = sc.c_tilde;
  out["c_zero"] = sc.c_zero;
  out["c_one"] = sc.c_one;
  out["K"] = sc.big_k;
  out["radius"] = sc.radius;
  OutputSink sink;
  sink.open(out_path);
  sink.stream() << out.dump(2) << "\n";
  return 0;
}

int cmd_orbit_check(int n, int trials, std::uint64_t seed, const std::string& out_path) {
  struct Row {
    std::uint64_t sub = 0;
    double act_res = 0, diag_res = 0, lambda_drift = 0;
  };
  Rng master(seed);
  auto rows = run_trials<Row>(trials, [&](int t) {
    const std::uint64_t s = master.split(t);
    Row r;
    r.sub = s;
    const G1pdm g = random_g1pdm(s, n, {0.5, 0.3, 0.1});
    const BogUnitary w = random_unitary(s ^ 0x9e37, n, t % 2);
    const CMat dense = w.assemble() * g.assemble() * w.assemble().adjoint();
    r.act_res = op_norm(act(w, g).assemble() - dense);
    const DiagonalizeResult d1 = diagonalize(g);
    const DiagonalizeResult d2 = diagonalize(act(w, g));
    r.diag_res = std::max(d1.residual, d2.residual);
    r.lambda_drift = (d1.lambda - d2.lambda).cwiseAbs().maxCoeff();
    return r;
  });
  OutputSink sink;
  sink.open(out_path);
  csv_header(sink.stream(), "trial,act_residual,diag_residual,lambda_drift");
  std::vector<Failure> failures;
  for (int t = 0; t < trials; ++t) {
    const Row& r = rows[t];
    sink.stream() << t << "," << r.act_res << "," << r.diag_res << "," << r.lambda_drift
                  << "\n";
    if (r.act_res > 1e-11) failures.push_back({"act-dense-oracle", r.sub, r.act_res, 1e-11});
    if (r.diag_res > 1e-9) failures.push_back({"diagonalize-residual", r.sub, r.diag_res, 1e-9});
    if (r.lambda_drift > 1e-9)
      failures.push_back({"orbit-invariant-spectrum", r.sub, r.lambda_drift, 1e-9});
  }
  return report_failures(failures);
}

int cmd_section_test(const std::vector<double>& spec, int n, int trials, std::uint64_t seed,
                     const std::string& out_path) {
  const BasePoint bp = BasePoint::from_request(spec, n);
  const SectionConstants sc = section_constants(bp);
  const G1pdm g = bp.gamma();
  struct Row {
    std::uint64_t sub = 0;
    double dist = 0;
    bool inside = false;
    double residual = 0, witness_gap = 0, norm_u = 0;
  };
  Rng master(seed);
  auto rows = run_trials<Row>(trials, [&](int t) {
    const std::uint64_t s = master.split(t);
    Row r;
    r.sub = s;
    Rng rng(s);
    const double eps = 0.002 + 0.05 * rng.uniform();
    const BogUnitary u = exp_alg(eps * random_algebra(s ^ 0xabcd, n, 1.0));
    r.dist = restricted_norm(BlockOp::split(act(u, g).assemble() - g.assemble()));
    r.norm_u = restricted_norm(u);
    r.inside = r.dist < sc.radius;
    if (r.inside) {
      const BogUnitary sec = local_cross_section(bp, u, sc);
      r.residual = op_norm(act(sec, g).assemble() - act(u, g).assemble());
      // second witness of the same orbit point
      const std::vector<BogAlgebra> iso = isotropy_basis(bp);
      BogAlgebra shift = BogAlgebra::zero(n);
      for (const auto& b : iso) shift = shift + (0.4 * rng.gaussian()) * b;
      const BogUnitary u2 = compose(u, exp_alg(shift));
      const BogUnitary sec2 = local_cross_section(bp, u2, sc);
      r.witness_gap = op_norm(sec.assemble() - sec2.assemble());
    }
    return r;
  });
  OutputSink sink;
  sink.open(out_path);
  csv_header(sink.stream(), "trial,dist,inside_radius,section_residual");
  std::vector<Failure> failures;
  for (int t = 0; t < trials; ++t) {
    const Row& r = rows[t];
    sink.stream() << t << "," << r.dist << "," << (r.inside ? 1 : 0) << "," << r.residual
                  << "\n";
    if (r.inside && r.residual > 1e-9)
      failures.push_back({"section-property", r.sub, r.residual, 1e-9});
    if (r.inside && r.witness_gap > 1e-9)
      failures.push_back({"witness-independence", r.sub, r.witness_gap, 1e-9});
    if (r.dist <= sc.c_zero / 3.0 && r.norm_u > sc.big_k)
      failures.push_back({"norm-bound-K", r.sub, r.norm_u, sc.big_k});
  }
  return report_failures(failures);
}

int cmd_cocycle_test(int n, int trials, std::uint64_t seed, const std::string& out_path) {
  struct Row {
    std::uint64_t sub = 0;
    double jacobi = 0, invariance = 0, coboundary = 0, vacuum_match = 0;
  };
  Rng master(seed);
  auto rows = run_trials<Row>(trials, [&](int t) {
    const std::uint64_t s = master.split(t);
    Row r;
    r.sub = s;
    const G1pdm g = random_g1pdm(s ^ 0x11, n, {0.4, 0.2});
    const BogAlgebra x = random_algebra(s, n, 1.0);
    const BogAlgebra y = random_algebra(s ^ 0x22, n, 1.0);
    const BogAlgebra z = random_algebra(s ^ 0x33, n, 1.0);
    r.jacobi = std::abs(cocycle_gamma(g, x, bracket(y, z)) +
                        cocycle_gamma(g, z, bracket(x, y)) +
                        cocycle_gamma(g, y, bracket(z, x)));
    const BogUnitary v = random_unitary(s ^ 0x44, n, t % 2);
    const CMat vm = v.assemble();
    auto ad = [&](const BogAlgebra& a) {
      const CMat m = vm * a.assemble() * vm.adjoint();
      return BogAlgebra(0.5 * (m.topLeftCorner(n, n) - m.topLeftCorner(n, n).adjoint().eval()),
                        0.5 * (m.topRightCorner(n, n) - m.topRightCorner(n, n).transpose().eval()));
    };
    r.invariance =
        std::abs(cocycle_gamma(g, ad(x), ad(y)) - cocycle_gamma(act(v.adjoint(), g), x, y));
    r.coboundary = std::abs(cocycle_gamma(g, x, y) + cocycle_splus(x, y) -
                            coboundary_f(g, bracket(x, y)));
    r.vacuum_match = std::abs(cocycle_gamma(G1pdm::p_minus(n), x, y) + cocycle_splus(x, y));
    return r;
  });
  OutputSink sink;
  sink.open(out_path);
  csv_header(sink.stream(), "trial,jacobi,invariance,coboundary,vacuum_match");
  std::vector<Failure> failures;
  for (int t = 0; t < trials; ++t) {
    const Row& r = rows[t];
    sink.stream() << t << "," << r.jacobi << "," << r.invariance << "," << r.coboundary
                  << "," << r.vacuum_match << "\n";
    if (r.jacobi > 1e-10) failures.push_back({"cocycle-jacobi", r.sub, r.jacobi, 1e-10});
    if (r.invariance > 1e-10)
      failures.push_back({"cocycle-invariance", r.sub, r.invariance, 1e-10});
    if (r.coboundary > 1e-10)
      failures.push_back({"coboundary-split", r.sub, r.coboundary, 1e-10});
    if (r.vacuum_match > 1e-12)
      failures.push_back({"vacuum-cocycle-sign", r.sub, r.vacuum_match, 1e-12});
  }
  return report_failures(failures);
}

int cmd_radical_test(const std::vector<double>& spec, int n, const std::string& out_path) {
  const BasePoint bp = BasePoint::from_request(spec, n);
  const RadicalReport rep = radical_check(bp);
  Json out;
  out["version"] = kVersion;
  out["null_dim"] = rep.null_dim;
  out["iso_dim"] = rep.iso_dim;
  out["max_principal_angle"] = rep.max_angle;
  out["gram_gap"] = rep.gram_gap;
  OutputSink sink;
  sink.open(out_path);
  sink.stream() << out.dump(2) << "\n";
  if (rep.null_dim != rep.iso_dim || rep.max_angle > 1e-8) {
    std::cerr << "FAIL radical-vs-isotropy: dims " << rep.null_dim << "/" << rep.iso_dim
              << " angle " << rep.max_angle << "\n";
    return 1;
  }
  return 0;
}

int cmd_polarization_test(const std::vector<double>& spec, int n, int trials,
                          std::uint64_t seed, const std::string& out_path) {
  const BasePoint bp = BasePoint::from_request(spec, n);
  const Polarization p = polarization_build(bp);
  const double iso_res = polarization_isotropy_residual(bp, p);
  struct Row {
    std::uint64_t sub = 0;
    double in_p = 0, positivity = 0, closed = 0;
  };
  Rng master(seed);
  auto rows = run_trials<Row>(trials, [&](int t) {
    const std::uint64_t s = master.split(t);
    Row r;
    r.sub = s;
    Rng rng(s);
    GComplexElem x = GComplexElem::zero(n);
    for (const auto& b : p.basis_mod_k) {
      const Complex c = rng.cgaussian();
      x.x += c * b.x;
      x.z += c * b.z;
      x.y += c * b.y;
    }
    r.in_p = in_p_residual(bp, x);
    const PositivityValue v = kaehler_positivity(bp, x);
    r.positivity = v.value;
    r.closed = v.closed_form();
    return r;
  });
  OutputSink sink;
  sink.open(out_path);
  csv_header(sink.stream(),
             "trial,in_P_residual,isotropy_residual,positivity_value,closed_form_value");
  std::vector<Failure> failures;
  for (int t = 0; t < trials; ++t) {
    const Row& r = rows[t];
    sink.stream() << t << "," << r.in_p << "," << iso_res << "," << r.positivity << ","
                  << r.closed << "\n";
    if (r.in_p > 1e-12) failures.push_back({"polarization-membership", r.sub, r.in_p, 1e-12});
    if (r.positivity <= 0.0)
      failures.push_back({"kaehler-positivity", r.sub, r.positivity, 0.0});
    if (std::abs(r.positivity - r.closed) > 1e-8)
      failures.push_back(
          {"positivity-closed-form", r.sub, std::abs(r.positivity - r.closed), 1e-8});
  }
  if (iso_res > 1e-10) failures.push_back({"polarization-isotropy", seed, iso_res, 1e-10});
  return report_failures(failures);
}

int cmd_geodesic(int n, std::uint64_t seed, int points, const std::string& out_path) {
  Rng master(seed);
  OutputSink sink;
  sink.open(out_path);
  csv_header(sink.stream(), "point,t,y_norm,residual");
  std::vector<Failure> failures;
  for (int i = 0; i < points; ++i) {
    Rng rng(master.split(i));
    CMat y = rng.cgaussian_matrix(n, n);
    y = 0.5 * (y - y.transpose()).eval();
    const double t = 0.1 + 4.0 * rng.uniform();  // includes ||t y|| > pi
    const G1pdm closed = geodesic_pminus(y, t);
    CMat xm = CMat::Zero(2 * n, 2 * n);
    xm.topRightCorner(n, n) = y;
    xm.bottomLeftCorner(n, n) = y.conjugate();
    const CMat e = mat_exp((t * xm).eval());
    const double res =
        op_norm(closed.assemble() - e * G1pdm::p_minus(n).assemble() * e.adjoint());
    sink.stream() << i << "," << t << "," << hs_norm(y) << "," << res << "\n";
    if (res > 1e-9) failures.push_back({"geodesic-closed-form", master.split(i), res, 1e-9});
  }
  return report_failures(failures);
}

int cmd_fock_verify(int n, std::uint64_t seed, int trials, const std::string& out_path) {
  struct Row {
    std::uint64_t sub = 0;
    double car = 0, impl_rel = 0, impl_unit = 0, roundtrip = 0, equivariance = 0,
           wick4 = 0, wick6 = 0, odd = 0, num_mean = 0, num_var = 0;
  };
  Rng master(seed);
  // CAR is state independent; check once
  double car = 0.0;
  const int dim = fock_dim(n);
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) {
      FockOp expect = FockOp::Zero(dim, dim);
      if (j == k) expect = FockOp::Identity(dim, dim);
      car = std::max(car, op_norm(annihilation(n, j) * creation(n, k) +
                                  creation(n, k) * annihilation(n, j) - expect));
      car = std::max(car, op_norm(creation(n, j) * creation(n, k) +
                                  creation(n, k) * creation(n, j)));
    }
  auto rows = run_trials<Row>(trials, [&](int t) {
    const std::uint64_t s = master.split(t);
    Row r;
    r.sub = s;
    r.car = car;
    const BogUnitary w = random_unitary(s, n, t % 2);
    const FockOp uw = implementer(w);
    r.impl_rel = implementer_residual(w, uw);
    r.impl_unit = op_norm(uw * uw.adjoint() - FockOp::Identity(dim, dim));

    const G1pdm g = random_g1pdm(s ^ 0x5, n, {0.45, 0.2});
    const QfState rho = quasifree_state(g);
    r.roundtrip = op_norm(g1pdm_of_state(rho).assemble() - g.assemble());

    const QfState moved{(uw.adjoint() * rho.rho * uw).eval(), n};
    const CMat expect_g = w.assemble().adjoint() * g.assemble() * w.assemble();
    r.equivariance = op_norm(g1pdm_of_state(moved).assemble() - expect_g);

    Rng rng(s ^ 0x6);
    auto pick = [&] {
      return WickOp{rng.uniform() < 0.5, 1 + static_cast<int>(rng.next_u64() % n)};
    };
    r.wick4 = wick_residual(rho, {pick(), pick(), pick(), pick()});
    r.wick6 = wick_residual(rho, {pick(), pick(), pick(), pick(), pick(), pick()});
    r.odd = wick_residual(rho, {pick(), pick(), pick()});

    const G1pdm pure = act(random_unitary(s ^ 0x7, n), G1pdm::p_minus(n));
    const NumberStats st = number_stats(quasifree_state(pure));
    r.num_mean = std::abs(st.mean - pure.gamma.trace().real());
    r.num_var = std::abs(st.variance - st.two_tr_alpha);
    return r;
  });
  OutputSink sink;
  sink.open(out_path);
  csv_header(sink.stream(),
             "trial,car,impl_relation,impl_unitarity,roundtrip,equivariance,wick4,wick6,odd,"
             "number_mean,number_variance");
  std::vector<Failure> failures;
  for (int t = 0; t < trials; ++t) {
    const Row& r = rows[t];
    sink.stream() << t << "," << r.car << "," << r.impl_rel << "," << r.impl_unit << ","
                  << r.roundtrip << "," << r.equivariance << "," << r.wick4 << "," << r.wick6
                  << "," << r.odd << "," << r.num_mean << "," << r.num_var << "\n";
    auto need = [&](const char* name, double v, double thr) {
      if (v > thr) failures.push_back({name, r.sub, v, thr});
    };
    need("car", r.car, 1e-13);
    need("implementer-relation", r.impl_rel, 1e-9);
    need("implementer-unitarity", r.impl_unit, 1e-10);
    need("g1pdm-roundtrip", r.roundtrip, 1e-9);
    need("equivariance", r.equivariance, 1e-9);
    need("wick-degree-4", r.wick4, 1e-9);
    need("wick-degree-6", r.wick6, 1e-9);
    need("wick-odd", r.odd, 1e-10);
    need("number-mean", r.num_mean, 1e-10);
    need("number-variance", r.num_var, 1e-9);
  }
  return report_failures(failures);
}

int cmd_hfb_minimize(int sites, double t, double u_int, double mu, std::uint64_t seed,
                     const std::string& convention, const std::string& grid_spec,
                     const std::string& out_path) {
  const LatticeConvention conv = (convention == "spinless") ? LatticeConvention::kSpinless
                                                            : LatticeConvention::kSpinHalf;
  const LatticeHamiltonian ham = build_hubbard(sites, t, u_int, mu, conv);
  MinimizeParams params;
  params.seed = seed;
  if (!grid_spec.empty()) params.lambda_grid = parse_spec(grid_spec);
  const HfbResult res = minimize_hfb(ham, G1pdm::p_minus(ham.n), params);
  const double egs = ground_energy(ham);
  Json out;
  out["version"] = kVersion;
  out["L"] = sites;
  out["t"] = t;
  out["U"] = u_int;
  out["mu"] = mu;
  out["convention"] = (conv == LatticeConvention::kSpinless) ? "spinless" : "spin";
  out["energy"] = res.energy;
  out["ground_energy"] = egs;
  out["gap"] = res.energy - egs;
  out["pairing_norm"] = res.pairing_norm;
  out["projection_residual"] = res.projection_residual;
  out["iterations"] = res.iterations;
  out["converged"] = res.converged;
  out["lambda"] =
      std::vector<double>(res.lambda.data(), res.lambda.data() + res.lambda.size());
  out["gamma_star"] = to_json(res.gamma_star);
  OutputSink sink;
  sink.open(out_path);
  sink.stream() << out.dump(2) << "\n";
  if (res.energy < egs - 1e-8) {
    std::cerr << "FAIL variational-bound: energy " << res.energy << " below ground "
              << egs << " (seed " << seed << ")\n";
    return 1;
  }
  return 0;
}

int cmd_suite(std::uint64_t seed, int trials, const std::string& out_path) {
  const auto results = run_suite({2, 3, 4}, seed, trials);
  OutputSink sink;
  sink.open(out_path);
  csv_header(sink.stream(), "check,trials,max_residual,threshold,pass");
  bool ok = true;
  for (const auto& r : results) {
    sink.stream() << r.name << "," << r.trials << "," << r.max_residual << ","
                  << r.threshold << "," << (r.pass ? "pass" : "FAIL") << "\n";
    ok = ok && r.pass;
  }
  if (!ok) std::cerr << "FAIL suite: see table (seed " << seed << ")\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::cout << std::setprecision(17);
  std::cerr << std::setprecision(17);

  CLI::App app{std::string(kVersion) + " - Bogoliubov-orbit geometry toolkit"};
  app.set_version_flag("--version", kVersion);
  app.config_formatter(std::make_shared<ConfigJson>());
  app.set_config("--config", "", "JSON config file (flags take precedence)");
  app.require_subcommand(1);

  // shared option storage
  int n = 4, trials = 100, points = 20, sites = 2;
  std::uint64_t seed = 1;
  double tol = 1e-10, t_hop = 1.0, u_int = 4.0, mu = 0.0;
  std::string in_path, out_path, spec = "0.4,0", convention = "spin", grid;

  auto* diag = app.add_subcommand("diagonalize", "diagonalize a g1-pdm from JSON");
  diag->add_option("--in", in_path, "input g1-pdm JSON")->required();
  diag->add_option("--tol", tol, "residual tolerance");
  diag->add_option("--out", out_path, "output JSON (default stdout)");

  auto* orbit = app.add_subcommand("orbit-check", "action/diagonalization sweeps");
  orbit->add_option("--n", n);
  orbit->add_option("--trials", trials);
  orbit->add_option("--seed", seed);
  orbit->add_option("--out", out_path);

  auto* section = app.add_subcommand("section-test", "local cross-section sweeps");
  section->add_option("--spec", spec, "comma list of eigenvalues in [0, 1/2]");
  section->add_option("--n", n);
  section->add_option("--trials", trials);
  section->add_option("--seed", seed);
  section->add_option("--out", out_path);

  auto* consts = app.add_subcommand("constants", "closed-range and section constants");
  consts->add_option("--spec", spec);
  consts->add_option("--n", n);
  consts->add_option("--out", out_path);

  auto* coc = app.add_subcommand("cocycle-test", "cocycle identity sweeps");
  coc->add_option("--n", n);
  coc->add_option("--trials", trials);
  coc->add_option("--seed", seed);
  coc->add_option("--out", out_path);

  auto* rad = app.add_subcommand("radical-test", "radical vs isotropy algebra");
  rad->add_option("--spec", spec);
  rad->add_option("--n", n);
  rad->add_option("--out", out_path);

  auto* pol = app.add_subcommand("polarization-test", "Kaehler polarization sweeps");
  pol->add_option("--spec", spec);
  pol->add_option("--n", n);
  pol->add_option("--trials", trials);
  pol->add_option("--seed", seed);
  pol->add_option("--out", out_path);

  auto* geo = app.add_subcommand("geodesic", "closed form vs exponential conjugation");
  geo->add_option("--n", n);
  geo->add_option("--seed", seed);
  geo->add_option("--points", points);
  geo->add_option("--out", out_path);

  auto* fock = app.add_subcommand("fock-verify", "Fock-space oracle sweeps");
  fock->add_option("--n", n)->check(CLI::Range(1, 6));
  fock->add_option("--trials", trials);
  fock->add_option("--seed", seed);
  fock->add_option("--out", out_path);

  auto* hfb = app.add_subcommand("hfb-minimize", "minimize the HFB functional");
  hfb->add_option("--L", sites, "lattice sites");
  hfb->add_option("--t", t_hop, "hopping");
  hfb->add_option("--U", u_int, "interaction");
  hfb->add_option("--mu", mu, "chemical potential");
  hfb->add_option("--seed", seed);
  hfb->add_option("--convention", convention)->check(CLI::IsMember({"spin", "spinless"}));
  hfb->add_option("--lambda-grid", grid, "comma list of orbit-search grid values");
  hfb->add_option("--out", out_path);

  auto* suite = app.add_subcommand("suite", "run every module's property sweep");
  suite->add_option("--seed", seed);
  suite->add_option("--trials", trials);
  suite->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (diag->parsed()) return cmd_diagonalize(in_path, out_path, tol);
    if (orbit->parsed()) return cmd_orbit_check(n, trials, seed, out_path);
    if (section->parsed())
      return cmd_section_test(parse_spec(spec), n, trials, seed, out_path);
    if (consts->parsed()) return cmd_constants(parse_spec(spec), n, out_path);
    if (coc->parsed()) return cmd_cocycle_test(n, trials, seed, out_path);
    if (rad->parsed()) return cmd_radical_test(parse_spec(spec), n, out_path);
    if (pol->parsed())
      return cmd_polarization_test(parse_spec(spec), n, trials, seed, out_path);
    if (geo->parsed()) return cmd_geodesic(n, seed, points, out_path);
    if (fock->parsed()) return cmd_fock_verify(n, seed, trials, out_path);
    if (hfb->parsed())
      return cmd_hfb_minimize(sites, t_hop, u_int, mu, seed, convention, grid, out_path);
    if (suite->parsed()) return cmd_suite(seed, trials, out_path);
  } catch (const NoTrials& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const BadSpec& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "property failure: " << e.what() << " (seed " << seed << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
