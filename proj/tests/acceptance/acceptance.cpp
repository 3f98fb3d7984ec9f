// Acceptance run: one line per criterion, exit status 1 if any fails.
//
//   acceptance [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <loewner/chains.hpp>
#include <loewner/coefficients.hpp>
#include <loewner/errors.hpp>
#include <loewner/generators.hpp>
#include <loewner/spirallike.hpp>
#include <loewner/transition.hpp>
#include <loewner/verify.hpp>

using namespace loewner;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> notes;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

CMatrix diag(std::vector<cplx> d) {
  const int n = static_cast<int>(d.size());
  CMatrix A = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = d[i];
  return A;
}

// v_1 for h = (lambda z_1 + a(t) z_2^2, z_2) with a = 1_[0,3] or e^{-t}.
CVector example_exact(double lambda, bool window, const CVector& z, double t) {
  const double c = window ? lambda - 2.0 : lambda - 3.0;
  const double end = window ? std::min(t, 3.0) : t;
  const double integral = std::abs(c) < 1e-15 ? end : (std::exp(c * end) - 1.0) / c;
  CVector v(2);
  v(0) = std::exp(-lambda * t) * (z(0) - z(1) * z(1) * integral);
  v(1) = std::exp(-t) * z(1);
  return v;
}

GeneratorSpec two_scale(Rng& rng, bool time_dependent) {
  const OperatorA A = analyze(diag({cplx(2.5, rng.uniform(-1, 1)), cplx(1.0, rng.uniform(-1, 1))}));
  RandomGeneratorOptions opt;
  opt.max_degree = 3;
  opt.time_dependent = time_dependent;
  opt.fraction = 0.5;
  return random_generator(rng, A, opt);
}

Outcome bk_spectrum() {
  constexpr double kTol = 1e-8;
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const OperatorA A = random_operator(rng, n, 0.5, 2.0, trial % 2 == 0);
    if (!A.diagonalizable()) return {false, "random operator not diagonalizable", {}};
    for (int k = 2; k <= 4; ++k) worst = std::max(worst, Bk_spectrum_mismatch(A, k));
  }
  return {worst <= kTol, fmt("max |mu - formula| = %.2e", worst) + fmt(" (tol %.0e)", kTol), {}};
}

Outcome exp_identity_check() {
  constexpr double kTol = 1e-7;
  Rng rng(102);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.integer(2, 4);
    const int k = rng.integer(2, 4);
    const OperatorA A = random_operator(rng, n, 0.3, 2.0, false);
    HomPolyMap Q(n, k);
    for (Eigen::Index i = 0; i < Q.coeffs().size(); ++i) Q.coeffs()(i) = rng.complex_normal();
    worst = std::max(worst, exp_identities(A, Q, rng.ball(n, 0.95), rng.uniform(-1.0, 1.0)).max());
  }
  return {worst <= kTol, fmt("max relative residual = %.2e", worst) + fmt(" (tol %.0e)", kTol), {}};
}

Outcome closed_form_oracle() {
  constexpr double kTol = 1e-9;
  Rng rng(103);
  std::vector<double> ts;
  for (int i = 0; i <= 100; ++i) ts.push_back(0.1 * i);
  double worst = 0.0;
  for (double lambda : {2.0, 2.5})
    for (bool window : {true, false}) {
      const auto a = window ? TimeFunction::window(3.0) : TimeFunction::exp_decay(1.0);
      const auto h = example_generator(lambda, a);
      for (int p = 0; p < 20; ++p) {
        const CVector z = rng.ball(2, 0.95);
        const auto traj = integrate(h, z, 0.0, 10.0, kTol, {ts});
        for (std::size_t i = 0; i < ts.size(); ++i)
          worst = std::max(worst, (traj.values[i] - example_exact(lambda, window, z, ts[i])).norm());
      }
    }
  return {worst <= 10 * kTol, fmt("max |v - v_exact| = %.2e", worst) + fmt(" (tol %.0e)", 10 * kTol), {}};
}

Outcome transition_inequality() {
  constexpr double kMargin = 1e-6;
  Rng rng(104);
  const std::vector<double> radii{0.25, 0.5, 0.75, 0.9, 0.99};
  const std::vector<double> vt{0.0, 1.0, 2.5, 5.0, 10.0};
  double worst_ratio = 0.0, worst_excess = 0.0;
  int invalid = 0;
  for (int g = 0; g < 100; ++g) {
    const int n = rng.integer(2, 3);
    const OperatorA A = random_operator(rng, n, 0.3, 2.0, g % 2 == 0);
    const auto h = random_generator(rng, A);
    if (!validate(h, radii, 50, vt, g, false).valid()) {
      ++invalid;
      continue;
    }
    for (int p = 0; p < 10; ++p) {
      const CVector z = rng.ball(n, 0.95);
      const auto traj = integrate(h, z, 0.0, 10.0, 1e-10);
      const auto rep = check_transition_inequality(traj, A);
      worst_ratio = std::max(worst_ratio, rep.max_ratio);
      worst_excess = std::max(worst_excess, rep.max_norm_excess);
    }
  }
  const bool pass = invalid == 0 && worst_ratio <= 1.0 + kMargin && worst_excess <= kMargin;
  return {pass,
          fmt("max ratio = %.9f", worst_ratio) + fmt(", max |v| - |z| = %.2e", worst_excess) +
              fmt(", invalid generators = %.0f", invalid),
          {}};
}

Outcome chain_example() {
  constexpr double kTol = 1e-6;
  const auto h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  Rng rng(105);
  std::vector<CVector> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(rng.ball(2, 0.9));
  const auto target = [](const CVector& z) {
    CVector g(2);
    g << z(0) - 2.0 * z(1) * z(1), z(1);
    return g;
  };
  const auto run = [&](const std::vector<HomPolyMap>& F0, double& worst, double& worst_id) {
    const auto coeffs = solve_coefficients(h, F0);
    ChainOptions opt;
    opt.throw_on_failure = false;
    const auto ev = chain_limit_batch(h, coeffs, pts, 0.0, 1e-9, opt);
    worst = worst_id = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      worst = std::max(worst, (ev.points[i].g - target(pts[i])).norm());
      worst_id = std::max(worst_id, (ev.points[i].g - pts[i]).norm());
    }
    return ev.all_converged();
  };
  double worst = 0, worst_id = 0;
  const bool converged = run({}, worst, worst_id);
  Outcome o;
  o.pass = converged && worst <= kTol;
  o.detail = std::string(converged ? "converged" : "NOT converged") +
             fmt(", F0_le = 0: max |g - (z1 - 2 z2^2, z2)| = %.2e", worst) + fmt(" (tol %.0e)", kTol);
  o.notes.push_back(fmt("F0_le = 0 gives max |g - z| = %.2e", worst_id));
  double w2 = 0, id2 = 0;
  const bool c2 = run({HomPolyMap::monomial(2, {0, 2}, 0, -2.0)}, w2, id2);
  o.notes.push_back(std::string(c2 ? "converged" : "NOT converged") +
                    fmt(", F0_le = -2 z2^2 e1: max |g - (z1 - 2 z2^2, z2)| = %.2e", w2));
  return o;
}

Outcome subordination() {
  constexpr double kTol = 1e-5;
  Rng rng(106);
  std::vector<GeneratorSpec> hs{example_generator(2.0, TimeFunction::window(3.0)), two_scale(rng, true)};
  double worst = 0.0;
  for (const auto& h : hs) {
    const auto coeffs = solve_coefficients(h);
    for (int p = 0; p < 20; ++p) {
      const double s = rng.uniform(0.0, 2.0);
      const double t = s + rng.uniform(0.0, 3.0);
      worst = std::max(worst, check_subordination(h, coeffs, rng.ball(2, 0.9), s, t, 1e-8).difference);
    }
  }
  return {worst <= kTol, fmt("max |g(v(z,s,t),t) - g(z,s)| = %.2e", worst) + fmt(" (tol %.0e)", kTol), {}};
}

Outcome coefficient_residuals() {
  constexpr double kTol = 1e-6;
  std::vector<double> grid;
  for (int i = 0; i <= 80; ++i) grid.push_back(0.25 * i);
  double worst = 0.0, formula = 0.0;
  Rng rng(107);
  std::vector<GeneratorSpec> hs{example_generator(2.5, TimeFunction::exp_decay(1.0)),
                                example_generator(2.0, TimeFunction::window(3.0)), two_scale(rng, true),
                                two_scale(rng, false)};
  for (const auto& h : hs) {
    const auto set = solve_coefficients(h);
    for (int k = 2; k <= set.max_degree(); ++k)
      worst = std::max(worst, residual_check(set.degree(k), grid).max_relative);
  }
  // resonant case: F_2^0(t) = F_2^0(0) + int_0^t H_2^0(s) ds on the z_2^2 e_1 mode
  const OperatorA A = analyze(diag({2.0, 1.0}));
  const MultiIndex m{0, 2};
  const cplx c0(0.2, -0.1);
  const std::vector<HomPolyMap> F0{HomPolyMap::monomial(2, m, 0, c0)};
  for (const auto& a : {TimeFunction::constant(0.5), TimeFunction::oscillation(1.0, 0.5)}) {
    const auto h = GeneratorSpec::time_dependent(A, {PolyTerm{HomPolyMap::monomial(2, m, 0), a}});
    const auto set = solve_coefficients(h, F0);
    const auto& F2 = set.degree(2);
    worst = std::max(worst, residual_check(F2, grid).max_relative);
    for (double t : grid) {
      const cplx integral = a.is_constant() ? a(0.0) * t : a.scale() * (std::exp(cplx(0.0, t)) - 1.0) / cplx(0.0, 1.0);
      formula = std::max(formula, std::abs(F2(t).coefficient(m, 0) - (c0 + integral)));
    }
  }
  return {worst <= kTol && formula <= kTol,
          fmt("max relative residual = %.2e", worst) + fmt(", resonant formula error = %.2e", formula) +
              fmt(" (tol %.0e)", kTol),
          {}};
}

Outcome spirallike_solver() {
  constexpr double kExact = 1e-12;
  constexpr double kFactor = 4.0;
  const std::vector<double> radii{0.2, 0.1};
  const OperatorA A = analyze(diag({cplx(1.0, 0.3), cplx(1.5, -0.2), cplx(1.2, 0.5)}));
  double exact = 0.0;
  for (const auto& [m, s] : std::vector<std::pair<MultiIndex, int>>{{{0, 2, 0}, 0}, {{0, 1, 2}, 0}, {{0, 0, 3}, 1}}) {
    const auto h = monomial_generator(A, m, s, cplx(0.4, -0.2));
    exact = std::max(exact, spirallike_residual(solve_spirallike(h, 4), h, radii).max_residual);
  }
  Rng rng(108);
  const int K = 4;
  const double target = std::pow(0.5, K);
  double lo = 1e300, hi = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const OperatorA B = random_operator(rng, rng.integer(2, 3), 1.0, 1.5, true);
    RandomGeneratorOptions opt;
    opt.time_dependent = false;
    const auto h = random_generator(rng, B, opt);
    const auto rep = spirallike_residual(solve_spirallike(h, K), h, radii);
    lo = std::min(lo, rep.ratios.at(0));
    hi = std::max(hi, rep.ratios.at(0));
  }
  const bool pass = exact <= kExact && lo >= target / kFactor && hi <= target * kFactor;
  return {pass,
          fmt("monomial residual = %.2e", exact) + fmt(", decay ratios in [%.4f", lo) + fmt(", %.4f]", hi) +
              fmt(" (2^-K = %.4f", target) + ", factor 4)",
          {}};
}

Outcome compactness_witness() {
  const OperatorA A = analyze(diag({2.0, 1.0}));
  const std::vector<double> radii{0.4, 0.2, 0.1};
  const std::vector<double> ts{0.25, 0.5, 1.0, 2.0};
  bool pass = true;
  double min_excess = 1e300, worst_res = 0.0;
  int outside = 0;
  for (double M : {1.0, 10.0, 100.0}) {
    const auto w = noncompactness_witness(A, M);
    const auto h = witness_generator(A, w);
    min_excess = std::min(min_excess, w.certificate.norm_Fk0 / M);
    worst_res = std::max(worst_res, spirallike_residual(w.f, h, radii).max_residual);
    const auto mem = spirallike_membership(w.f, A, ts, 50, 7);
    outside += mem.outside;
    pass = pass && w.certificate.norm_Fk0 >= M && mem.pass;
  }
  bool not_resonant = false;
  try {
    noncompactness_witness(analyze(CMatrix::Identity(2, 2)), 10.0);
  } catch (const NotResonant&) {
    not_resonant = true;
  }
  pass = pass && worst_res <= 1e-12 && not_resonant;
  return {pass,
          fmt("min |F2|/M = %.3f", min_excess) + fmt(", residual = %.2e", worst_res) +
              fmt(", membership outside = %.0f", outside) + (not_resonant ? ", A = I: NotResonant" : ", A = I: no error"),
          {}};
}

Outcome growth_exponent() {
  constexpr double kLow = 3.7, kHigh = 4.1;
  const OneVarMap koebe = OneVarMap::koebe();
  const double alpha = 1.5, beta = 0.5;
  const auto rs = roper_suffridge_generator(koebe, alpha, beta, 2.0);
  const std::vector<double> radii{0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
  const PointMap phi = [&](const CVector& z) { return roper_suffridge_map(koebe, alpha, beta, z); };
  const auto rep = check_growth_bound(phi, rs.h.A(), radii, 0.0, 2000, 11);
  Outcome o;
  o.pass = rs.h.A().normal() && rep.exponent >= kLow && rep.exponent <= kHigh;
  o.detail = fmt("exponent = %.3f", rep.exponent) + fmt(" in [%.1f", kLow) + fmt(", %.1f]", kHigh) +
             fmt(", 2k+/m = %.1f", 2.0 * rs.h.A().k_plus() / rs.h.A().m());
  o.notes.push_back(fmt("uncorrected log-log slope = %.3f", rep.loglog_slope));
  return o;
}

Outcome exp_sharpness() {
  constexpr double kTol = 1e-9;
  Rng rng(109);
  std::vector<double> ts;
  for (int i = 0; i <= 20; ++i) ts.push_back(0.5 * i);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.integer(2, 4);
    CMatrix G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = rng.complex_normal();
    const CMatrix U = G.householderQr().householderQ();
    CVector d(n);
    for (int i = 0; i < n; ++i) d(i) = cplx(rng.uniform(0.2, 2.0), rng.uniform(-3.0, 3.0));
    const auto rep = exp_norm_certificates(analyze(U * d.asDiagonal() * U.adjoint()), ts);
    for (const auto& s : rep.samples) worst = std::max(worst, std::abs(s.ratio - 1.0));
  }
  return {worst <= kTol, fmt("max | |e^{tA}| e^{-t k+} - 1 | = %.2e", worst) + fmt(" (tol %.0e)", kTol), {}};
}

Outcome taylor_recovery() {
  constexpr double kTol = 1e-6;
  double worst = 0.0, datum = 0.0, linear = 0.0;
  Rng rng(110);
  struct Case {
    GeneratorSpec h;
    std::vector<HomPolyMap> F0;
  };
  std::vector<Case> cases;
  cases.push_back({example_generator(2.5, TimeFunction::exp_decay(1.0)),
                   {HomPolyMap::monomial(2, {0, 2}, 0, cplx(0.3, -0.4))}});
  {
    const OperatorA A = analyze(diag({cplx(3.3, 0.4), cplx(1.0, -0.2)}));
    RandomGeneratorOptions opt;
    opt.fraction = 0.5;
    auto h = random_generator(rng, A, opt);
    std::vector<HomPolyMap> F0;
    for (int k = 2; k <= A.n0(); ++k) {
      HomPolyMap Q(2, k);
      for (Eigen::Index i = 0; i < Q.coeffs().size(); ++i) Q.coeffs()(i) = 0.2 * rng.complex_normal();
      Q.coeffs() = Bk_split(A, k).P_le * Q.coeffs();
      F0.push_back(Q);
    }
    cases.push_back({h, F0});
  }
  for (const auto& c : cases) {
    const auto set = solve_coefficients(c.h, c.F0);
    const int n0 = c.h.A().n0();
    const auto taylor = taylor_extract(chain_map(c.h, set, 0.0, 1e-8), c.h.n(), n0);
    linear = std::max(linear, (taylor[0].coeffs() - HomPolyMap::linear(CMatrix::Identity(2, 2)).coeffs()).norm());
    for (int k = 2; k <= n0; ++k) {
      const HomPolyMap Fk0 = set.degree(k)(0.0);
      worst = std::max(worst, (taylor[k - 1].coeffs() - Fk0.coeffs()).cwiseAbs().maxCoeff());
      const CVector le = set.degree(k).split().P_le * taylor[k - 1].coeffs();
      datum = std::max(datum, (le - c.F0[k - 2].coeffs()).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= kTol && datum <= kTol && linear <= kTol,
          fmt("max |taylor_k - F_k(0)| = %.2e", worst) + fmt(", max |P<= taylor_k - F0_le| = %.2e", datum) +
              fmt(", degree 1 error = %.2e", linear) + fmt(" (tol %.0e)", kTol),
          {}};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);

  const std::vector<Criterion> criteria{
      {1, "B_k eigenvalue formula", 10, bk_spectrum},
      {2, "exponential identities", 30, exp_identity_check},
      {3, "closed-form flow oracle", 30, closed_form_oracle},
      {4, "transition inequality and Schwarz property", 300, transition_inequality},
      {5, "chain construction for the example", 60, chain_example},
      {6, "subordination", 120, subordination},
      {7, "coefficient ODE residuals", 60, coefficient_residuals},
      {8, "spirallike solver", 60, spirallike_solver},
      {9, "compactness dichotomy witness", 30, compactness_witness},
      {10, "growth exponent of the Koebe extension", 60, growth_exponent},
      {11, "normal-A exponential sharpness", 5, exp_sharpness},
      {12, "Taylor coefficient recovery", 60, taylor_recovery},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what(), {}};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("[%s] %2d %-45s %s; %.1f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s);
    for (const auto& n : o.notes) std::printf("       %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d failed\n", failed);
  return failed ? 1 : 0;
}
