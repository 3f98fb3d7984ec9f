#include "loewner/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include <Eigen/Eigenvalues>

#include "loewner/chains.hpp"
#include "loewner/coefficients.hpp"
#include "loewner/errors.hpp"
#include "loewner/generators.hpp"
#include "loewner/oracles.hpp"
#include "loewner/sampling.hpp"
#include "loewner/spirallike.hpp"
#include "loewner/transition.hpp"

namespace loewner {

ExpIdentityResiduals exp_identities(const OperatorA& A, const HomPolyMap& Q, const CVector& z,
                                    double t) {
  const int n = A.n();
  const int k = Q.k();
  const CMatrix B = build_Bk(A, k);
  const HomPolyMap Qp(n, k, matrix_exp(B, t) * Q.coeffs());
  const HomPolyMap Qm(n, k, matrix_exp(B, -t) * Q.coeffs());
  const CMatrix Ep = A.exp(t), Em = A.exp(-t);
  const CVector Qz = Q.evaluate(z);
  const double scale = 1.0 + Qz.norm();
  ExpIdentityResiduals r;
  r.ab_a = (Ep * Qp.evaluate(Em * z) - Qz).norm() / scale;
  r.a_a = (Ep * Q.evaluate(Em * z) - Qm.evaluate(z)).norm() / scale;
  r.ab = (Ep * Qp.evaluate(z) - Q.evaluate(Ep * z)).norm() / scale;
  return r;
}

double Bk_spectrum_mismatch(const OperatorA& A, int k) {
  const CMatrix B = build_Bk(A, k);
  Eigen::ComplexEigenSolver<CMatrix> es(B, false);
  std::vector<cplx> numeric(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  const CVector formula = Bk_eigenvalue_formula(A.eigenvalues(), k);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < formula.size(); ++i) {
    auto best = std::min_element(numeric.begin(), numeric.end(), [&](cplx a, cplx b) {
      return std::abs(a - formula(i)) < std::abs(b - formula(i));
    });
    worst = std::max(worst, std::abs(*best - formula(i)));
    numeric.erase(best);
  }
  return worst;
}

bool SuiteResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

CheckResult upper(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

CheckResult lower(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value >= threshold};
}

CMatrix diag2(cplx a, cplx b) {
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = a;
  A(1, 1) = b;
  return A;
}

// A = diag(2.5 + i x, 1 + i y): n0 = 2 and every Re of the B_2 spectrum is
// at least 0.5 away from 0.
GeneratorSpec two_scale_generator(Rng& rng, bool time_dependent) {
  const OperatorA A = analyze(diag2(cplx(2.5, rng.uniform(-1, 1)), cplx(1.0, rng.uniform(-1, 1))));
  RandomGeneratorOptions opt;
  opt.max_degree = 3;
  opt.time_dependent = time_dependent;
  opt.fraction = 0.5;
  return random_generator(rng, A, opt);
}

SuiteResult suite_exp(std::uint64_t seed) {
  Rng rng(seed);
  SuiteResult s{"exp", {}};
  double worst = 0.0, spectrum = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = rng.integer(2, 3);
    const int k = rng.integer(2, 3);
    const OperatorA A = random_operator(rng, n, 0.5, 2.0, false);
    HomPolyMap Q(n, k);
    for (Eigen::Index i = 0; i < Q.coeffs().size(); ++i) Q.coeffs()(i) = rng.complex_normal();
    const CVector z = rng.ball(n, 0.9);
    worst = std::max(worst, exp_identities(A, Q, z, rng.uniform(-1.0, 1.0)).max());
    if (trial < 10) spectrum = std::max(spectrum, Bk_spectrum_mismatch(A, k));
  }
  s.checks.push_back(upper("exp_identities", worst, 1e-7));
  s.checks.push_back(upper("Bk_eigenvalue_formula", spectrum, 1e-8));

  double sharp = 0.0;
  const std::vector<double> ts{0.0, 0.5, 1.0, 2.5, 5.0, 10.0};
  for (int trial = 0; trial < 5; ++trial) {
    const int n = rng.integer(2, 4);
    CMatrix G(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G(i, j) = rng.complex_normal();
    const CMatrix U = G.householderQr().householderQ();
    CVector d(n);
    for (int i = 0; i < n; ++i) d(i) = cplx(rng.uniform(0.5, 2.0), rng.uniform(-2.0, 2.0));
    const OperatorA A = analyze(U * d.asDiagonal() * U.adjoint());
    const auto rep = exp_norm_certificates(A, ts);
    for (const auto& smp : rep.samples) sharp = std::max(sharp, std::abs(smp.ratio - 1.0));
  }
  s.checks.push_back(upper("normal_exp_sharpness", sharp, 1e-9));
  return s;
}

SuiteResult suite_transition(std::uint64_t seed) {
  Rng rng(seed + 1);
  SuiteResult s{"transition", {}};
  double worst_ratio = 0.0, worst_excess = 0.0;
  for (int g = 0; g < 8; ++g) {
    const int n = rng.integer(2, 3);
    const OperatorA A = random_operator(rng, n, 0.5, 2.0, rng.uniform() < 0.5);
    const GeneratorSpec h = random_generator(rng, A);
    for (int p = 0; p < 4; ++p) {
      const auto traj = integrate(h, rng.ball(n, 0.9), 0.0, 6.0, 1e-10);
      const auto rep = check_transition_inequality(traj, A);
      worst_ratio = std::max(worst_ratio, rep.max_ratio);
      worst_excess = std::max(worst_excess, rep.max_norm_excess);
    }
  }
  s.checks.push_back(upper("transition_inequality_ratio", worst_ratio, 1.0 + 1e-6));
  s.checks.push_back(upper("schwarz_norm_excess", worst_excess, 1e-9));
  return s;
}

SuiteResult suite_semigroup(std::uint64_t seed) {
  Rng rng(seed + 2);
  SuiteResult s{"semigroup", {}};
  double worst = 0.0;
  const double tol = 1e-10;
  for (int g = 0; g < 8; ++g) {
    const OperatorA A = random_operator(rng, 2, 0.5, 2.0, false);
    const GeneratorSpec h = random_generator(rng, A);
    const double t0 = rng.uniform(0.0, 2.0), u = t0 + rng.uniform(0.0, 2.0), t = u + rng.uniform(0.0, 2.0);
    worst = std::max(worst, check_semigroup(h, rng.ball(2, 0.9), t0, u, t, tol).difference);
  }
  s.checks.push_back(upper("semigroup_difference", worst, 50.0 * tol));
  return s;
}

SuiteResult suite_oracle(std::uint64_t seed) {
  Rng rng(seed + 3);
  SuiteResult s{"oracle", {}};
  const double tol = 1e-9;
  double worst = 0.0;
  std::vector<double> ts;
  for (int i = 0; i <= 20; ++i) ts.push_back(0.5 * i);
  for (double lambda : {2.0, 2.5})
    for (const TimeFunction& a : {TimeFunction::window(3.0), TimeFunction::exp_decay(1.0)}) {
      const GeneratorSpec h = example_generator(lambda, a);
      for (int p = 0; p < 4; ++p) {
        const CVector z = rng.ball(2, 0.95);
        const auto traj = integrate(h, z, 0.0, 10.0, tol, {ts});
        for (std::size_t i = 0; i < ts.size(); ++i) {
          const CVector exact = example_flow(lambda, a, z, 0.0, ts[i]);
          worst = std::max(worst, (traj.values[i] - exact).norm());
        }
      }
    }
  s.checks.push_back(upper("example_flow_error", worst, 10.0 * tol));
  return s;
}

SuiteResult suite_coefficients(std::uint64_t seed) {
  Rng rng(seed + 4);
  SuiteResult s{"coefficients", {}};
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.25 * i);

  {
    const GeneratorSpec h = example_generator(2.5, TimeFunction::exp_decay(1.0));
    const auto set = solve_coefficients(h);
    s.checks.push_back(upper("example_residual", residual_check(set.degree(2), grid).max_relative, 1e-6));
  }
  {
    const OperatorA A = analyze(diag2(2.0, 1.0));
    const GeneratorSpec h = GeneratorSpec::polynomial(A, {HomPolyMap::monomial(2, {0, 2}, 0, 0.5)});
    const auto set = solve_coefficients(h);
    const auto& F2 = set.degree(2);
    s.checks.push_back(upper("resonant_residual", residual_check(F2, grid).max_relative, 1e-6));
    const cplx slope = F2(10.0).coefficient({0, 2}, 0) - F2(9.0).coefficient({0, 2}, 0);
    s.checks.push_back(upper("resonant_linear_growth", std::abs(slope - 0.5), 1e-8));
  }
  {
    const GeneratorSpec h = two_scale_generator(rng, true);
    const auto set = solve_coefficients(h);
    s.checks.push_back(upper("random_residual", residual_check(set.degree(2), grid).max_relative, 1e-6));
  }
  return s;
}

SuiteResult suite_subordination(std::uint64_t seed) {
  Rng rng(seed + 5);
  SuiteResult s{"subordination", {}};
  const double tol = 1e-8;
  double worst = 0.0;
  std::vector<GeneratorSpec> hs{example_generator(2.0, TimeFunction::window(3.0)),
                                two_scale_generator(rng, false)};
  for (const auto& h : hs) {
    const auto set = solve_coefficients(h);
    for (int p = 0; p < 3; ++p) {
      const double s0 = rng.uniform(0.0, 1.0);
      const double t = s0 + rng.uniform(0.0, 2.0);
      worst = std::max(worst, check_subordination(h, set, rng.ball(2, 0.8), s0, t, tol).difference);
    }
  }
  s.checks.push_back(upper("subordination_difference", worst, 100.0 * tol));
  return s;
}

SuiteResult suite_growth(std::uint64_t seed) {
  SuiteResult s{"growth", {}};
  const std::vector<double> radii{0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95};
  const OneVarMap koebe = OneVarMap::koebe();
  const cplx lambda = 2.0;
  const auto rs = roper_suffridge_generator(koebe, 1.5, 0.5, lambda);
  const PointMap phi = [&](const CVector& z) { return roper_suffridge_map(koebe, 1.5, 0.5, z); };
  const auto rep = check_growth_bound(phi, rs.h.A(), radii, 0.0, 1500, seed);
  s.checks.push_back(lower("koebe_extension_exponent_low", rep.exponent, 3.7));
  s.checks.push_back(upper("koebe_extension_exponent_high", rep.exponent, 4.1));

  const OperatorA A = analyze(diag2(2.5, 1.0));
  const PointMap id = [](const CVector& z) { return z; };
  const auto lin = check_growth_bound(id, A, radii, 0.1, 500, seed);
  s.checks.push_back(upper("linear_exponent", lin.exponent, lin.bound + 0.1));
  return s;
}

SuiteResult suite_spirallike(std::uint64_t seed) {
  Rng rng(seed + 6);
  SuiteResult s{"spirallike", {}};
  const std::vector<double> radii{0.2, 0.1};
  {
    const OperatorA A = analyze(diag2(cplx(1.0, 0.3), cplx(1.5, -0.2)));
    const cplx a(0.3, -0.1);
    const GeneratorSpec h = monomial_generator(A, {0, 2}, 0, a);
    const auto f = solve_spirallike(h, 3);
    const auto rep = spirallike_residual(f, h, radii, 100, seed);
    s.checks.push_back(upper("monomial_roundtrip", rep.max_residual, 1e-12));
  }
  {
    const OperatorA A = analyze(diag2(cplx(1.3, rng.uniform(-1, 1)), cplx(1.0, rng.uniform(-1, 1))));
    RandomGeneratorOptions opt;
    opt.time_dependent = false;
    opt.max_degree = 3;
    const GeneratorSpec h = random_generator(rng, A, opt);
    const int K = 4;
    const auto f = solve_spirallike(h, K);
    const auto rep = spirallike_residual(f, h, radii, 100, seed);
    const double ratio = rep.ratios.at(0);
    const double target = std::pow(0.5, K);
    s.checks.push_back(lower("decay_ratio_low", ratio, target / 4.0));
    s.checks.push_back(upper("decay_ratio_high", ratio, target * 4.0));
  }
  {
    const OperatorA A = analyze(diag2(2.0, 1.0));
    const auto w = noncompactness_witness(A, 10.0);
    s.checks.push_back(lower("witness_norm", w.certificate.norm_Fk0, 10.0));
    s.checks.push_back(upper("witness_residual", w.certificate.residual, 1e-12));
    const std::vector<double> ts{0.5, 1.0, 2.0};
    const auto mem = spirallike_membership(w.f, A, ts, 20, seed);
    s.checks.push_back(upper("witness_membership_outside", mem.outside, 0.0));
  }
  return s;
}

using SuiteFn = std::function<SuiteResult(std::uint64_t)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"exp", suite_exp},
      {"transition", suite_transition},
      {"semigroup", suite_semigroup},
      {"oracle", suite_oracle},
      {"coefficients", suite_coefficients},
      {"subordination", suite_subordination},
      {"growth", suite_growth},
      {"spirallike", suite_spirallike},
  };
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

std::vector<SuiteResult> run_suite(const std::string& name, std::uint64_t seed) {
  std::vector<SuiteResult> out;
  for (const auto& [n, fn] : registry())
    if (name == "all" || name == n) out.push_back(fn(seed));
  if (out.empty()) throw PreconditionViolated("unknown suite '" + name + "'");
  return out;
}

}  // namespace loewner
