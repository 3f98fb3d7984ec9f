#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <loewner/chains.hpp>
#include <loewner/errors.hpp>
#include <loewner/generators.hpp>
#include <loewner/transition.hpp>

#include "../support/oracles.hpp"

using namespace loewner;

namespace {

const MultiIndex kZ2Sq{0, 2};

// g(z, s) for h = (2.5 z_1 + e^{-t} z_2^2, z_2) with F_2^<=(0) = c0 z_2^2 e_1,
// from the closed forms of v and F_2.
CVector decay_chain(cplx c0, const CVector& z, double s) {
  CVector g(2);
  g(0) = std::exp(2.5 * s) * z(0) + ((c0 + 2.0) * std::exp(2.0 * s) - 2.0 * std::exp(1.5 * s)) * z(1) * z(1);
  g(1) = std::exp(s) * z(1);
  return g;
}

CoefficientSet decay_coefficients(cplx c0) {
  const auto h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  const std::vector<HomPolyMap> F0{HomPolyMap::monomial(2, kZ2Sq, 0, c0)};
  return solve_coefficients(h, F0);
}

}  // namespace

TEST_CASE("chain limit of the example matches its closed form", "[chains]") {
  const auto h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  const double tol = 1e-9;
  for (cplx c0 : {cplx(0.0), cplx(-2.0), cplx(0.5, 0.5)}) {
    const auto coeffs = decay_coefficients(c0);
    prop::for_all(61, 4, [&](prop::Gen& g, int c) {
      const CVector z = g.ball(2, 0.9);
      const double s = g.uniform(0.0, 1.0);
      const ChainPoint p = chain_limit(h, coeffs, z, s, tol);
      INFO("c0 " << c0 << " case " << c);
      CHECK(p.converged);
      CHECK((p.g - decay_chain(c0, z, s)).norm() < 1e-7);
    });
  }
}

TEST_CASE("prescribed datum -2 z_2^2 e_1 gives (z_1 - 2 z_2^2, z_2) at s = 0", "[chains]") {
  const auto h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  const auto coeffs = decay_coefficients(-2.0);
  CVector z(2);
  z << 0.3, 0.4;
  const ChainPoint p = chain_limit(h, coeffs, z, 0.0, 1e-10);
  CHECK(std::abs(p.g(0) - (-0.02)) < 1e-8);
  CHECK(std::abs(p.g(1) - 0.4) < 1e-8);
  CHECK(p.fitted_decay > 0.0);
}

TEST_CASE("zero datum gives the identity at s = 0", "[chains]") {
  const auto h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  const auto coeffs = decay_coefficients(0.0);
  CVector z(2);
  z << cplx(0.1, 0.5), cplx(-0.6, 0.2);
  CHECK((chain_limit(h, coeffs, z, 0.0, 1e-10).g - z).norm() < 1e-8);
}

TEST_CASE("linear generator: g(z, s) = e^{sA} z", "[chains]") {
  CMatrix D = CMatrix::Zero(2, 2);
  D(0, 0) = cplx(1.5, 1.0);
  D(1, 1) = 1.0;
  const auto h = GeneratorSpec::linear(analyze(D));
  const auto coeffs = solve_coefficients(h);
  CVector z(2);
  z << 0.2, cplx(0.0, 0.7);
  const ChainPoint p = chain_limit(h, coeffs, z, 0.7, 1e-10);
  CHECK((p.g - matrix_exp(D, 0.7) * z).norm() < 1e-8);
}

TEST_CASE("subordination on random generators", "[chains][property]") {
  prop::for_all(62, 3, [](prop::Gen& g, int c) {
    Rng rng(1500 + c);
    CMatrix D = CMatrix::Zero(2, 2);
    D(0, 0) = cplx(2.5, g.uniform(-1, 1));
    D(1, 1) = cplx(1.0, g.uniform(-1, 1));
    RandomGeneratorOptions opt;
    opt.fraction = 0.5;
    const auto h = random_generator(rng, analyze(D), opt);
    const auto coeffs = solve_coefficients(h);
    const double s = g.uniform(0, 1), t = s + g.uniform(0, 2);
    const auto rep = check_subordination(h, coeffs, g.ball(2, 0.8), s, t, 1e-8);
    INFO("case " << c);
    CHECK(rep.difference <= 1e-5);
    CHECK(rep.pass);
  });
}

TEST_CASE("batch evaluation keeps input order", "[chains]") {
  const auto h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  const auto coeffs = decay_coefficients(-2.0);
  std::vector<CVector> pts;
  prop::Gen g(63);
  for (int i = 0; i < 5; ++i) pts.push_back(g.ball(2, 0.9));
  const auto ev = chain_limit_batch(h, coeffs, pts, 0.0, 1e-9);
  CHECK(ev.all_converged());
  CHECK(ev.theoretical_decay == Catch::Approx(0.5));
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK((ev.values()[i] - decay_chain(-2.0, pts[i], 0.0)).norm() < 1e-7);
}

TEST_CASE("chain preconditions", "[chains]") {
  const auto h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  const auto coeffs = decay_coefficients(0.0);
  CVector far(2);
  far << 0.7, 0.7;
  CHECK_THROWS_AS(chain_limit(h, coeffs, far, 0.0, 1e-9), PreconditionViolated);
  CHECK_THROWS_AS(chain_limit(h, CoefficientSet{}, CVector::Zero(2), 0.0, 1e-9), MissingLowerOrder);
  ChainOptions opt;
  opt.t_max = 1.0;
  CVector z(2);
  z << 0.5, 0.5;
  CHECK_THROWS_AS(chain_limit(h, coeffs, z, 0.0, 1e-12, opt), NoConvergence);
  opt.throw_on_failure = false;
  CHECK_FALSE(chain_limit(h, coeffs, z, 0.0, 1e-12, opt).converged);
}

TEST_CASE("growth fit on synthetic power laws", "[chains][property]") {
  const OperatorA A = analyze(CMatrix::Identity(2, 2));
  prop::for_all(64, 10, [&](prop::Gen& g, int) {
    const double p = g.uniform(0.5, 4.0), c = g.uniform(0.1, 3.0), b = g.uniform(-1.0, 1.0);
    std::vector<GrowthSample> samples;
    for (double r = 0.5; r < 0.951; r += 0.05)
      samples.push_back({r, c * std::pow(1.0 - r, -p) * std::exp(b * (1.0 - r)), CVector()});
    const auto rep = check_growth_bound(samples, A, 0.1);
    CHECK(rep.exponent == Catch::Approx(p).margin(1e-9));
    CHECK(rep.bound == Catch::Approx(2.1));
    CHECK(rep.pass == (p <= 2.2));
  });
}

TEST_CASE("sphere supremum of a linear functional", "[chains]") {
  const PointMap F = [](const CVector& z) {
    CVector w(1);
    w(0) = 3.0 * z(0) + 4.0 * z(1);
    return w;
  };
  const GrowthSample s = sphere_sup(F, 2, 0.5, 500);
  CHECK(s.sup == Catch::Approx(2.5).epsilon(1e-4));
  CHECK(s.sup <= 2.5 + 1e-12);
}

TEST_CASE("univalence spot check separates injective from folding maps", "[chains]") {
  std::vector<CVector> pts;
  prop::Gen g(65);
  for (int i = 0; i < 30; ++i) pts.push_back(g.ball(2, 0.8));
  const PointMap id = [](const CVector& z) { return z; };
  const auto ok = univalence_spot_check(pts, pts, id, 10);
  CHECK(ok.pass);
  const PointMap fold = [](const CVector& z) {
    CVector w(2);
    w << z(0) * z(0), z(1);
    return w;
  };
  std::vector<CVector> with_pair = pts;
  CVector a(2), b(2);
  a << 0.3, 0.1;
  b << -0.3, 0.1;
  with_pair.push_back(a);
  with_pair.push_back(b);
  std::vector<CVector> vals;
  for (const auto& z : with_pair) vals.push_back(fold(z));
  CHECK_FALSE(univalence_spot_check(with_pair, vals, fold, 10).pass);
}

TEST_CASE("necessary-condition integrals converge to the closed form", "[chains]") {
  CMatrix D = CMatrix::Zero(2, 2);
  D(0, 0) = cplx(2.0, 2.0);
  D(1, 1) = 1.0;
  const OperatorA A = analyze(D);
  const auto h = GeneratorSpec::time_dependent(
      A, {PolyTerm{HomPolyMap::monomial(2, kZ2Sq, 0), TimeFunction::exp_decay(1.0)}});
  std::vector<double> T;
  for (int i = 1; i <= 40; ++i) T.push_back(i);
  const auto rep = asymptotic_necessary_condition(h, HomPolyMap(2, 2), 1, 1, 0, T);
  CHECK(std::abs(rep.mu - cplx(0.0, -2.0)) < 1e-15);
  // int_0^inf e^{2is} e^{-s} ds
  CHECK(std::abs(rep.partial.back() - 1.0 / cplx(1.0, -2.0)) < 1e-10);
  CHECK(rep.cauchy);
  CHECK_FALSE(rep.vanishes);

  // the f2 term does not decay and breaks convergence
  const auto osc = asymptotic_necessary_condition(h, HomPolyMap::monomial(2, kZ2Sq, 0, 1.0), 1, 1, 0, T);
  CHECK_FALSE(osc.cauchy);

  CHECK_THROWS_AS(asymptotic_necessary_condition(h, HomPolyMap(2, 2), 0, 0, 1, T), PreconditionViolated);
}
