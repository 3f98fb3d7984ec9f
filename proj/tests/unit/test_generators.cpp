#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <loewner/errors.hpp>
#include <loewner/generators.hpp>
#include <loewner/onevar.hpp>
#include <loewner/oracles.hpp>

#include "../support/oracles.hpp"

using namespace loewner;

namespace {

OperatorA diag2(cplx a, cplx b) {
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = a;
  A(1, 1) = b;
  return analyze(A);
}

const std::vector<double> kRadii{0.25, 0.5, 0.75, 0.9, 0.99};
const std::vector<double> kTimes{0.0, 0.5, 1.0, 2.0, 3.0, 5.0};

}  // namespace

TEST_CASE("time function kinds", "[time]") {
  const auto w = TimeFunction::window(3.0, 2.0);
  CHECK(w(1.0) == cplx(2.0));
  CHECK(w(3.5) == cplx(0.0));
  CHECK(w.breakpoints() == std::vector<double>{3.0});
  CHECK(w.sup_abs() == 2.0);

  const auto e = TimeFunction::exp_decay(0.5, cplx(0.0, 1.0));
  CHECK(std::abs(e(2.0) - cplx(0.0, std::exp(-1.0))) < 1e-15);
  CHECK(e.rate() == 0.5);

  const auto o = TimeFunction::oscillation(2.0);
  CHECK(std::abs(o(0.25 * M_PI) - cplx(0.0, 1.0)) < 1e-15);
  CHECK(o.sup_abs() == Catch::Approx(1.0));

  const auto tab = TimeFunction::table({0.0, 1.0, 2.0}, {0.0, 2.0, 1.0});
  CHECK(tab(0.5) == cplx(1.0));
  CHECK(tab(1.5) == cplx(1.5));
  CHECK(tab(9.0) == cplx(1.0));
  CHECK(tab.sup_abs() == 2.0);

  CHECK(TimeFunction::constant(3.0).scaled(cplx(0.0, 1.0))(7.0) == cplx(0.0, 3.0));
}

TEST_CASE("weighted integrals agree with Simpson", "[time][property]") {
  prop::for_all(31, 20, [](prop::Gen& g, int c) {
    const cplx mu(g.uniform(-1.5, 1.5), g.uniform(-2, 2));
    const double s = g.uniform(0.0, 2.0), t = s + g.uniform(0.1, 4.0);
    const TimeFunction fns[] = {TimeFunction::constant(g.complex()), TimeFunction::exp_decay(g.uniform(0, 2)),
                                TimeFunction::oscillation(g.uniform(-3, 3)),
                                TimeFunction::table({0.0, 1.0, 3.0}, {1.0, -1.0, 0.5})};
    INFO("case " << c);
    for (const auto& a : fns) {
      const cplx ref = oracle::simpson([&](double u) { return a(u) * std::exp(mu * u); }, s, t, 60000);
      CHECK(std::abs(exp_weighted_integral(a, mu, s, t) - ref) <= 1e-9 * (1.0 + std::abs(ref)));
    }
    const auto win = TimeFunction::window(3.0);
    const double e = std::min(t, 3.0);
    const cplx ref = e > s ? (std::exp(mu * e) - std::exp(mu * s)) / mu : cplx(0.0);
    CHECK(std::abs(exp_weighted_integral(win, mu, s, t) - ref) <= 1e-12 * (1.0 + std::abs(ref)));
  });
}

TEST_CASE("generator forms evaluate as written", "[generators]") {
  const OperatorA A = diag2(2.5, 1.0);
  const auto h = example_generator(2.5, TimeFunction::exp_decay(1.0));
  CHECK(h.form() == GeneratorSpec::Form::PolynomialTimeDependent);
  CHECK_FALSE(h.autonomous());
  CHECK(h.max_degree() == 2);
  CVector z(2);
  z << cplx(0.3, 0.1), cplx(-0.2, 0.4);
  const CVector v = h.evaluate(z, 1.0);
  CHECK(std::abs(v(0) - (2.5 * z(0) + std::exp(-1.0) * z(1) * z(1))) < 1e-15);
  CHECK(std::abs(v(1) - z(1)) < 1e-15);
  CHECK(h.remainder(z, 1.0, 2).norm() < 1e-15);
  CHECK(h.remainder(z, 1.0, 1).norm() > 0.0);
  CHECK(h.H(2, 0.0).coefficient({0, 2}, 0) == cplx(1.0));
  CHECK(h.H(3, 0.0).is_zero());

  const auto lin = GeneratorSpec::linear(A);
  CHECK(lin.autonomous());
  CHECK(lin.max_degree() == 1);
  CHECK((lin.evaluate(z, 0.0) - A.entries() * z).norm() < 1e-15);
}

TEST_CASE("validation accepts small perturbations and rejects large ones", "[generators]") {
  const OperatorA A = diag2(1.0, 1.0);
  const auto good = GeneratorSpec::polynomial(A, {HomPolyMap::monomial(2, {0, 2}, 0, 0.9)});
  const auto rep = validate(good, kRadii, 200, kTimes);
  CHECK(rep.valid());
  CHECK(rep.min_normalized >= 0.0);
  CHECK(rep.origin_error == 0.0);
  CHECK(rep.jacobian_error < 1e-6);

  const auto bad = GeneratorSpec::polynomial(A, {HomPolyMap::monomial(2, {0, 2}, 0, 5.0)});
  CHECK_THROWS_AS(validate(bad, kRadii, 200, kTimes), GeneratorInvalid);
  const auto soft = validate(bad, kRadii, 200, kTimes, 0, false);
  CHECK(soft.violation);
  REQUIRE(soft.witness.size() == 2);
  CHECK(std::real(bad.evaluate(soft.witness, soft.witness_t).dot(soft.witness)) < 0.0);
}

TEST_CASE("random generators are valid", "[generators][property]") {
  prop::for_all(32, 12, [](prop::Gen& g, int c) {
    Rng rng(1000 + c);
    const int n = g.integer(2, 3);
    const OperatorA A = random_operator(rng, n, 0.5, 2.0, g.uniform() < 0.5);
    RandomGeneratorOptions opt;
    opt.time_dependent = g.uniform() < 0.5;
    const auto h = random_generator(rng, A, opt);
    INFO("case " << c);
    CHECK(validate(h, kRadii, 100, kTimes, c).valid());
  });
}

TEST_CASE("monomial generator is the conjugate of A by z + a z^m e_s", "[generators][property]") {
  prop::for_all(33, 20, [](prop::Gen& g, int c) {
    const int n = 3;
    const cplx lam[3] = {cplx(g.uniform(0.5, 2), g.uniform(-1, 1)), cplx(g.uniform(0.5, 2), g.uniform(-1, 1)),
                         cplx(g.uniform(0.5, 2), g.uniform(-1, 1))};
    CMatrix D = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) D(i, i) = lam[i];
    const OperatorA A = analyze(D);
    const int s = g.integer(0, 1);
    MultiIndex m(n, 0);
    for (int e = 0; e < g.integer(2, 3); ++e) ++m[g.integer(s + 1, n - 1)];
    const cplx a = g.complex(0.5);
    const auto h = monomial_generator(A, m, s, a);
    const CVector z = g.ball(n, 0.7);
    // h = Df^{-1} A f
    CVector f = z;
    f(s) += a * oracle::monomial(m, z);
    CMatrix Df = CMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i)
      if (m[i] > 0) {
        std::vector<int> mi = m;
        --mi[i];
        Df(s, i) += a * static_cast<double>(m[i]) * oracle::monomial(mi, z);
      }
    const CVector ref = Df.lu().solve(D * f);
    INFO("case " << c);
    CHECK((h.evaluate(z, 0.0) - ref).norm() <= 1e-13 * (1.0 + ref.norm()));
  });
}

TEST_CASE("monomial generator rejects exponents at or before s", "[generators]") {
  const OperatorA A = diag2(1.0, 2.0);
  CHECK_THROWS_AS(monomial_generator(A, {1, 1}, 0, 1.0), ParameterOutOfRange);
  CHECK_THROWS_AS(monomial_generator(A, {0, 2}, 1, 1.0), ParameterOutOfRange);
  CHECK_NOTHROW(monomial_generator(A, {0, 2}, 0, 1.0));
}

TEST_CASE("Koebe function and its logarithms", "[onevar]") {
  const OneVarMap k = OneVarMap::koebe();
  const cplx z(0.3, -0.4);
  CHECK(std::abs(k.f(z) - z / ((1.0 - z) * (1.0 - z))) < 1e-15);
  CHECK(std::abs(k.df(z) - (1.0 + z) / std::pow(1.0 - z, 3)) < 1e-14);
  CHECK(std::abs(k.p(z) - (1.0 - z) / (1.0 + z)) < 1e-14);
  CHECK(std::abs(std::exp(k.log_f_over_z(z)) - k.f(z) / z) < 1e-14);
  CHECK(std::abs(std::exp(k.log_df(z)) - k.df(z)) < 1e-14);
  CHECK(std::abs(k.log_f_over_z(0.0)) == 0.0);
  const double h = 1e-6;
  const cplx fd = (k.log_df(z + h) - k.log_df(z - h)) / (2.0 * h);
  CHECK(std::abs(k.dlog_df(z) - fd) < 1e-8);
}

TEST_CASE("custom one-variable maps continue the logarithm numerically", "[onevar]") {
  const OneVarMap e = OneVarMap::custom(
      "expm1", [](cplx z) { return std::exp(z) - 1.0; }, [](cplx z) { return std::exp(z); },
      [](cplx z) { return std::exp(z); });
  const cplx z(0.5, 0.6);
  CHECK(std::abs(e.log_df(z) - z) < 1e-10);
  CHECK(std::abs(std::exp(e.log_f_over_z(z)) - (std::exp(z) - 1.0) / z) < 1e-10);
}

TEST_CASE("quadratic admissibility has the exact minimum", "[generators]") {
  const auto ok = roper_suffridge_admissibility(0.0, 0.5, 2.0);
  CHECK(ok.hypotheses_hold);
  CHECK(ok.admissible);
  CHECK(ok.q_min == Catch::Approx(1.0 / 3.0));
  CHECK(ok.argmin == Catch::Approx(1.0 / 3.0));

  const auto bad = roper_suffridge_admissibility(0.0, 0.5, 0.5);
  CHECK(bad.hypotheses_hold);
  CHECK_FALSE(bad.admissible);
  CHECK(bad.q_min == Catch::Approx(-0.5));
  CHECK(bad.argmin == Catch::Approx(1.0));

  CHECK_FALSE(roper_suffridge_admissibility(0.0, 0.75, 2.0).hypotheses_hold);
}

TEST_CASE("extension generator matches its closed form", "[generators][property]") {
  const OneVarMap k = OneVarMap::koebe();
  const auto rs = roper_suffridge_generator(k, 0.2, 0.3, cplx(1.5, 0.5));
  CHECK(rs.admissibility.admissible);
  CHECK(rs.h.form() == GeneratorSpec::Form::Pushforward);
  prop::for_all(34, 20, [&](prop::Gen& g, int) {
    const CVector z = g.ball(2, 0.9);
    const CVector ref = roper_suffridge_field(k, 0.2, 0.3, cplx(1.5, 0.5), z);
    CHECK((rs.h.evaluate(z, 0.0) - ref).norm() <= 1e-10 * (1.0 + ref.norm()));
  });
  const auto H2 = rs.h.H(2, 0.0);
  // z_1 p(z_1) = z_1 - 2 z_1^2 + ... for Koebe
  CHECK(std::abs(H2.coefficient({2, 0}, 0) + 2.0) < 1e-10);
  CHECK(validate(rs.h, kRadii, 200, std::vector<double>{0.0}).valid());
}
