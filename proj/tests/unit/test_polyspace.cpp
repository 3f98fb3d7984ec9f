#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include <loewner/linalg_spectral.hpp>
#include <loewner/polyspace.hpp>

#include "../support/oracles.hpp"

using namespace loewner;

namespace {

HomPolyMap random_poly(prop::Gen& g, int n, int k) {
  HomPolyMap Q(n, k);
  for (Eigen::Index i = 0; i < Q.coeffs().size(); ++i) Q.coeffs()(i) = g.complex();
  return Q;
}

oracle::Poly to_oracle(const HomPolyMap& Q) {
  oracle::Poly P;
  const auto& B = Q.basis();
  for (int r = 0; r < B.monomials(); ++r)
    for (int s = 0; s < Q.n(); ++s) P[{B.multi_index(r), s}] = Q.coeffs()(B.index(r, s));
  return P;
}

}  // namespace

TEST_CASE("multi-index enumeration", "[poly]") {
  const auto idx = multi_indices(2, 3);
  REQUIRE(idx.size() == 4);
  CHECK(idx[0] == MultiIndex{3, 0});
  CHECK(idx[1] == MultiIndex{2, 1});
  CHECK(idx[3] == MultiIndex{0, 3});
  CHECK(monomial_count(3, 4) == 15);
  CHECK(monomial_count(4, 6) == 84);
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= 5; ++k) {
      const auto all = multi_indices(n, k);
      CHECK(static_cast<int>(all.size()) == monomial_count(n, k));
      CHECK(std::all_of(all.begin(), all.end(), [k](const MultiIndex& m) { return degree(m) == k; }));
      MonomialBasis B(n, k);
      for (int r = 0; r < B.monomials(); ++r) CHECK(B.rank(B.multi_index(r)) == r);
    }
}

TEST_CASE("basis index puts the output component fastest", "[poly]") {
  MonomialBasis B(3, 2);
  CHECK(B.dim() == 18);
  CHECK(B.index(MultiIndex{2, 0, 0}, 0) == 0);
  CHECK(B.index(MultiIndex{2, 0, 0}, 2) == 2);
  CHECK(B.index(MultiIndex{1, 1, 0}, 0) == 3);
  CHECK(B.rank(MultiIndex{1, 1}) == -1);
}

TEST_CASE("evaluation matches the monomial sum", "[poly][property]") {
  prop::for_all(21, 40, [](prop::Gen& g, int c) {
    const int n = g.integer(1, 4), k = g.integer(1, 5);
    const HomPolyMap Q = random_poly(g, n, k);
    const CVector z = g.ball(n, 0.9);
    INFO("case " << c);
    const CVector ref = oracle::evaluate(to_oracle(Q), z);
    CHECK((Q.evaluate(z) - ref).norm() <= 1e-13 * (1.0 + ref.norm()));
  });
}

TEST_CASE("homogeneity Q(cz) = c^k Q(z)", "[poly][property]") {
  prop::for_all(22, 30, [](prop::Gen& g, int) {
    const int n = g.integer(1, 4), k = g.integer(1, 6);
    const HomPolyMap Q = random_poly(g, n, k);
    const CVector z = g.ball(n, 0.9);
    const cplx s = g.complex();
    const CVector lhs = Q.evaluate(s * z);
    const CVector rhs = std::pow(s, k) * Q.evaluate(z);
    CHECK((lhs - rhs).norm() <= 1e-13 * (1.0 + rhs.norm()));
  });
}

TEST_CASE("Jacobian matches complex finite differences", "[poly][property]") {
  prop::for_all(23, 30, [](prop::Gen& g, int) {
    const int n = g.integer(1, 4), k = g.integer(2, 5);
    const HomPolyMap Q = random_poly(g, n, k);
    const CVector z = g.ball(n, 0.8), w = g.ball(n, 1.0);
    const double h = 1e-6;
    const CVector fd = (Q.evaluate(z + h * w) - Q.evaluate(z - h * w)) / (2.0 * h);
    CHECK((Q.jacobian_apply(z, w) - fd).norm() <= 1e-7 * (1.0 + fd.norm()));
    CHECK((Q.jacobian(z) * w - Q.jacobian_apply(z, w)).norm() <= 1e-12 * (1.0 + fd.norm()));
  });
}

TEST_CASE("derivative_apply, compose_linear and left_multiply evaluate correctly", "[poly][property]") {
  prop::for_all(24, 30, [](prop::Gen& g, int) {
    const int n = g.integer(1, 3);
    const HomPolyMap F = random_poly(g, n, g.integer(2, 4));
    const HomPolyMap W = random_poly(g, n, g.integer(1, 3));
    const CMatrix M = g.matrix(n);
    const CVector z = g.ball(n, 0.9);
    const HomPolyMap DW = derivative_apply(F, W);
    CHECK(DW.k() == F.k() + W.k() - 1);
    const CVector ref = F.jacobian(z) * W.evaluate(z);
    CHECK((DW.evaluate(z) - ref).norm() <= 1e-12 * (1.0 + ref.norm()));
    const CVector c1 = F.evaluate(M * z);
    CHECK((compose_linear(F, M).evaluate(z) - c1).norm() <= 1e-12 * (1.0 + c1.norm()));
    const CVector l1 = M * F.evaluate(z);
    CHECK((left_multiply(M, F).evaluate(z) - l1).norm() <= 1e-12 * (1.0 + l1.norm()));
  });
}

TEST_CASE("arithmetic and norm", "[poly]") {
  HomPolyMap a = HomPolyMap::monomial(2, {1, 1}, 0, cplx(3.0, 4.0));
  const HomPolyMap b = HomPolyMap::monomial(2, {0, 2}, 1, -2.0);
  CHECK(poly_norm(a) == Catch::Approx(5.0));
  CHECK(poly_norm(a + b) == Catch::Approx(7.0));
  CHECK((a - a).is_zero());
  CHECK((cplx(2.0) * b).coefficient({0, 2}, 1) == cplx(-4.0));
  CHECK(HomPolyMap::linear(CMatrix::Identity(2, 2)).coefficient({1, 0}, 0) == cplx(1.0));
}

TEST_CASE("B_k matrix acts as Q -> DQ Az - AQ", "[poly][property]") {
  prop::for_all(25, 30, [](prop::Gen& g, int c) {
    const int n = g.integer(2, 3), k = g.integer(2, 4);
    const CMatrix A = g.accretive(n, 0.3, 2.0, 0.5);
    const HomPolyMap Q = random_poly(g, n, k);
    const HomPolyMap BQ(n, k, build_Bk(A, k) * Q.coeffs());
    const oracle::Poly ref = oracle::lie_bracket_with_linear(to_oracle(Q), A);
    INFO("case " << c);
    for (int p = 0; p < 3; ++p) {
      const CVector z = g.ball(n, 0.9);
      const CVector r = oracle::evaluate(ref, z);
      CHECK((BQ.evaluate(z) - r).norm() <= 1e-12 * (1.0 + r.norm()));
    }
  });
}

TEST_CASE("B_k eigenvalues follow the multi-index formula", "[poly]") {
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = 2.0;
  A(1, 1) = 1.0;
  const CVector mu = Bk_eigenvalue_formula(A.diagonal(), 2);
  const MonomialBasis B(2, 2);
  // z_2^2 e_1 resonates: 2 * 1 - 2 = 0
  CHECK(std::abs(mu(B.index(MultiIndex{0, 2}, 0))) == 0.0);
  CHECK(mu(B.index(MultiIndex{2, 0}, 1)) == cplx(3.0));
  CHECK(mu(B.index(MultiIndex{1, 1}, 0)) == cplx(1.0));
}

TEST_CASE("analytic eigenbasis of B_k diagonalizes the matrix", "[poly][property]") {
  prop::for_all(26, 15, [](prop::Gen& g, int c) {
    const int n = g.integer(2, 3), k = g.integer(2, 4);
    const OperatorA A = analyze(g.accretive(n, 0.5, 2.0, 0.4));
    const CMatrix B = build_Bk(A, k);
    const Eigendecomposition e = Bk_eigenbasis(A, k);
    INFO("case " << c);
    const CMatrix R = B * e.vectors - e.vectors * e.values.asDiagonal();
    CHECK(R.norm() <= 1e-10 * (1.0 + B.norm()) * e.vectors.norm());
    CHECK((e.inverse * e.vectors - CMatrix::Identity(B.rows(), B.cols())).norm() < 1e-9);
  });
}

TEST_CASE("torus quadrature recovers polynomial coefficients", "[poly][property]") {
  prop::for_all(27, 10, [](prop::Gen& g, int) {
    const int n = g.integer(1, 3);
    std::vector<HomPolyMap> parts;
    for (int d = 1; d <= 4; ++d) parts.push_back(random_poly(g, n, d));
    const auto f = [&](const CVector& z) { return evaluate_sum(parts, z); };
    const auto rec = taylor_extract(std::function<CVector(const CVector&)>(f), n, 4);
    REQUIRE(rec.size() == 4);
    for (int d = 0; d < 4; ++d)
      CHECK((rec[d].coeffs() - parts[d].coeffs()).norm() <= 1e-11 * (1.0 + parts[d].coeffs().norm()));
  });
}

TEST_CASE("torus quadrature of a non-polynomial map", "[poly]") {
  // f(z) = z / (1 - z_1) e_1 + z_2 e_2 : degree d has z_1^d e_1
  const auto f = [](const CVector& z) {
    CVector w(2);
    w << z(0) / (1.0 - z(0)), z(1);
    return w;
  };
  const auto rec = taylor_extract(std::function<CVector(const CVector&)>(f), 2, 5);
  for (int d = 2; d <= 5; ++d) {
    CHECK(std::abs(rec[d - 1].coefficient(MultiIndex{d, 0}, 0) - 1.0) < 1e-10);
    CHECK(poly_norm(rec[d - 1]) == Catch::Approx(1.0).margin(1e-10));
  }
}
