#pragma once

// Reference computations written without the library's algorithms: plain
// loops, long double series and fixed-step Runge-Kutta.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <loewner/types.hpp>

namespace oracle {

using loewner::CMatrix;
using loewner::CVector;
using loewner::cplx;
using lcplx = std::complex<long double>;

/// Sparse polynomial map: (multi-index, output component) -> coefficient.
using Poly = std::map<std::pair<std::vector<int>, int>, cplx>;

inline cplx monomial(const std::vector<int>& m, const CVector& z) {
  cplx p = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (int e = 0; e < m[i]; ++e) p *= z(static_cast<Eigen::Index>(i));
  return p;
}

inline CVector evaluate(const Poly& P, const CVector& z) {
  CVector out = CVector::Zero(z.size());
  for (const auto& [key, c] : P) out(key.second) += c * monomial(key.first, z);
  return out;
}

/// DQ(z) A z - A Q(z) by the product rule, term by term.
inline Poly lie_bracket_with_linear(const Poly& Q, const CMatrix& A) {
  Poly out;
  const int n = static_cast<int>(A.rows());
  for (const auto& [key, c] : Q) {
    const auto& [m, s] = key;
    for (int i = 0; i < n; ++i) {
      if (m[i] == 0) continue;
      for (int j = 0; j < n; ++j) {
        if (A(i, j) == cplx(0.0)) continue;
        std::vector<int> mm = m;
        --mm[i];
        ++mm[j];
        out[{mm, s}] += c * static_cast<double>(m[i]) * A(i, j);
      }
    }
    for (int r = 0; r < n; ++r)
      if (A(r, s) != cplx(0.0)) out[{m, r}] -= A(r, s) * c;
  }
  return out;
}

/// e^{tL} by scaling and squaring a 30-term Taylor series in long double.
inline CMatrix expm(const CMatrix& L, double t) {
  const int n = static_cast<int>(L.rows());
  using LM = std::vector<std::vector<lcplx>>;
  auto mul = [n](const LM& a, const LM& b) {
    LM c(n, std::vector<lcplx>(n, 0.0L));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
  };
  long double norm = 0.0L;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) norm += std::abs(lcplx(L(i, j))) * std::fabs((long double)t);
  int squarings = 0;
  while (norm > 0.25L) {
    norm /= 2.0L;
    ++squarings;
  }
  const long double scale = (long double)t / std::ldexp(1.0L, squarings);
  LM X(n, std::vector<lcplx>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) X[i][j] = lcplx(L(i, j)) * scale;
  LM E(n, std::vector<lcplx>(n, 0.0L)), term(n, std::vector<lcplx>(n, 0.0L));
  for (int i = 0; i < n; ++i) E[i][i] = term[i][i] = 1.0L;
  for (int p = 1; p <= 30; ++p) {
    term = mul(term, X);
    for (auto& row : term)
      for (auto& x : row) x /= (long double)p;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) E[i][j] += term[i][j];
  }
  for (int q = 0; q < squarings; ++q) E = mul(E, E);
  CMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = cplx((double)E[i][j].real(), (double)E[i][j].imag());
  return out;
}

using Field = std::function<CVector(const CVector&, double)>;

/// Classical RK4 on dv/dt = -h(v, t) with a fixed number of steps per unit
/// time, restarted at each breakpoint of h.
inline CVector rk4_flow(const Field& h, CVector v, double s, double t, std::vector<double> breaks = {},
                        int steps_per_unit = 2000) {
  std::vector<double> knots{s};
  for (double b : breaks)
    if (b > s && b < t) knots.push_back(b);
  knots.push_back(t);
  for (std::size_t piece = 0; piece + 1 < knots.size(); ++piece) {
    const double a = knots[piece], b = knots[piece + 1];
    const int steps = std::max(1, static_cast<int>(std::ceil((b - a) * steps_per_unit)));
    const double dt = (b - a) / steps;
    for (int i = 0; i < steps; ++i) {
      // stage times stay inside [a, b] so one-sided limits are used at the ends
      const double u = a + i * dt;
      const double mid = u + 0.5 * dt, end = std::min(u + dt, b - 1e-15 * (1.0 + b));
      const double start = std::max(u, a + 1e-15 * (1.0 + a));
      const CVector k1 = -h(v, start);
      const CVector k2 = -h(v + 0.5 * dt * k1, mid);
      const CVector k3 = -h(v + 0.5 * dt * k2, mid);
      const CVector k4 = -h(v + dt * k3, end);
      v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  return v;
}

/// Composite Simpson rule with n (even) panels.
inline cplx simpson(const std::function<cplx(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  cplx acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

}  // namespace oracle

namespace prop {

/// splitmix64; independent of the library's Rng so generated cases do not
/// share a stream with the code under test.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  loewner::cplx complex(double r = 1.0) { return {uniform(-r, r), uniform(-r, r)}; }

  loewner::CVector ball(int n, double r) {
    loewner::CVector z(n);
    for (int i = 0; i < n; ++i) z(i) = complex();
    const double len = z.norm();
    return len == 0.0 ? z : z * (r * std::pow(uniform(), 1.0 / (2 * n)) / len);
  }

  loewner::CMatrix matrix(int n, double r = 1.0) {
    loewner::CMatrix M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = complex(r);
    return M;
  }

  /// Diagonal with Re in [lo, hi] plus a small strictly upper triangular part.
  loewner::CMatrix accretive(int n, double lo, double hi, double upper = 0.0) {
    loewner::CMatrix A = loewner::CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      A(i, i) = {uniform(lo, hi), uniform(-1.0, 1.0)};
      for (int j = i + 1; j < n; ++j) A(i, j) = complex(upper);
    }
    return A;
  }

  std::vector<int> multi_index(int n, int k) {
    std::vector<int> m(n, 0);
    for (int e = 0; e < k; ++e) ++m[integer(0, n - 1)];
    return m;
  }

 private:
  std::uint64_t state_;
};

/// Runs `body(gen, case)` for `cases` seeds derived from `seed`; the case
/// index goes into the Catch2 context so a failure names its seed.
template <class Body>
void for_all(std::uint64_t seed, int cases, Body&& body) {
  for (int c = 0; c < cases; ++c) {
    Gen gen(seed * 1000003ULL + static_cast<std::uint64_t>(c));
    body(gen, c);
  }
}

}  // namespace prop
