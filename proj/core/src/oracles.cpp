#include "loewner/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "loewner/errors.hpp"
#include "loewner/quadrature.hpp"

namespace loewner {

namespace {

// int_s^t e^{mu u} du
cplx exp_integral(cplx mu, double s, double t) {
  const double len = t - s;
  if (len == 0.0) return 0.0;
  const cplx x = mu * len;
  if (std::abs(x) < 1e-4) {
    // e^{mu s} (e^x - 1)/mu = e^{mu s} len (1 + x/2 + x^2/6 + x^3/24)
    return std::exp(mu * s) * len * (1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0);
  }
  return (std::exp(mu * t) - std::exp(mu * s)) / mu;
}

}  // namespace

cplx exp_weighted_integral(const TimeFunction& a, cplx mu, double s, double t) {
  if (t < s) return -exp_weighted_integral(a, mu, t, s);
  const cplx c = a.scale();
  switch (a.kind()) {
    case TimeFunction::Kind::Constant:
      return c * exp_integral(mu, s, t);
    case TimeFunction::Kind::ExpDecay:
      return c * exp_integral(mu - a.parameter(), s, t);
    case TimeFunction::Kind::Window: {
      const double hi = std::min(t, a.parameter());
      return hi > s ? c * exp_integral(mu, s, hi) : cplx(0.0);
    }
    case TimeFunction::Kind::Oscillation:
      return c * exp_integral(mu + kI * a.parameter(), s, t);
    default: {
      std::vector<double> cuts{s};
      for (double b : a.breakpoints())
        if (b > s && b < t) cuts.push_back(b);
      cuts.push_back(t);
      auto f = [&](double u) {
        CVector v(1);
        v(0) = a(u) * std::exp(mu * u);
        return v;
      };
      return gauss_kronrod(f, cuts, 1e-15, 1e-14).value(0);
    }
  }
}

CVector example_flow(cplx lambda, const TimeFunction& a, const CVector& z, double s, double t) {
  if (z.size() != 2) throw DimensionMismatch("example_flow: n = 2");
  CVector v(2);
  v(1) = std::exp(-(t - s)) * z(1);
  const cplx I = exp_weighted_integral(a, lambda - 2.0, s, t);
  v(0) = std::exp(-lambda * (t - s)) * (z(0) - z(1) * z(1) * std::exp((2.0 - lambda) * s) * I);
  return v;
}

CVector example_parametric_limit(cplx lambda, const TimeFunction& a, const CVector& z) {
  cplx I;
  const cplx mu = lambda - 2.0;
  switch (a.kind()) {
    case TimeFunction::Kind::Constant:
      if (!(mu.real() < 0.0)) throw PreconditionViolated("example_parametric_limit: divergent integral");
      I = -a.scale() / mu;
      break;
    case TimeFunction::Kind::ExpDecay:
      if (!((mu - a.parameter()).real() < 0.0))
        throw PreconditionViolated("example_parametric_limit: divergent integral");
      I = -a.scale() / (mu - a.parameter());
      break;
    case TimeFunction::Kind::Window:
      I = exp_weighted_integral(a, mu, 0.0, a.parameter());
      break;
    default:
      throw PreconditionViolated("example_parametric_limit: unsupported coefficient kind");
  }
  CVector g = z;
  g(0) -= z(1) * z(1) * I;
  return g;
}

CVector linear_flow(const OperatorA& A, const CVector& z, double s, double t) {
  return A.exp(-(t - s)) * z;
}

}  // namespace loewner
