#pragma once

#include "loewner/linalg_spectral.hpp"
#include "loewner/time_function.hpp"

namespace loewner {

/// int_s^t a(u) e^{mu u} du in closed form for the built-in kinds
/// (table and closure fall back to adaptive quadrature).
cplx exp_weighted_integral(const TimeFunction& a, cplx mu, double s, double t);

/// Flow of h(z,t) = (lambda z_1 + a(t) z_2^2, z_2):
/// v_2 = e^{-(t-s)} z_2,
/// v_1 = e^{-lambda (t-s)} (z_1 - z_2^2 e^{(2-lambda) s} int_s^t a(u) e^{(lambda-2) u} du).
CVector example_flow(cplx lambda, const TimeFunction& a, const CVector& z, double s, double t);

/// lim_{t->inf} e^{tA} v(z, 0, t) for the same generator:
/// (z_1 - z_2^2 int_0^inf a(u) e^{(lambda-2) u} du, z_2). Requires the integral to converge.
CVector example_parametric_limit(cplx lambda, const TimeFunction& a, const CVector& z);

/// e^{-(t-s)A} z
CVector linear_flow(const OperatorA& A, const CVector& z, double s, double t);

}  // namespace loewner
