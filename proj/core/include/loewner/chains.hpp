#pragma once

#include <functional>
#include <span>
#include <vector>

#include "loewner/coefficients.hpp"
#include "loewner/generators.hpp"

namespace loewner {

using PointMap = std::function<CVector(const CVector&)>;

/// g(z, s) = lim_{t->inf} u(z, s, t), u = e^{tA}(v + sum_{k=2}^{n0} F_k(v^k, t)).
struct ChainPoint {
  CVector z;
  CVector g;
  double T_used = 0.0;
  /// Norm of the last grid increment of u.
  double tail_estimate = 0.0;
  bool converged = false;
  /// Least-squares decay rate of the increments (+inf if they vanish).
  double fitted_decay = 0.0;
  std::vector<double> grid;
  std::vector<double> increments;
};

struct ChainEvaluation {
  double s = 0.0;
  double tol = 0.0;
  /// (n0 + 1) m(A) - k_+(A)
  double theoretical_decay = 0.0;
  std::vector<ChainPoint> points;

  std::vector<CVector> values() const;
  bool all_converged() const;
};

struct ChainOptions {
  /// 0 means 40 / m(A) past s.
  double t_max = 0.0;
  /// Grid spacing; 0 means 1 / m(A).
  double spacing = 0.0;
  int consecutive = 3;
  /// Stop with NoConvergence instead of returning converged = false.
  bool throw_on_failure = true;
};

/// u is carried along with v by integrating
/// du/dt = -e^{tA} [(I + sum_j DF_j(v)) R(v, t) + sum_j sum_{l > n0 + 1 - j} DF_j(v) H_l(v, t)]
/// with R = h - A v - sum_{l <= n0} H_l, which decays like e^{t(k_+ - (n0+1) m)}.
/// Requires |z| <= 0.95 and F_2..F_{n0}; throws NoConvergence past t_max.
ChainPoint chain_limit(const GeneratorSpec& h, const CoefficientSet& coeffs, const CVector& z,
                       double s, double tol, const ChainOptions& opt = {});

ChainEvaluation chain_limit_batch(const GeneratorSpec& h, const CoefficientSet& coeffs,
                                  std::span<const CVector> points, double s, double tol,
                                  const ChainOptions& opt = {});

/// z -> g(z, s) as a batch map (for Taylor extraction).
BatchMap chain_map(const GeneratorSpec& h, const CoefficientSet& coeffs, double s, double tol,
                   const ChainOptions& opt = {});

struct SubordinationReport {
  CVector v;    ///< v(z, s, t)
  CVector lhs;  ///< g(v, t)
  CVector rhs;  ///< g(z, s)
  double difference = 0.0;
  bool pass = false;  ///< difference <= 100 tol
};

SubordinationReport check_subordination(const GeneratorSpec& h, const CoefficientSet& coeffs,
                                        const CVector& z, double s, double t, double tol);

struct GrowthSample {
  double r = 0.0;
  double sup = 0.0;  ///< sup over |z| = r of |e^{-sA} g(z, s)|
  CVector argmax;
};

/// Sampled supremum of |F(z)| on the sphere of radius r, refined by a
/// local search around the best samples.
GrowthSample sphere_sup(const PointMap& F, int n, double r, int samples = 2000,
                        std::uint64_t seed = 0);

struct GrowthReport {
  std::vector<GrowthSample> samples;
  /// Exponent p of log S = c + p log(1/(1-r)) + b (1 - r).
  double exponent = 0.0;
  /// Plain least-squares slope of log S against log(1/(1-r)).
  double loglog_slope = 0.0;
  double bound = 0.0;  ///< 2 k_+ / m + epsilon
  double epsilon = 0.0;
  bool pass = false;  ///< exponent <= bound + 0.1
};

/// Growth check from suprema over radii approaching 1. The correction term
/// b (1 - r) absorbs the leading deviation from a pure power law.
GrowthReport check_growth_bound(std::span<const GrowthSample> samples, const OperatorA& A,
                                double epsilon = 0.1);

/// Sup of |e^{-sA} g(., s)| at each radius followed by the fit.
GrowthReport check_growth_bound(const PointMap& normalized_map, const OperatorA& A,
                                std::span<const double> radii, double epsilon = 0.1,
                                int samples = 2000, std::uint64_t seed = 0);

struct UnivalenceReport {
  double min_ratio = 0.0;  ///< min |g(z_i) - g(z_j)| / |z_i - z_j|
  int pair_i = -1, pair_j = -1;
  double min_abs_det = 0.0;  ///< smallest |det Dg| over the Jacobian samples
  int det_samples = 0;
  bool pass = false;  ///< min_ratio > 1e-4 and every determinant nonzero
};

/// Pairwise separation on the given grid and finite-difference Jacobian
/// determinants of g at the first det_samples points.
UnivalenceReport univalence_spot_check(std::span<const CVector> points,
                                       std::span<const CVector> values, const PointMap& g,
                                       int det_samples = 50);

struct NecessaryConditionReport {
  cplx mu;  ///< lambda_i + lambda_j - lambda_k
  std::vector<double> T;
  std::vector<cplx> partial;  ///< int_0^T e^{-s mu} (h(s) + mu f) ds
  double cauchy_gap = 0.0;    ///< max spread over the second half of T
  bool cauchy = false;        ///< cauchy_gap < 1e-6
  /// Partial integrals settle at 0, consistent with asymptotic spirallikeness.
  bool vanishes = false;
  /// Smallest |partial| over the second half of T.
  double min_abs_tail = 0.0;
};

/// Partial integrals of e^{-s mu}(h_ij^k(s) + mu f_ij^k) with h_ij^k the
/// coefficient of z_i z_j e_k in H_2(., s) and f_ij^k the same coefficient of
/// f2. A must be diagonal, Re mu <= 0 and mu != 0. Indices are 0-based.
NecessaryConditionReport asymptotic_necessary_condition(const GeneratorSpec& h,
                                                        const HomPolyMap& f2, int i, int j,
                                                        int k_out, std::span<const double> T_grid);

}  // namespace loewner
