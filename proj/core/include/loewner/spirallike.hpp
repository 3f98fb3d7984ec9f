#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "loewner/coefficients.hpp"
#include "loewner/generators.hpp"
#include "loewner/onevar.hpp"

namespace loewner {

/// Free direction of a resonant degree: F_k may be shifted by any multiple.
struct KernelDirection {
  int k = 0;
  HomPolyMap Q;
};

/// f(z) = z + F_2(z^2) + ... + F_K(z^K).
struct TruncatedMap {
  int n = 0;
  int K = 1;
  /// F[d-1] has degree d; F[0] is the identity.
  std::vector<HomPolyMap> F;
  /// "solver", "extension", "witness" or "identity".
  std::string provenance;
  /// False when a resonant degree left an affine family of solutions.
  bool unique = true;
  std::vector<KernelDirection> kernel;

  static TruncatedMap identity(int n, int K = 1);

  const HomPolyMap& degree(int k) const { return F.at(static_cast<std::size_t>(k - 1)); }
  CVector evaluate(const CVector& z) const;
  CMatrix jacobian(const CVector& z) const;
};

/// Recursion F_k = -B_k^{-1} N_k for k = 2..K for an autonomous generator.
/// Resonant modes with vanishing right side are set to 0 and reported as
/// kernel directions; otherwise NoHolomorphicSolution is thrown.
TruncatedMap solve_spirallike(const GeneratorSpec& h, int K);

struct SpirallikeResidualReport {
  std::vector<double> radii;
  std::vector<double> residuals;  ///< max |Df h - A f| on each sphere
  /// residuals[i+1] / residuals[i] and the matching (r[i+1] / r[i])^K.
  std::vector<double> ratios;
  std::vector<double> expected;
  double max_residual = 0.0;
  /// Each ratio <= 4 expected, or every residual <= 1e-12.
  bool decay_ok = false;
};

SpirallikeResidualReport spirallike_residual(const TruncatedMap& f, const GeneratorSpec& h,
                                             std::span<const double> radii, int samples = 200,
                                             std::uint64_t seed = 0);

struct MapWithJacobian {
  std::function<CVector(const CVector&)> f;
  std::function<CMatrix(const CVector&)> Df;
};

MapWithJacobian as_callable(const TruncatedMap& f);

enum class MembershipStatus { Inside, Outside, Inconclusive };

struct MembershipPoint {
  CVector z;
  double t = 0.0;
  CVector w;
  double residual = 0.0;
  int iterations = 0;
  MembershipStatus status = MembershipStatus::Inconclusive;
};

struct MembershipReport {
  std::vector<MembershipPoint> points;
  int inside = 0;
  int outside = 0;
  int inconclusive = 0;
  bool pass = false;  ///< no point solved to |w| >= 1
};

/// For sampled |z| <= 0.8 and t in t_grid solves f(w) = e^{-tA} f(z) by damped
/// Newton (at most 50 iterations, start e^{-tA} z, residual <= 1e-9).
MembershipReport spirallike_membership(const MapWithJacobian& f, const OperatorA& A,
                                       std::span<const double> t_grid, int samples = 50,
                                       std::uint64_t seed = 0);
MembershipReport spirallike_membership(const TruncatedMap& f, const OperatorA& A,
                                       std::span<const double> t_grid, int samples = 50,
                                       std::uint64_t seed = 0);

struct RoperSuffridgeExtension {
  MapWithJacobian map;
  TruncatedMap taylor;
  QuadraticAdmissibility admissibility;
};

/// Phi(z) = (f(z_1), (f(z_1)/z_1)^alpha f'(z_1)^beta z_2) with Taylor
/// coefficients up to degree K from torus quadrature.
RoperSuffridgeExtension roper_suffridge_extend(const OneVarMap& f1, double alpha, double beta,
                                               cplx lambda, int K = 4);

struct WitnessCertificate {
  int k0 = 0;
  double norm_Fk0 = 0.0;  ///< sum of |coefficients| of F_{k0}
  double target = 0.0;
  double residual = 0.0;  ///< max |Df h - A f| on the sample spheres
  bool norm_ok = false;
};

struct NoncompactnessWitness {
  TruncatedMap f;
  std::vector<HomPolyMap> H;  ///< H[0] is H_{k0} (possibly zero)
  HomPolyMap kernel_vector;
  WitnessCertificate certificate;
};

/// k0 is the largest resonant degree <= n0. h = Az + H_{k0} with H_{k0} a
/// range direction of poly norm h_scale (0 gives h = Az); F_{k0} is the
/// particular solution shifted by (M + |particular|) times the first kernel
/// vector in graded-lex order, and higher degrees follow by the recursion.
/// Requires diagonalizable A; throws NotResonant if no degree <= n0 resonates.
NoncompactnessWitness noncompactness_witness(const OperatorA& A, double M, double h_scale = 0.0);

/// The generator Az + H_{k0} used by a witness.
GeneratorSpec witness_generator(const OperatorA& A, const NoncompactnessWitness& w);

}  // namespace loewner
