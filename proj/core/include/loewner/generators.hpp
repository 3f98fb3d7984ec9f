#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "loewner/linalg_spectral.hpp"
#include "loewner/onevar.hpp"
#include "loewner/polyspace.hpp"
#include "loewner/sampling.hpp"
#include "loewner/time_function.hpp"

namespace loewner {

/// a(t) H(z^k)
struct PolyTerm {
  HomPolyMap H;
  TimeFunction a;
};

/// h(z, t) = Df(z)^{-1} Q(f(z), t).
struct Pushforward {
  std::function<CVector(const CVector&)> f;
  std::function<CMatrix(const CVector&)> Df;
  std::function<CVector(const CVector&, double)> Q;
  bool autonomous = true;
  /// Serialized recipe used by the JSON layer to rebuild the field.
  std::string recipe;
};

/// Infinitesimal generator h(z, t) = A z + higher order terms, in one of three
/// forms: autonomous polynomial, time-dependent polynomial, or pushforward.
class GeneratorSpec {
 public:
  enum class Form { PolynomialAutonomous, PolynomialTimeDependent, Pushforward };

  static GeneratorSpec linear(const OperatorA& A);
  /// h(z) = A z + sum_k H_k(z^k); degrees must be >= 2.
  static GeneratorSpec polynomial(const OperatorA& A, std::vector<HomPolyMap> H);
  /// h(z, t) = A z + sum_j a_j(t) H_j(z^{k_j}).
  static GeneratorSpec time_dependent(const OperatorA& A, std::vector<PolyTerm> terms);
  static GeneratorSpec pushforward(const OperatorA& A, Pushforward field);

  const OperatorA& A() const { return *A_; }
  Form form() const { return form_; }
  int n() const { return A_->n(); }
  bool autonomous() const;
  bool polynomial() const { return form_ != Form::Pushforward; }
  /// Largest degree present for polynomial forms (1 if linear).
  int max_degree() const;

  CVector evaluate(const CVector& z, double t) const;
  /// h(z, t) - A z - sum_{k <= K} H_k(z^k, t).
  CVector remainder(const CVector& z, double t, int K) const;
  /// Degree-k homogeneous part H_k(., t). For pushforward fields it is
  /// extracted by torus quadrature (cached when autonomous).
  HomPolyMap H(int k, double t) const;

  const std::vector<PolyTerm>& terms() const { return terms_; }
  const Pushforward& field() const { return *field_; }

  /// Union of breakpoints of all coefficient functions, sorted.
  std::vector<double> breakpoints() const;
  /// Largest rate among coefficient functions.
  double rate() const;

 private:
  GeneratorSpec() = default;

  std::shared_ptr<const OperatorA> A_;
  Form form_ = Form::PolynomialAutonomous;
  std::vector<PolyTerm> terms_;
  std::shared_ptr<const Pushforward> field_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

struct SphereMinimum {
  double radius = 0.0;
  double t = 0.0;
  double min_value = 0.0;  ///< min Re<h(z,t), z> on the sphere
};

struct ValidationReport {
  std::vector<SphereMinimum> spheres;
  double min_value = 0.0;
  /// min of Re<h, z> / |z|^2
  double min_normalized = 0.0;
  CVector witness;
  double witness_t = 0.0;
  bool violation = false;
  double origin_error = 0.0;    ///< max |h(0, t)|
  double jacobian_error = 0.0;  ///< max |Dh(0, t) - A| by central differences
  bool origin_ok = false;
  bool valid() const { return !violation && origin_ok; }
};

inline constexpr double kValidationSlack = 1e-12;

/// Samples Re<h(z,t), z> on spheres of the given radii. Throws
/// GeneratorInvalid on a value below -1e-12 unless throw_on_violation is false.
ValidationReport validate(const GeneratorSpec& h, std::span<const double> radii,
                          int samples_per_sphere, std::span<const double> t_grid,
                          std::uint64_t seed = 0, bool throw_on_violation = true);

/// h(z, t) = (lambda z_1 + a(t) z_2^2, z_2) over A = diag(lambda, 1).
GeneratorSpec example_generator(cplx lambda, const TimeFunction& a);

/// h(z) = A z + a (lambda_s - <m, lambda>) z^m e_s for diagonal A, which is
/// [Df]^{-1} A f for f = z + a z^m e_s. Needs m_i = 0 for i <= s (0-based).
GeneratorSpec monomial_generator(const OperatorA& A, const MultiIndex& m, int s, cplx a);

struct QuadraticAdmissibility {
  double q_min = 0.0;
  double argmin = 0.0;
  bool admissible = false;  ///< q >= 0 on [0, 1]
  /// alpha in [0, Re lambda], beta in [0, 1/2], alpha + beta <= Re lambda
  bool hypotheses_hold = false;
};

/// Exact minimum of q(x) = (Re lambda - alpha - beta) x^2 - 2 beta x + alpha + beta on [0, 1].
QuadraticAdmissibility roper_suffridge_admissibility(double alpha, double beta, cplx lambda);

struct RoperSuffridgeGenerator {
  GeneratorSpec h;
  QuadraticAdmissibility admissibility;
};

/// Extension map (f(z_1), (f(z_1)/z_1)^alpha f'(z_1)^beta z_2).
CVector roper_suffridge_map(const OneVarMap& f, double alpha, double beta, const CVector& z);
CMatrix roper_suffridge_jacobian(const OneVarMap& f, double alpha, double beta, const CVector& z);

/// Pushforward of w -> A w, A = diag(1, lambda), through the extension map.
RoperSuffridgeGenerator roper_suffridge_generator(const OneVarMap& f, double alpha, double beta,
                                                  cplx lambda);

/// Closed form (z_1 p(z_1), z_2 (lambda - alpha - beta + (alpha + beta) p + beta z_1 p')).
CVector roper_suffridge_field(const OneVarMap& f, double alpha, double beta, cplx lambda,
                              const CVector& z);

struct RandomGeneratorOptions {
  int max_degree = 3;
  bool time_dependent = true;
  /// sum_k poly_norm(H_k) sup|a| <= fraction * m(A), which makes h valid on the ball.
  double fraction = 0.9;
  int terms_per_degree = 2;
};

/// Random accretive A with real parts in [re_lo, re_hi] and a small
/// strictly upper triangular part unless diagonal is set.
OperatorA random_operator(Rng& rng, int n, double re_lo, double re_hi, bool diagonal);

GeneratorSpec random_generator(Rng& rng, const OperatorA& A, const RandomGeneratorOptions& opt = {});

}  // namespace loewner
