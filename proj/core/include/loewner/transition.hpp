#pragma once

#include <span>
#include <vector>

#include "loewner/generators.hpp"
#include "loewner/ode.hpp"

namespace loewner {

inline constexpr double kBallExit = 1.0 - 1e-13;

/// Samples of v(z, s, t), the solution of dv/dt = -h(v, t), v(z, s, s) = z.
struct Trajectory {
  CVector z0;
  double s = 0.0;
  double tol = 0.0;
  std::vector<double> times;
  std::vector<CVector> values;
  OdeStats step_stats;
  /// Accepted steps, kept for dense output.
  std::vector<OdeStep> steps;

  const CVector& final_value() const { return values.back(); }
  /// Cubic Hermite interpolation between accepted steps.
  CVector at(double t) const;
};

enum class ErrorControl {
  Normwise,      ///< |err| / |v|
  Componentwise  ///< max_i |err_i| / max(|v_i|, 1e-12 |v|)
};

struct IntegrateOptions {
  /// Times at which values are recorded (sorted, inside [s, t_end]). Empty
  /// records every accepted step.
  std::vector<double> output_times;
  bool keep_steps = false;
  ErrorControl control = ErrorControl::Normwise;
};

/// Adaptive Dormand-Prince integration of the transition equation. The step
/// sequence restarts at every breakpoint of the coefficient functions.
/// Throws BallExit when |v| >= 1 - 1e-13 and StepFloor on step underflow.
Trajectory integrate(const GeneratorSpec& h, const CVector& z, double s, double t_end, double tol,
                     const IntegrateOptions& opt = {});

/// Independent trajectories for a batch of start points, in input order.
std::vector<Trajectory> integrate_batch(const GeneratorSpec& h, std::span<const CVector> points,
                                        double s, double t_end, double tol,
                                        const IntegrateOptions& opt = {});

void check_tolerance(double tol);
void check_start_point(const CVector& z, int n);

struct TransitionInequalityReport {
  std::vector<double> ratios;  ///< LHS / RHS per sample (0 when both vanish)
  double max_ratio = 0.0;
  bool schwarz = true;  ///< |v(t)| <= |z| + 1e-9 at every sample
  double max_norm_excess = 0.0;
  bool pass = false;  ///< max_ratio <= 1 + 1e-6
};

/// |v|/(1-|v|)^2 <= e^{m(A)(s-t)} |z|/(1-|z|)^2 at every sample.
TransitionInequalityReport check_transition_inequality(const Trajectory& traj, const OperatorA& A);

struct SemigroupReport {
  CVector direct;
  CVector composed;
  double difference = 0.0;
  bool pass = false;  ///< difference <= 50 tol
};

/// v(z, s, t) against v(v(z, s, u), u, t).
SemigroupReport check_semigroup(const GeneratorSpec& h, const CVector& z, double s, double u,
                                double t, double tol);

struct ComponentBound {
  int component = 0;
  double measured = 0.0;  ///< fitted decay exponent (+inf if the component vanishes)
  double required = 0.0;  ///< min(Re lambda_i, 2 m(A)) - 0.05
  bool pass = false;
};

struct ComponentBoundsReport {
  std::vector<ComponentBound> components;
  bool pass = false;
};

/// Least-squares decay exponents of |v_i| over the last half of the samples.
/// A must be diagonal; throws InsufficientTail when t_end - s < 5 / m(A).
ComponentBoundsReport check_component_bounds(const Trajectory& traj, const OperatorA& A);

}  // namespace loewner
