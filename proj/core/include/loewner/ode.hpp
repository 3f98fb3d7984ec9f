#pragma once

#include <functional>
#include <limits>

#include "loewner/types.hpp"

namespace loewner {

using OdeRhs = std::function<void(double t, const CVector& y, CVector& dy)>;
/// Scaled size of a local error estimate; the step is accepted when
/// norm / (h * tol) <= 1 (error per unit step).
using OdeErrorNorm = std::function<double(const CVector& err, const CVector& y0, const CVector& y1)>;

struct OdeOptions {
  double tol = 1e-9;
  double h_min = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
  double h_init = 0.0;  ///< 0 picks a starting step from the data
  long max_steps = 50'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

/// One accepted step with the data needed for cubic Hermite dense output.
struct OdeStep {
  double t0, t1;
  CVector y0, y1, f0, f1;
};

/// Relative error: |err| / max(|y0|, |y1|).
double relative_error_norm(const CVector& err, const CVector& y0, const CVector& y1);

/// Dormand-Prince 5(4) with FSAL, local extrapolation and a PI controller on
/// the error per unit step. Complex states are treated as the real system of
/// twice the dimension; the Euclidean norms coincide.
class DormandPrince {
 public:
  DormandPrince(OdeRhs rhs, OdeErrorNorm norm, OdeOptions opt);

  /// Start at (t, y). When right_limit is set the first derivative is taken
  /// just to the right of t (used after a discontinuity of the right side).
  void reset(double t, const CVector& y, bool right_limit = false);
  /// Recompute the stored derivative at the current point.
  void restart(bool right_limit);

  using Observer = std::function<void(const OdeStep&)>;
  /// Integrate to exactly t_target, calling obs after every accepted step.
  void advance_to(double t_target, const Observer& obs = {});

  double t() const { return t_; }
  const CVector& y() const { return y_; }
  const CVector& dy() const { return f_; }
  double step_size() const { return h_; }
  const OdeStats& stats() const { return stats_; }

 private:
  double initial_step() const;

  OdeRhs rhs_;
  OdeErrorNorm norm_;
  OdeOptions opt_;
  double t_ = 0.0;
  double h_ = 0.0;
  double err_prev_ = 1e-4;
  CVector y_, f_;
  CVector k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_, err_;
  OdeStats stats_;
};

/// Cubic Hermite interpolation inside one step.
CVector hermite(const OdeStep& s, double t);

}  // namespace loewner
