#pragma once

#include <functional>
#include <string>
#include <vector>

#include "loewner/types.hpp"

namespace loewner {

/// Scalar coefficient function a(t) on [0, inf) for time-dependent generators.
///
/// Built-ins are closed-form and serializable; closures are library-only.
/// Every kind carries a complex scale c, so e.g. exp_decay(r, c) = c e^{-r t}.
class TimeFunction {
 public:
  enum class Kind { Constant, ExpDecay, Window, Oscillation, Table, Closure };

  TimeFunction() = default;

  static TimeFunction constant(cplx c = 1.0);
  /// c e^{-rate t}, rate >= 0.
  static TimeFunction exp_decay(double rate, cplx c = 1.0);
  /// c on [0, T], 0 after.
  static TimeFunction window(double T, cplx c = 1.0);
  /// c e^{i omega t}.
  static TimeFunction oscillation(double omega, cplx c = 1.0);
  /// Piecewise linear through (t_i, v_i), constant outside [t_0, t_last].
  static TimeFunction table(std::vector<double> t, std::vector<cplx> v);
  /// Arbitrary function; sup_abs is the caller's bound on |a|, breakpoints
  /// are points where a is not smooth.
  static TimeFunction closure(std::function<cplx(double)> f, double sup_abs,
                              std::vector<double> breakpoints = {}, double rate = 1.0);

  cplx operator()(double t) const;

  Kind kind() const { return kind_; }
  std::string name() const;
  cplx scale() const { return c_; }
  /// rate for ExpDecay, T for Window, omega for Oscillation, 0 otherwise.
  double parameter() const { return p_; }
  const std::vector<double>& table_t() const { return tt_; }
  const std::vector<cplx>& table_v() const { return tv_; }

  bool is_constant() const { return kind_ == Kind::Constant; }
  /// sup over t >= 0 of |a(t)|.
  double sup_abs() const;
  /// Non-smooth points in (0, inf).
  std::vector<double> breakpoints() const;
  /// Inverse of the shortest time scale on which a varies (0 if constant).
  double rate() const;

  /// A copy with the scale multiplied by w.
  TimeFunction scaled(cplx w) const;

 private:
  Kind kind_ = Kind::Constant;
  cplx c_{1.0, 0.0};
  double p_ = 0.0;
  std::vector<double> tt_;
  std::vector<cplx> tv_;
  std::function<cplx(double)> f_;
  double sup_ = 0.0;
  std::vector<double> bp_;
};

}  // namespace loewner
