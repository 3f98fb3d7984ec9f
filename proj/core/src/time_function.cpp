#include "loewner/time_function.hpp"

#include <algorithm>
#include <cmath>

#include "loewner/errors.hpp"

namespace loewner {

TimeFunction TimeFunction::constant(cplx c) {
  TimeFunction f;
  f.kind_ = Kind::Constant;
  f.c_ = c;
  return f;
}

TimeFunction TimeFunction::exp_decay(double rate, cplx c) {
  if (!(rate >= 0.0)) throw ParameterOutOfRange("exp_decay: rate must be >= 0");
  TimeFunction f;
  f.kind_ = Kind::ExpDecay;
  f.c_ = c;
  f.p_ = rate;
  return f;
}

TimeFunction TimeFunction::window(double T, cplx c) {
  if (!(T >= 0.0)) throw ParameterOutOfRange("window: T must be >= 0");
  TimeFunction f;
  f.kind_ = Kind::Window;
  f.c_ = c;
  f.p_ = T;
  return f;
}

TimeFunction TimeFunction::oscillation(double omega, cplx c) {
  if (!std::isfinite(omega)) throw ParameterOutOfRange("oscillation: omega must be finite");
  TimeFunction f;
  f.kind_ = Kind::Oscillation;
  f.c_ = c;
  f.p_ = omega;
  return f;
}

TimeFunction TimeFunction::table(std::vector<double> t, std::vector<cplx> v) {
  if (t.empty() || t.size() != v.size())
    throw PreconditionViolated("table: need matching non-empty t and v");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw PreconditionViolated("table: t must be strictly increasing");
  TimeFunction f;
  f.kind_ = Kind::Table;
  f.tt_ = std::move(t);
  f.tv_ = std::move(v);
  return f;
}

TimeFunction TimeFunction::closure(std::function<cplx(double)> fn, double sup_abs,
                                   std::vector<double> breakpoints, double rate) {
  TimeFunction f;
  f.kind_ = Kind::Closure;
  f.f_ = std::move(fn);
  f.sup_ = sup_abs;
  f.bp_ = std::move(breakpoints);
  f.p_ = rate;
  return f;
}

cplx TimeFunction::operator()(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return c_;
    case Kind::ExpDecay:
      return c_ * std::exp(-p_ * t);
    case Kind::Window:
      return t <= p_ ? c_ : cplx(0.0);
    case Kind::Oscillation:
      return c_ * std::polar(1.0, p_ * t);
    case Kind::Table: {
      if (t <= tt_.front()) return c_ * tv_.front();
      if (t >= tt_.back()) return c_ * tv_.back();
      const auto it = std::upper_bound(tt_.begin(), tt_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - tt_.begin());
      const double w = (t - tt_[i - 1]) / (tt_[i] - tt_[i - 1]);
      return c_ * ((1.0 - w) * tv_[i - 1] + w * tv_[i]);
    }
    case Kind::Closure:
      return c_ * f_(t);
  }
  return 0.0;
}

std::string TimeFunction::name() const {
  switch (kind_) {
    case Kind::Constant:
      return "constant";
    case Kind::ExpDecay:
      return "exp_decay";
    case Kind::Window:
      return "window";
    case Kind::Oscillation:
      return "oscillation";
    case Kind::Table:
      return "table";
    case Kind::Closure:
      return "closure";
  }
  return "";
}

double TimeFunction::sup_abs() const {
  switch (kind_) {
    case Kind::Constant:
    case Kind::ExpDecay:
    case Kind::Window:
    case Kind::Oscillation:
      return std::abs(c_);
    case Kind::Table: {
      double m = 0.0;
      for (const auto& v : tv_) m = std::max(m, std::abs(v));
      return std::abs(c_) * m;
    }
    case Kind::Closure:
      return std::abs(c_) * sup_;
  }
  return 0.0;
}

std::vector<double> TimeFunction::breakpoints() const {
  std::vector<double> out;
  switch (kind_) {
    case Kind::Window:
      if (p_ > 0.0) out.push_back(p_);
      break;
    case Kind::Table:
      for (double t : tt_)
        if (t > 0.0) out.push_back(t);
      break;
    case Kind::Closure:
      for (double t : bp_)
        if (t > 0.0) out.push_back(t);
      break;
    default:
      break;
  }
  return out;
}

double TimeFunction::rate() const {
  switch (kind_) {
    case Kind::Constant:
    case Kind::Window:
    case Kind::Table:
      return 0.0;
    case Kind::ExpDecay:
      return p_;
    case Kind::Oscillation:
      return std::abs(p_);
    case Kind::Closure:
      return p_;
  }
  return 0.0;
}

TimeFunction TimeFunction::scaled(cplx w) const {
  TimeFunction f = *this;
  f.c_ *= w;
  return f;
}

}  // namespace loewner
