#include "loewner/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// b5 - b4
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kAlpha = 0.7 / 4.0;
constexpr double kBeta = 0.4 / 4.0;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

}  // namespace

double relative_error_norm(const CVector& err, const CVector& y0, const CVector& y1) {
  const double scale = std::max({y0.norm(), y1.norm(), 1e-300});
  return err.norm() / scale;
}

DormandPrince::DormandPrince(OdeRhs rhs, OdeErrorNorm norm, OdeOptions opt)
    : rhs_(std::move(rhs)), norm_(std::move(norm)), opt_(opt) {
  if (!norm_) norm_ = relative_error_norm;
}

void DormandPrince::reset(double t, const CVector& y, bool right_limit) {
  t_ = t;
  y_ = y;
  f_.resize(y.size());
  restart(right_limit);
  h_ = opt_.h_init > 0.0 ? opt_.h_init : initial_step();
  err_prev_ = 1e-4;
}

void DormandPrince::restart(bool right_limit) {
  const double te = right_limit ? std::nextafter(t_, std::numeric_limits<double>::infinity()) : t_;
  rhs_(te, y_, f_);
  ++stats_.rhs_evals;
}

double DormandPrince::initial_step() const {
  const double d0 = y_.norm();
  const double d1 = f_.norm();
  double h = (d0 < 1e-10 || d1 < 1e-10) ? 1e-4 : 0.01 * d0 / d1;
  h *= std::pow(opt_.tol / 1e-6, 0.25);
  return std::clamp(h, 1e-8, std::min(0.1, opt_.h_max));
}

void DormandPrince::advance_to(double t_target, const Observer& obs) {
  if (t_target < t_) throw PreconditionViolated("advance_to: target precedes current time");
  const auto n = y_.size();
  for (auto* v : {&k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &ynew_, &err_}) v->resize(n);
  while (t_ < t_target) {
    if (stats_.accepted + stats_.rejected >= opt_.max_steps)
      throw StepFloor(t_, h_, "advance_to: step budget exhausted");
    double h = std::min(h_, opt_.h_max);
    bool last = false;
    if (t_ + h >= t_target || t_target - (t_ + h) < 1e-12 * std::max(1.0, std::abs(t_target))) {
      h = t_target - t_;
      last = true;
    }
    if (h < opt_.h_min && !last) {
      std::ostringstream os;
      os << "step size " << h << " fell below " << opt_.h_min << " at t = " << t_;
      throw StepFloor(t_, h, os.str());
    }

    ytmp_ = y_ + h * a21 * f_;
    rhs_(t_ + c2 * h, ytmp_, k2_);
    ytmp_ = y_ + h * (a31 * f_ + a32 * k2_);
    rhs_(t_ + c3 * h, ytmp_, k3_);
    ytmp_ = y_ + h * (a41 * f_ + a42 * k2_ + a43 * k3_);
    rhs_(t_ + c4 * h, ytmp_, k4_);
    ytmp_ = y_ + h * (a51 * f_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    rhs_(t_ + c5 * h, ytmp_, k5_);
    ytmp_ = y_ + h * (a61 * f_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    const double t_new = last ? t_target : t_ + h;
    rhs_(t_new, ytmp_, k6_);
    ynew_ = y_ + h * (a71 * f_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    rhs_(t_new, ynew_, k7_);
    stats_.rhs_evals += 6;
    err_ = h * (e1 * f_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);

    const double scaled = norm_(err_, y_, ynew_);
    const double ratio = scaled / (h * opt_.tol);
    if (!std::isfinite(ratio)) {
      ++stats_.rejected;
      h_ = 0.25 * h;
      if (h_ < opt_.h_min) throw StepFloor(t_, h_, "advance_to: non-finite error estimate");
      continue;
    }
    if (ratio <= 1.0) {
      const double r = std::max(ratio, 1e-10);
      double factor = kSafety * std::pow(r, -kAlpha) * std::pow(err_prev_, kBeta);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      err_prev_ = std::max(ratio, 1e-4);
      ++stats_.accepted;
      if (obs) {
        OdeStep s{t_, t_new, y_, ynew_, f_, k7_};
        t_ = t_new;
        y_.swap(ynew_);
        f_.swap(k7_);
        obs(s);
      } else {
        t_ = t_new;
        y_.swap(ynew_);
        f_.swap(k7_);
      }
      // keep the controller's step when the last step was clipped
      if (!last) h_ = h * factor;
      else h_ = std::max(h_, h * factor);
    } else {
      ++stats_.rejected;
      const double factor = std::max(kMinFactor, kSafety * std::pow(ratio, -kAlpha));
      h_ = h * factor;
      if (h_ < opt_.h_min) {
        std::ostringstream os;
        os << "step size " << h_ << " fell below " << opt_.h_min << " at t = " << t_;
        throw StepFloor(t_, h_, os.str());
      }
    }
  }
}

CVector hermite(const OdeStep& s, double t) {
  const double h = s.t1 - s.t0;
  if (h <= 0.0) return s.y1;
  const double x = (t - s.t0) / h;
  const double x2 = x * x, x3 = x2 * x;
  const double h00 = 2 * x3 - 3 * x2 + 1, h10 = x3 - 2 * x2 + x, h01 = -2 * x3 + 3 * x2,
               h11 = x3 - x2;
  return h00 * s.y0 + (h10 * h) * s.f0 + h01 * s.y1 + (h11 * h) * s.f1;
}

}  // namespace loewner
