#include "loewner/transition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loewner/errors.hpp"
#include "loewner/parallel.hpp"

namespace loewner {

CVector Trajectory::at(double t) const {
  if (steps.empty()) {
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] == t) return values[i];
    throw PreconditionViolated("Trajectory::at: dense output was not kept");
  }
  if (t <= steps.front().t0) return steps.front().y0;
  auto it = std::upper_bound(steps.begin(), steps.end(), t,
                             [](double v, const OdeStep& s) { return v < s.t1; });
  if (it == steps.end()) return steps.back().y1;
  return hermite(*it, t);
}

void check_tolerance(double tol) {
  if (!(tol >= 1e-12 && tol <= 1e-4)) {
    std::ostringstream os;
    os << "integrate: tol = " << tol << " outside [1e-12, 1e-4]";
    throw PreconditionViolated(os.str());
  }
}

void check_start_point(const CVector& z, int n) {
  if (z.size() != n) throw DimensionMismatch("integrate: start point dimension differs from A");
  if (!(z.norm() < 1.0)) throw PreconditionViolated("integrate: start point must lie in the unit ball");
}

namespace {

double componentwise_norm(const CVector& err, const CVector& y0, const CVector& y1) {
  const double floor = 1e-12 * std::max({y0.norm(), y1.norm(), 1e-300});
  double out = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = std::max({std::abs(y0(i)), std::abs(y1(i)), floor});
    out = std::max(out, std::abs(err(i)) / sc);
  }
  return out;
}

}  // namespace

Trajectory integrate(const GeneratorSpec& h, const CVector& z, double s, double t_end, double tol,
                     const IntegrateOptions& opt) {
  check_tolerance(tol);
  check_start_point(z, h.n());
  if (!(s >= 0.0) || !(t_end >= s)) throw PreconditionViolated("integrate: need 0 <= s <= t_end");
  for (std::size_t i = 0; i < opt.output_times.size(); ++i) {
    const double t = opt.output_times[i];
    if (t < s || t > t_end || (i > 0 && t < opt.output_times[i - 1]))
      throw PreconditionViolated("integrate: output times must be sorted inside [s, t_end]");
  }

  Trajectory traj;
  traj.z0 = z;
  traj.s = s;
  traj.tol = tol;

  OdeRhs rhs = [&h](double t, const CVector& y, CVector& dy) { dy = -h.evaluate(y, t); };
  OdeErrorNorm norm = opt.control == ErrorControl::Componentwise ? OdeErrorNorm(componentwise_norm)
                                                                 : OdeErrorNorm(relative_error_norm);
  OdeOptions oo;
  oo.tol = tol;
  DormandPrince dp(rhs, norm, oo);

  std::vector<double> bps;
  for (double b : h.breakpoints())
    if (b > s && b < t_end) bps.push_back(b);

  const bool every_step = opt.output_times.empty();
  std::size_t next_out = 0;
  auto record = [&](double t, const CVector& y) {
    traj.times.push_back(t);
    traj.values.push_back(y);
  };
  if (every_step) {
    record(s, z);
  } else {
    while (next_out < opt.output_times.size() && opt.output_times[next_out] == s) {
      record(s, z);
      ++next_out;
    }
  }

  auto observer = [&](const OdeStep& st) {
    const double nv = st.y1.norm();
    if (nv >= kBallExit) {
      std::ostringstream os;
      os << "integrate: |v| = " << nv << " reached the ball boundary at t = " << st.t1;
      throw BallExit(st.t1, nv, os.str());
    }
    if (opt.keep_steps) traj.steps.push_back(st);
    if (every_step) record(st.t1, st.y1);
  };

  dp.reset(s, z, false);
  if (t_end > s) {
    // targets: breakpoints restart the stepper, output times only clip steps
    std::vector<std::pair<double, bool>> targets;
    for (double b : bps) targets.emplace_back(b, true);
    for (std::size_t i = next_out; i < opt.output_times.size(); ++i)
      targets.emplace_back(opt.output_times[i], false);
    targets.emplace_back(t_end, false);
    std::sort(targets.begin(), targets.end());
    for (const auto& [target, is_break] : targets) {
      if (target > dp.t()) dp.advance_to(target, observer);
      while (!every_step && next_out < opt.output_times.size() && opt.output_times[next_out] <= dp.t()) {
        record(opt.output_times[next_out], dp.y());
        ++next_out;
      }
      if (is_break) dp.restart(true);
    }
  }
  traj.step_stats = dp.stats();
  return traj;
}

std::vector<Trajectory> integrate_batch(const GeneratorSpec& h, std::span<const CVector> points,
                                        double s, double t_end, double tol,
                                        const IntegrateOptions& opt) {
  return parallel_map<Trajectory>(points.size(), [&](std::size_t i) {
    return integrate(h, points[i], s, t_end, tol, opt);
  });
}

TransitionInequalityReport check_transition_inequality(const Trajectory& traj, const OperatorA& A) {
  TransitionInequalityReport rep;
  const double nz = traj.z0.norm();
  const double rhs0 = nz / ((1.0 - nz) * (1.0 - nz));
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double nv = traj.values[i].norm();
    const double lhs = nv / ((1.0 - nv) * (1.0 - nv));
    const double rhs = std::exp(A.m() * (traj.s - traj.times[i])) * rhs0;
    double ratio = 0.0;
    if (rhs > 0.0) ratio = lhs / rhs;
    else if (lhs > 0.0) ratio = std::numeric_limits<double>::infinity();
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.max_norm_excess = std::max(rep.max_norm_excess, nv - nz);
  }
  rep.schwarz = rep.max_norm_excess <= 1e-9;
  rep.pass = rep.max_ratio <= 1.0 + 1e-6;
  return rep;
}

SemigroupReport check_semigroup(const GeneratorSpec& h, const CVector& z, double s, double u,
                                double t, double tol) {
  if (!(s <= u && u <= t)) throw PreconditionViolated("check_semigroup: need s <= u <= t");
  SemigroupReport rep;
  rep.direct = integrate(h, z, s, t, tol, {{t}}).final_value();
  const CVector mid = integrate(h, z, s, u, tol, {{u}}).final_value();
  rep.composed = integrate(h, mid, u, t, tol, {{t}}).final_value();
  rep.difference = (rep.direct - rep.composed).norm();
  rep.pass = rep.difference <= 50.0 * tol;
  return rep;
}

ComponentBoundsReport check_component_bounds(const Trajectory& traj, const OperatorA& A) {
  if (!A.diagonal()) throw PreconditionViolated("check_component_bounds: A must be diagonal");
  const double span = traj.times.back() - traj.s;
  if (span < 5.0 / A.m()) {
    std::ostringstream os;
    os << "check_component_bounds: tail length " << span << " < 5/m(A) = " << 5.0 / A.m();
    throw InsufficientTail(os.str());
  }
  ComponentBoundsReport rep;
  rep.pass = true;
  const double t_half = traj.s + 0.5 * span;
  for (int i = 0; i < A.n(); ++i) {
    ComponentBound cb;
    cb.component = i;
    cb.required = std::min(A.eigenvalues()(i).real(), 2.0 * A.m()) - 0.05;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    bool vanished = false;
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
      if (traj.times[j] < t_half) continue;
      const double a = std::abs(traj.values[j](i));
      if (!(a > 1e-300)) {
        vanished = true;
        continue;
      }
      const double x = traj.times[j];
      const double y = std::log(a);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++cnt;
    }
    if (cnt < 2 || vanished) {
      cb.measured = std::numeric_limits<double>::infinity();
    } else {
      const double denom = cnt * sxx - sx * sx;
      cb.measured = denom > 0.0 ? -(cnt * sxy - sx * sy) / denom : std::numeric_limits<double>::infinity();
    }
    cb.pass = cb.measured >= cb.required;
    rep.pass = rep.pass && cb.pass;
    rep.components.push_back(cb);
  }
  return rep;
}

}  // namespace loewner
