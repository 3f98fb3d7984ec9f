#include "loewner/chains.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/QR>

#include "loewner/errors.hpp"
#include "loewner/parallel.hpp"
#include "loewner/quadrature.hpp"
#include "loewner/sampling.hpp"
#include "loewner/transition.hpp"

namespace loewner {

namespace {

double ode_tolerance(double tol) { return std::clamp(0.1 * tol, 1e-12, 1e-4); }

// sum of the degree-l part of h at v
CVector degree_part(const GeneratorSpec& h, int l, const CVector& v, double t) {
  if (!h.polynomial()) return h.H(l, t).evaluate(v);
  CVector out = CVector::Zero(h.n());
  for (const auto& term : h.terms()) {
    if (term.H.k() != l) continue;
    const cplx a = term.a(t);
    if (a != cplx(0.0)) out += a * term.H.evaluate(v);
  }
  return out;
}

double block_norm(const CVector& err, const CVector& y0, const CVector& y1) {
  const Eigen::Index n = err.size() / 2;
  double out = 0.0;
  for (int b = 0; b < 2; ++b) {
    const double sc = std::max({y0.segment(b * n, n).norm(), y1.segment(b * n, n).norm(), 1e-300});
    out = std::max(out, err.segment(b * n, n).norm() / sc);
  }
  return out;
}

}  // namespace

std::vector<CVector> ChainEvaluation::values() const {
  std::vector<CVector> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.g);
  return out;
}

bool ChainEvaluation::all_converged() const {
  return std::all_of(points.begin(), points.end(), [](const ChainPoint& p) { return p.converged; });
}

ChainPoint chain_limit(const GeneratorSpec& h, const CoefficientSet& coeffs, const CVector& z,
                       double s, double tol, const ChainOptions& opt) {
  const OperatorA& A = h.A();
  const int n = A.n();
  if (z.size() != n) throw DimensionMismatch("chain_limit: point dimension differs from A");
  if (!(z.norm() <= 0.95)) throw PreconditionViolated("chain_limit: |z| must be <= 0.95");
  if (!(s >= 0.0)) throw PreconditionViolated("chain_limit: s must be >= 0");
  if (!(tol > 0.0)) throw PreconditionViolated("chain_limit: tol must be > 0");
  const int K = std::max(1, coeffs.max_degree());
  if (A.n0() >= 2 && K < A.n0()) {
    std::ostringstream os;
    os << "chain_limit: coefficients up to degree " << A.n0() << " are required";
    throw MissingLowerOrder(K + 1, os.str());
  }

  ChainPoint out;
  out.z = z;
  const double spacing = opt.spacing > 0.0 ? opt.spacing : 1.0 / A.m();
  const double t_max = s + (opt.t_max > 0.0 ? opt.t_max : 40.0 / A.m());

  std::vector<HomPolyMap> F0 = coeffs.at(s);
  CVector u0 = z;
  for (const auto& F : F0) u0 += F.evaluate(z);
  u0 = A.exp(s) * u0;

  if (z.norm() == 0.0) {
    out.g = CVector::Zero(n);
    out.T_used = s;
    out.converged = true;
    out.fitted_decay = std::numeric_limits<double>::infinity();
    return out;
  }

  OdeRhs rhs = [&](double t, const CVector& y, CVector& dy) {
    const CVector v = y.head(n);
    dy.resize(2 * n);
    dy.head(n) = -h.evaluate(v, t);
    const CVector R = h.remainder(v, t, K);
    std::vector<HomPolyMap> F = coeffs.at(t);
    CVector w = R;
    std::vector<CVector> Hl(static_cast<std::size_t>(K + 1));
    for (int l = 2; l <= K; ++l) Hl[l] = degree_part(h, l, v, t);
    for (int j = 2; j <= K; ++j) {
      const HomPolyMap& Fj = F[static_cast<std::size_t>(j - 2)];
      CVector arg = R;
      for (int l = K - j + 2; l <= K; ++l) arg += Hl[l];
      w += Fj.jacobian_apply(v, arg);
    }
    dy.tail(n) = -(A.exp(t) * w);
  };

  OdeOptions oo;
  oo.tol = ode_tolerance(tol);
  DormandPrince dp(rhs, block_norm, oo);
  CVector y0(2 * n);
  y0 << z, u0;
  dp.reset(s, y0, false);

  auto observer = [&](const OdeStep& st) {
    const double nv = st.y1.head(n).norm();
    if (nv >= kBallExit) {
      std::ostringstream os;
      os << "chain_limit: |v| = " << nv << " reached the ball boundary at t = " << st.t1;
      throw BallExit(st.t1, nv, os.str());
    }
  };

  std::vector<double> bps;
  for (double b : h.breakpoints())
    if (b > s) bps.push_back(b);
  std::size_t next_bp = 0;

  CVector u_prev = u0;
  out.grid.push_back(s);
  int below = 0;
  for (int i = 1;; ++i) {
    const double t = s + i * spacing;
    if (t > t_max + 1e-12 * t_max) break;
    while (next_bp < bps.size() && bps[next_bp] < t) {
      if (bps[next_bp] > dp.t()) dp.advance_to(bps[next_bp], observer);
      dp.restart(true);
      ++next_bp;
    }
    dp.advance_to(t, observer);
    const CVector u = dp.y().tail(n);
    const double inc = (u - u_prev).norm();
    out.grid.push_back(t);
    out.increments.push_back(inc);
    u_prev = u;
    below = inc < tol ? below + 1 : 0;
    if (below >= opt.consecutive) {
      out.converged = true;
      break;
    }
  }
  out.g = u_prev;
  out.T_used = out.grid.back();
  out.tail_estimate = out.increments.empty() ? 0.0 : out.increments.back();

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < out.increments.size(); ++i) {
    if (!(out.increments[i] > 1e-300)) continue;
    const double x = out.grid[i + 1];
    const double yv = std::log(out.increments[i]);
    sx += x;
    sy += yv;
    sxx += x * x;
    sxy += x * yv;
    ++cnt;
  }
  const double den = cnt * sxx - sx * sx;
  out.fitted_decay = cnt >= 2 && den > 0.0 ? -(cnt * sxy - sx * sy) / den
                                           : std::numeric_limits<double>::infinity();

  if (!out.converged && opt.throw_on_failure) {
    std::ostringstream os;
    os << "chain_limit: increments still " << out.tail_estimate << " > " << tol << " at t = " << t_max;
    throw NoConvergence(t_max, out.tail_estimate, os.str());
  }
  return out;
}

ChainEvaluation chain_limit_batch(const GeneratorSpec& h, const CoefficientSet& coeffs,
                                  std::span<const CVector> points, double s, double tol,
                                  const ChainOptions& opt) {
  ChainEvaluation ev;
  ev.s = s;
  ev.tol = tol;
  ev.theoretical_decay = (h.A().n0() + 1) * h.A().m() - h.A().k_plus();
  ev.points = parallel_map<ChainPoint>(points.size(), [&](std::size_t i) {
    return chain_limit(h, coeffs, points[i], s, tol, opt);
  });
  return ev;
}

BatchMap chain_map(const GeneratorSpec& h, const CoefficientSet& coeffs, double s, double tol,
                   const ChainOptions& opt) {
  return [h, coeffs, s, tol, opt](const std::vector<CVector>& zs) {
    return chain_limit_batch(h, coeffs, zs, s, tol, opt).values();
  };
}

SubordinationReport check_subordination(const GeneratorSpec& h, const CoefficientSet& coeffs,
                                        const CVector& z, double s, double t, double tol) {
  if (!(s <= t)) throw PreconditionViolated("check_subordination: need s <= t");
  SubordinationReport rep;
  rep.v = t > s ? integrate(h, z, s, t, ode_tolerance(tol), {{t}}).final_value() : z;
  rep.lhs = chain_limit(h, coeffs, rep.v, t, tol).g;
  rep.rhs = chain_limit(h, coeffs, z, s, tol).g;
  rep.difference = (rep.lhs - rep.rhs).norm();
  rep.pass = rep.difference <= 100.0 * tol;
  return rep;
}

GrowthSample sphere_sup(const PointMap& F, int n, double r, int samples, std::uint64_t seed) {
  const auto pts = sphere_points(n, r, samples, seed);
  const auto vals = parallel_map<double>(pts.size(), [&](std::size_t i) { return F(pts[i]).norm(); });
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t starts = std::min<std::size_t>(5, order.size());
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });

  struct Local {
    double value;
    CVector z;
  };
  const auto refined = parallel_map<Local>(starts, [&](std::size_t k) {
    Rng rng(seed * 1000003ULL + k + 1);
    CVector best = pts[order[k]];
    double best_v = vals[order[k]];
    double sigma = 0.1 * r;
    int fails = 0;
    for (int it = 0; it < 400 && sigma > 1e-7 * r; ++it) {
      CVector c = best + rng.ball(n, sigma);
      c *= r / c.norm();
      const double v = F(c).norm();
      if (v > best_v) {
        best_v = v;
        best = c;
        fails = 0;
      } else if (++fails >= 15) {
        sigma *= 0.5;
        fails = 0;
      }
    }
    return Local{best_v, best};
  });

  GrowthSample out;
  out.r = r;
  for (const auto& l : refined)
    if (l.value > out.sup) {
      out.sup = l.value;
      out.argmax = l.z;
    }
  return out;
}

GrowthReport check_growth_bound(std::span<const GrowthSample> samples, const OperatorA& A,
                                double epsilon) {
  GrowthReport rep;
  rep.samples.assign(samples.begin(), samples.end());
  rep.epsilon = epsilon;
  rep.bound = 2.0 * A.k_plus() / A.m() + epsilon;
  const Eigen::Index N = static_cast<Eigen::Index>(samples.size());
  if (N < 2) throw PreconditionViolated("check_growth_bound: at least two radii are required");
  Eigen::MatrixXd X(N, 3);
  Eigen::VectorXd y(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const double r = samples[i].r;
    X(i, 0) = 1.0;
    X(i, 1) = std::log(1.0 / (1.0 - r));
    X(i, 2) = 1.0 - r;
    y(i) = std::log(samples[i].sup);
  }
  const Eigen::VectorXd simple = X.leftCols(2).colPivHouseholderQr().solve(y);
  rep.loglog_slope = simple(1);
  rep.exponent = N >= 4 ? X.colPivHouseholderQr().solve(y)(1) : rep.loglog_slope;
  rep.pass = rep.exponent <= rep.bound + 0.1;
  return rep;
}

GrowthReport check_growth_bound(const PointMap& normalized_map, const OperatorA& A,
                                std::span<const double> radii, double epsilon, int samples,
                                std::uint64_t seed) {
  std::vector<GrowthSample> gs;
  for (double r : radii) gs.push_back(sphere_sup(normalized_map, A.n(), r, samples, seed));
  return check_growth_bound(gs, A, epsilon);
}

UnivalenceReport univalence_spot_check(std::span<const CVector> points,
                                       std::span<const CVector> values, const PointMap& g,
                                       int det_samples) {
  if (points.size() != values.size())
    throw DimensionMismatch("univalence_spot_check: points and values differ in length");
  UnivalenceReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  const std::size_t N = points.size();
  struct Best {
    double ratio = std::numeric_limits<double>::infinity();
    int j = -1;
  };
  const auto rows = parallel_map<Best>(N, [&](std::size_t i) {
    Best b;
    for (std::size_t j = i + 1; j < N; ++j) {
      const double dz = (points[i] - points[j]).norm();
      if (dz == 0.0) continue;
      const double r = (values[i] - values[j]).norm() / dz;
      if (r < b.ratio) {
        b.ratio = r;
        b.j = static_cast<int>(j);
      }
    }
    return b;
  });
  for (std::size_t i = 0; i < N; ++i)
    if (rows[i].ratio < rep.min_ratio) {
      rep.min_ratio = rows[i].ratio;
      rep.pair_i = static_cast<int>(i);
      rep.pair_j = rows[i].j;
    }

  rep.min_abs_det = std::numeric_limits<double>::infinity();
  if (g) {
    const std::size_t M = std::min<std::size_t>(static_cast<std::size_t>(std::max(det_samples, 0)), N);
    constexpr double eps = 1e-6;
    for (std::size_t p = 0; p < M; ++p) {
      const CVector& z = points[p];
      const Eigen::Index n = z.size();
      CMatrix J(n, n);
      for (Eigen::Index c = 0; c < n; ++c) {
        CVector zp = z, zm = z;
        zp(c) += eps;
        zm(c) -= eps;
        J.col(c) = (g(zp) - g(zm)) / (2.0 * eps);
      }
      rep.min_abs_det = std::min(rep.min_abs_det, std::abs(J.determinant()));
      ++rep.det_samples;
    }
  }
  rep.pass = rep.min_ratio > 1e-4 && (rep.det_samples == 0 || rep.min_abs_det > 1e-10);
  return rep;
}

NecessaryConditionReport asymptotic_necessary_condition(const GeneratorSpec& h,
                                                        const HomPolyMap& f2, int i, int j,
                                                        int k_out, std::span<const double> T_grid) {
  const OperatorA& A = h.A();
  const int n = A.n();
  if (!A.diagonal()) throw PreconditionViolated("asymptotic_necessary_condition: A must be diagonal");
  if (i < 0 || j < 0 || k_out < 0 || i >= n || j >= n || k_out >= n)
    throw PreconditionViolated("asymptotic_necessary_condition: index out of range");
  if (f2.n() != n || f2.k() != 2) throw DimensionMismatch("asymptotic_necessary_condition: f2 must be degree 2");
  const CVector& lam = A.eigenvalues();
  NecessaryConditionReport rep;
  rep.mu = lam(i) + lam(j) - lam(k_out);
  if (rep.mu.real() > 0.0) throw PreconditionViolated("asymptotic_necessary_condition: Re mu must be <= 0");
  if (std::abs(rep.mu) <= kResonanceTol) throw PreconditionViolated("asymptotic_necessary_condition: mu = 0");
  if (T_grid.empty()) throw PreconditionViolated("asymptotic_necessary_condition: empty T grid");

  MultiIndex m(static_cast<std::size_t>(n), 0);
  ++m[i];
  ++m[j];
  const cplx fc = f2.coefficient(m, k_out);
  const cplx mu = rep.mu;
  auto f = [&](double s) {
    CVector v(1);
    v(0) = std::exp(-s * mu) * (h.H(2, s).coefficient(m, k_out) + mu * fc);
    return v;
  };
  std::vector<double> T(T_grid.begin(), T_grid.end());
  std::sort(T.begin(), T.end());
  const auto bps = h.breakpoints();
  cplx acc = 0.0;
  double prev = 0.0;
  for (double t : T) {
    if (t > prev) {
      std::vector<double> cuts{prev};
      for (double b : bps)
        if (b > prev && b < t) cuts.push_back(b);
      cuts.push_back(t);
      acc += gauss_kronrod(f, cuts, 1e-14, 1e-12).value(0);
      prev = t;
    }
    rep.T.push_back(t);
    rep.partial.push_back(acc);
  }
  const std::size_t half = rep.partial.size() / 2;
  rep.min_abs_tail = std::numeric_limits<double>::infinity();
  for (std::size_t a = half; a < rep.partial.size(); ++a) {
    rep.min_abs_tail = std::min(rep.min_abs_tail, std::abs(rep.partial[a]));
    for (std::size_t b = a + 1; b < rep.partial.size(); ++b)
      rep.cauchy_gap = std::max(rep.cauchy_gap, std::abs(rep.partial[a] - rep.partial[b]));
  }
  rep.cauchy = rep.cauchy_gap < 1e-6;
  rep.vanishes = rep.cauchy && std::abs(rep.partial.back()) < 1e-6;
  return rep;
}

}  // namespace loewner
