#include "loewner/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

double l1(const CVector& x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::abs(x(i));
  return s;
}

std::vector<double> cuts_between(double a, double b, const std::vector<double>& bps) {
  std::vector<double> c{a};
  for (double t : bps)
    if (t > a && t < b) c.push_back(t);
  c.push_back(b);
  return c;
}

// int_a^b e^{-mu_i (u - a)} n_i(u) du for every mode i in idx (others zero)
CVector modal_integral(const CVector& mu, const CMatrix& W, const std::vector<int>& idx,
                       const VecFunction& N, double a, double b, const std::vector<double>& bps) {
  auto f = [&](double u) {
    const CVector n = W * N(u);
    CVector out = CVector::Zero(mu.size());
    for (int i : idx) out(i) = std::exp(-mu(i) * (u - a)) * n(i);
    return out;
  };
  return gauss_kronrod(f, cuts_between(a, b, bps), 1e-15, 1e-13).value;
}

}  // namespace

CVector plus_tail(const CVector& mu, const CMatrix& W, const std::vector<int>& idx,
                  const VecFunction& N, double t, double tail_tol, double* length) {
  CVector acc = CVector::Zero(mu.size());
  if (length) *length = 0.0;
  if (idx.empty()) return acc;
  double delta = std::numeric_limits<double>::infinity();
  for (int i : idx) delta = std::min(delta, mu(i).real());
  const double chunk = std::min(1.0 / delta, 5.0);
  const double r_max = 3000.0 / delta;
  double r = 0.0;
  while (true) {
    const double a = t + r;
    const double b = a + chunk;
    auto f = [&](double u) {
      const CVector n = W * N(u);
      CVector out = CVector::Zero(mu.size());
      for (int i : idx) out(i) = std::exp(mu(i) * (t - u)) * n(i);
      return out;
    };
    acc -= gauss_kronrod(f, a, b, 1e-16, 1e-13).value;
    r += chunk;
    const CVector nb = W * N(b);
    double est = 0.0;
    for (int i : idx) est += std::exp(-mu(i).real() * r) * std::max(std::abs(nb(i)), 1e-300) / mu(i).real();
    if (est < tail_tol * std::max(1.0, l1(acc)) || r > r_max) break;
  }
  if (length) *length = r;
  return acc;
}

PolyBoundedSolution solve_polybounded(const CMatrix& L, SpectralSplit split, VecFunction N,
                                      CVector x0_le, GreenOptions opt) {
  if (L.rows() != L.cols() || split.eig.values.size() != L.rows() || x0_le.size() != L.rows())
    throw DimensionMismatch("solve_polybounded: sizes do not match");
  if (!(opt.horizon > 0.0)) throw PreconditionViolated("solve_polybounded: horizon must be > 0");
  if (opt.cheb_degree < 2) throw PreconditionViolated("solve_polybounded: cheb_degree must be >= 2");

  PolyBoundedSolution sol;
  sol.L_ = L;
  sol.N_ = std::move(N);
  std::sort(opt.breakpoints.begin(), opt.breakpoints.end());
  sol.opt_ = opt;
  sol.horizon_ = opt.horizon;

  const CVector projected = split.P_le * x0_le;
  sol.projected_ = (projected - x0_le).norm() > 1e-12 * (1.0 + x0_le.norm());
  sol.x0_le_ = projected;
  sol.split_ = std::move(split);

  const CVector& mu = sol.split_.eig.values;
  const CMatrix& V = sol.split_.eig.vectors;
  const CMatrix& W = sol.split_.eig.inverse;
  const auto& le = sol.split_.le;
  const auto& plus = sol.split_.plus;
  const auto& zero = sol.split_.zero;
  std::vector<int> all(static_cast<std::size_t>(mu.size()));
  for (int i = 0; i < static_cast<int>(mu.size()); ++i) all[i] = i;

  double hmax = opt.max_piece;
  double mu_max = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) mu_max = std::max(mu_max, std::abs(mu(i)));
  if (mu_max > 0.0) hmax = std::min(hmax, 2.0 / mu_max);
  if (opt.rate > 0.0) hmax = std::min(hmax, 2.0 / opt.rate);

  // piece boundaries
  std::vector<double> bounds{0.0};
  for (double b : opt.breakpoints)
    if (b > 0.0 && b < opt.horizon) bounds.push_back(b);
  bounds.push_back(opt.horizon);
  std::vector<std::pair<double, double>> pieces;
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    const double a = bounds[i], b = bounds[i + 1];
    const int m = std::max(1, static_cast<int>(std::ceil((b - a) / hmax - 1e-9)));
    for (int j = 0; j < m; ++j)
      pieces.emplace_back(a + (b - a) * j / m, j + 1 == m ? b : a + (b - a) * (j + 1) / m);
  }

  const int D = opt.cheb_degree;
  const std::size_t P = pieces.size();
  std::vector<std::vector<double>> nodes(P);
  std::vector<std::vector<CVector>> J(P);
  for (std::size_t p = 0; p < P; ++p) {
    nodes[p] = chebyshev_points(pieces[p].first, pieces[p].second, D);
    J[p].resize(static_cast<std::size_t>(D));
    for (int j = 0; j < D; ++j)
      J[p][j] = modal_integral(mu, W, all, sol.N_, nodes[p][j], nodes[p][j + 1], {});
  }

  const Eigen::Index dim = mu.size();
  std::vector<std::vector<CVector>> y(P, std::vector<CVector>(static_cast<std::size_t>(D + 1), CVector::Zero(dim)));

  // forward sweep over sigma_<= and the running P^0 integral
  CVector ycur = W * sol.x0_le_;
  CVector running = CVector::Zero(dim);
  CVector running_half = CVector::Zero(dim);
  bool half_set = false;
  for (std::size_t p = 0; p < P; ++p) {
    for (int i : le) y[p][0](i) = ycur(i);
    for (int j = 0; j < D; ++j) {
      const double h = nodes[p][j + 1] - nodes[p][j];
      for (int i : le) ycur(i) = std::exp(mu(i) * h) * (ycur(i) + J[p][j](i));
      for (int i : zero) running(i) += std::exp(-mu(i) * nodes[p][j]) * J[p][j](i);
      for (int i : le) y[p][j + 1](i) = ycur(i);
      if (!half_set && nodes[p][j + 1] >= 0.5 * opt.horizon) {
        running_half = running;
        half_set = true;
      }
    }
  }
  if (!zero.empty()) {
    double diff = 0.0, size = 0.0;
    for (int i : zero) {
      diff += std::abs(running(i) - running_half(i));
      size += std::abs(running(i));
    }
    sol.unbounded_ = diff > 1e-6 * (1.0 + size);
  }

  // backward sweep over sigma_+ from the tail integral at the horizon
  CVector yT = plus_tail(mu, W, plus, sol.N_, opt.horizon, opt.tail_tol, &sol.tail_length_);
  sol.y_horizon_ = ycur;
  for (int i : plus) sol.y_horizon_(i) = yT(i);
  ycur = yT;
  for (std::size_t p = P; p-- > 0;) {
    for (int i : plus) y[p][D](i) = ycur(i);
    for (int j = D; j-- > 0;) {
      const double h = nodes[p][j + 1] - nodes[p][j];
      for (int i : plus) ycur(i) = std::exp(-mu(i) * h) * ycur(i) - J[p][j](i);
      for (int i : plus) y[p][j](i) = ycur(i);
    }
  }

  double bmax = 0.0;
  for (std::size_t p = 0; p < P; ++p) {
    std::vector<CVector> xs;
    xs.reserve(static_cast<std::size_t>(D + 1));
    for (int j = 0; j <= D; ++j) {
      xs.push_back(V * y[p][j]);
      const double nx = l1(xs.back());
      bmax = std::max(bmax, sol.unbounded_ ? nx / (1.0 + nodes[p][j]) : nx);
    }
    sol.interp_.push_back(ChebyshevPiece(pieces[p].first, pieces[p].second, std::move(xs)));
  }
  sol.bound_c_ = bmax * (1.0 + 1e-3);
  return sol;
}

double PolyBoundedSolution::bound(double t) const {
  return unbounded_ ? bound_c_ * (1.0 + t) : bound_c_;
}

CVector PolyBoundedSolution::operator()(double t) const {
  if (t < 0.0) throw PreconditionViolated("PolyBoundedSolution: t must be >= 0");
  if (t <= horizon_) return interp_(t);
  return modal_beyond(t);
}

CVector PolyBoundedSolution::modal_beyond(double t) const {
  const CVector& mu = split_.eig.values;
  const CMatrix& W = split_.eig.inverse;
  CVector y = plus_tail(mu, W, split_.plus, N_, t, opt_.tail_tol);
  const CVector J = modal_integral(mu, W, split_.le, N_, horizon_, t, opt_.breakpoints);
  for (int i : split_.le) y(i) = std::exp(mu(i) * (t - horizon_)) * (y_horizon_(i) + J(i));
  return split_.eig.vectors * y;
}

std::vector<RealPartSign> Bk_classes(const OperatorA& A, int k) {
  const CVector mu = Bk_eigenvalue_formula(A.eigenvalues(), k);
  std::vector<RealPartSign> out;
  out.reserve(static_cast<std::size_t>(mu.size()));
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double re = mu(i).real();
    if (std::abs(re) <= kResonanceTol) out.push_back(RealPartSign::Zero);
    else out.push_back(re > 0.0 ? RealPartSign::Positive : RealPartSign::Negative);
  }
  return out;
}

SpectralSplit Bk_split(const OperatorA& A, int k) {
  if (!A.diagonalizable())
    throw NotDiagonalizable(A.eigenvector_condition(), "Bk_split: A is not diagonalizable");
  const auto classes = Bk_classes(A, k);
  return spectral_split(build_Bk(A, k), Bk_eigenbasis(A, k), classes);
}

CoefficientPtr solve_coefficient(const OperatorA& A, int k, PolyFunction N, const HomPolyMap& F0_le,
                                 GreenOptions opt) {
  if (k < 2) throw PreconditionViolated("solve_coefficient: k must be >= 2");
  if (F0_le.n() != A.n() || F0_le.k() != k)
    throw DimensionMismatch("solve_coefficient: initial datum has the wrong degree or dimension");
  SpectralSplit split = Bk_split(A, k);
  const CMatrix Bk = split.op;
  VecFunction Nv = [N](double t) { return N(t).coeffs(); };
  PolyBoundedSolution sol = solve_polybounded(Bk, std::move(split), Nv, F0_le.coeffs(), std::move(opt));
  return CoefficientPtr(new CoefficientSolution(std::make_shared<const OperatorA>(A), k, std::move(N),
                                                std::move(sol)));
}

HomPolyMap assemble_Nk(const std::vector<HomPolyMap>& F, const std::vector<HomPolyMap>& H, int k) {
  if (static_cast<int>(H.size()) <= k) throw MissingLowerOrder(k, "assemble_Nk: H_k missing");
  HomPolyMap out = H[static_cast<std::size_t>(k)];
  for (int j = 2; j <= k - 1; ++j) {
    if (static_cast<int>(F.size()) <= j || F[j].k() != j) {
      std::ostringstream os;
      os << "assemble_Nk: F_" << j << " missing";
      throw MissingLowerOrder(j, os.str());
    }
    const HomPolyMap& Hl = H[static_cast<std::size_t>(k - j + 1)];
    if (Hl.is_zero() || F[j].is_zero()) continue;
    out += derivative_apply(F[j], Hl);
  }
  return out;
}

HomPolyMap compute_Nk(std::span<const CoefficientPtr> F, const GeneratorSpec& h, int k, double t) {
  if (k < 2) throw PreconditionViolated("compute_Nk: k must be >= 2");
  const int n = h.n();
  std::vector<HomPolyMap> Fv(static_cast<std::size_t>(k));
  std::vector<HomPolyMap> Hv(static_cast<std::size_t>(k + 1));
  for (int j = 2; j <= k - 1; ++j) {
    const std::size_t idx = static_cast<std::size_t>(j - 2);
    if (idx >= F.size() || !F[idx] || F[idx]->k() != j) {
      std::ostringstream os;
      os << "compute_Nk: F_" << j << " is required for N_" << k;
      throw MissingLowerOrder(j, os.str());
    }
    Fv[j] = (*F[idx])(t);
  }
  for (int l = 2; l <= k; ++l) Hv[l] = h.H(l, t);
  (void)n;
  return assemble_Nk(Fv, Hv, k);
}

std::vector<HomPolyMap> CoefficientSet::at(double t) const {
  std::vector<HomPolyMap> out;
  out.reserve(F.size());
  for (const auto& f : F) out.push_back((*f)(t));
  return out;
}

CoefficientSet solve_coefficients(const GeneratorSpec& h, std::span<const HomPolyMap> F0_le, int K,
                                  const CoefficientOptions& opt) {
  const OperatorA& A = h.A();
  if (K <= 0) K = A.n0();
  if (!h.polynomial() && !h.autonomous())
    throw PreconditionViolated("solve_coefficients: time-dependent pushforward fields are not supported");
  CoefficientSet set;
  if (K < 2) return set;

  std::vector<double> horizon(static_cast<std::size_t>(K + 1), 0.0);
  horizon[K] = opt.horizon > 0.0 ? opt.horizon : 40.0 / A.m() + 10.0;
  for (int k = K; k >= 3; --k) {
    const CVector mu = Bk_eigenvalue_formula(A.eigenvalues(), k);
    double delta = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < mu.size(); ++i)
      if (mu(i).real() > kResonanceTol) delta = std::min(delta, mu(i).real());
    const double extra = std::isfinite(delta) ? std::log(100.0 / opt.tail_tol) / delta : 0.0;
    horizon[k - 1] = horizon[k] + extra;
  }

  auto hp = std::make_shared<const GeneratorSpec>(h);
  for (int k = 2; k <= K; ++k) {
    std::vector<CoefficientPtr> lower = set.F;
    PolyFunction N = [hp, lower, k](double t) {
      return compute_Nk(std::span<const CoefficientPtr>(lower), *hp, k, t);
    };
    HomPolyMap F0(A.n(), k);
    const std::size_t idx = static_cast<std::size_t>(k - 2);
    if (idx < F0_le.size() && F0_le[idx].n() == A.n()) {
      if (F0_le[idx].k() != k) throw DimensionMismatch("solve_coefficients: F0_le degree mismatch");
      F0 = F0_le[idx];
    }
    GreenOptions g;
    g.horizon = horizon[k];
    g.cheb_degree = opt.cheb_degree;
    g.max_piece = opt.max_piece;
    g.tail_tol = opt.tail_tol;
    g.breakpoints = h.breakpoints();
    g.rate = h.rate();
    set.F.push_back(solve_coefficient(A, k, std::move(N), F0, std::move(g)));
  }
  return set;
}

ResidualReport residual_check(const PolyBoundedSolution& sol, const VecFunction& N,
                              std::span<const double> t_grid) {
  constexpr double d = 1e-4;
  ResidualReport rep;
  rep.pass = true;
  for (double t : t_grid) {
    bool near_break = false;
    for (double b : sol.breakpoints()) near_break = near_break || std::abs(t - b) < 2.0 * d;
    if (near_break) continue;
    const CVector x = sol(t);
    CVector dx;
    if (t - d < 0.0) dx = (-3.0 * x + 4.0 * sol(t + d) - sol(t + 2.0 * d)) / (2.0 * d);
    else dx = (sol(t + d) - sol(t - d)) / (2.0 * d);
    const CVector r = dx - (sol.op() * x + N(t));
    ResidualSample s{t, l1(r), l1(x)};
    rep.max_residual = std::max(rep.max_residual, s.residual);
    rep.max_relative = std::max(rep.max_relative, s.residual / (1.0 + s.norm));
    rep.samples.push_back(s);
  }
  rep.pass = rep.max_relative <= 1e-6;
  return rep;
}

ResidualReport residual_check(const CoefficientSolution& sol, std::span<const double> t_grid) {
  const auto& Nf = sol.N_function();
  return residual_check(sol.solution(), [&Nf](double t) { return Nf(t).coeffs(); }, t_grid);
}

ResonanceReport resonance_report(const OperatorA& A, int k_max) {
  ResonanceReport rep;
  rep.n0 = A.n0();
  rep.k_max = std::max(k_max, A.n0());
  const CVector& lam = A.eigenvalues();
  for (int k = 2; k <= rep.k_max; ++k) {
    const auto basis = monomial_basis(A.n(), k);
    for (int r = 0; r < basis->monomials(); ++r) {
      const MultiIndex& m = basis->multi_index(r);
      cplx ml = 0.0;
      for (int i = 0; i < A.n(); ++i) ml += static_cast<double>(m[i]) * lam(i);
      for (int s = 0; s < A.n(); ++s) {
        const cplx v = ml - lam(s);
        if (std::abs(v) <= kResonanceTol) {
          rep.exact.push_back({k, m, s, v});
          rep.nonresonant = false;
          if (k > rep.n0) rep.none_above_n0 = false;
        }
        if (std::abs(v.real()) <= kResonanceTol) {
          rep.real_part.push_back({k, m, s, v});
          rep.real_nonresonant = false;
        }
      }
    }
  }
  return rep;
}

}  // namespace loewner
