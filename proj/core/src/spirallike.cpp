#include "loewner/spirallike.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "loewner/errors.hpp"
#include "loewner/parallel.hpp"
#include "loewner/sampling.hpp"

namespace loewner {

namespace {

struct ModalSolve {
  HomPolyMap F;
  std::vector<int> kernel;  // resonant modes with solvable right side
  std::vector<ResonanceWitness> obstructions;
};

// B_k F + N = 0 in the eigenbasis of B_k; resonant modes get 0.
ModalSolve solve_degree(const OperatorA& A, int k, const HomPolyMap& N) {
  const Eigendecomposition eig = Bk_eigenbasis(A, k);
  const CVector c = eig.inverse * N.coeffs();
  const double scale = 1e-12 * (1.0 + N.coeffs().cwiseAbs().sum());
  CVector x = CVector::Zero(c.size());
  ModalSolve out;
  const auto basis = monomial_basis(A.n(), k);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const cplx mu = eig.values(i);
    if (std::abs(mu) > kResonanceTol) {
      x(i) = -c(i) / mu;
    } else if (std::abs(c(i)) <= scale) {
      out.kernel.push_back(static_cast<int>(i));
    } else {
      out.obstructions.push_back({basis->multi_index(static_cast<int>(i) / A.n()),
                                  static_cast<int>(i) % A.n(), mu});
    }
  }
  out.F = HomPolyMap(A.n(), k, eig.vectors * x);
  return out;
}

HomPolyMap kernel_vector(const OperatorA& A, int k, int mode) {
  const Eigendecomposition eig = Bk_eigenbasis(A, k);
  HomPolyMap Q(A.n(), k, eig.vectors.col(mode));
  Q *= 1.0 / poly_norm(Q);
  return Q;
}

[[noreturn]] void throw_obstruction(int k, std::vector<ResonanceWitness> w) {
  std::ostringstream os;
  os << "solve_spirallike: B_" << k << " F_" << k << " + N_" << k
     << " = 0 has no solution (resonant direction z^(";
  for (std::size_t i = 0; i < w.front().m.size(); ++i) os << (i ? "," : "") << w.front().m[i];
  os << ") e_" << w.front().s + 1 << ")";
  throw NoHolomorphicSolution(k, std::move(w), os.str());
}

}  // namespace

TruncatedMap TruncatedMap::identity(int n, int K) {
  TruncatedMap f;
  f.n = n;
  f.K = K;
  f.provenance = "identity";
  f.F.push_back(HomPolyMap::linear(CMatrix::Identity(n, n)));
  for (int k = 2; k <= K; ++k) f.F.emplace_back(n, k);
  return f;
}

CVector TruncatedMap::evaluate(const CVector& z) const {
  CVector out = CVector::Zero(n);
  for (const auto& Q : F)
    if (!Q.is_zero()) out += Q.evaluate(z);
  return out;
}

CMatrix TruncatedMap::jacobian(const CVector& z) const {
  CMatrix J = CMatrix::Zero(n, n);
  for (const auto& Q : F)
    if (!Q.is_zero()) J += Q.jacobian(z);
  return J;
}

TruncatedMap solve_spirallike(const GeneratorSpec& h, int K) {
  if (!h.autonomous()) throw PreconditionViolated("solve_spirallike: generator must be autonomous");
  if (K < 1) throw PreconditionViolated("solve_spirallike: K must be >= 1");
  const OperatorA& A = h.A();
  if (!A.diagonalizable())
    throw NotDiagonalizable(A.eigenvector_condition(), "solve_spirallike: A is not diagonalizable");
  TruncatedMap f = TruncatedMap::identity(A.n(), K);
  f.provenance = "solver";
  std::vector<HomPolyMap> Fv(static_cast<std::size_t>(K + 1));
  std::vector<HomPolyMap> Hv(static_cast<std::size_t>(K + 1));
  for (int l = 2; l <= K; ++l) Hv[l] = h.H(l, 0.0);
  for (int k = 2; k <= K; ++k) {
    const HomPolyMap N = assemble_Nk(Fv, Hv, k);
    ModalSolve ms = solve_degree(A, k, N);
    if (!ms.obstructions.empty()) throw_obstruction(k, std::move(ms.obstructions));
    for (int mode : ms.kernel) {
      f.unique = false;
      f.kernel.push_back({k, kernel_vector(A, k, mode)});
    }
    Fv[k] = ms.F;
    f.F[static_cast<std::size_t>(k - 1)] = ms.F;
  }
  return f;
}

SpirallikeResidualReport spirallike_residual(const TruncatedMap& f, const GeneratorSpec& h,
                                             std::span<const double> radii, int samples,
                                             std::uint64_t seed) {
  if (f.n != h.n()) throw DimensionMismatch("spirallike_residual: dimensions differ");
  SpirallikeResidualReport rep;
  const CMatrix& A = h.A().entries();
  for (double r : radii) {
    const auto pts = sphere_points(f.n, r, samples, seed);
    const auto vals = parallel_map<double>(pts.size(), [&](std::size_t i) {
      const CVector& z = pts[i];
      return (f.jacobian(z) * h.evaluate(z, 0.0) - A * f.evaluate(z)).norm();
    });
    const double mx = vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
    rep.radii.push_back(r);
    rep.residuals.push_back(mx);
    rep.max_residual = std::max(rep.max_residual, mx);
  }
  bool ok = true;
  for (std::size_t i = 0; i + 1 < rep.residuals.size(); ++i) {
    const double ratio = rep.residuals[i] > 0.0 ? rep.residuals[i + 1] / rep.residuals[i] : 0.0;
    const double expected = std::pow(rep.radii[i + 1] / rep.radii[i], f.K);
    rep.ratios.push_back(ratio);
    rep.expected.push_back(expected);
    ok = ok && ratio <= 4.0 * expected;
  }
  rep.decay_ok = ok || rep.max_residual <= 1e-12;
  return rep;
}

MapWithJacobian as_callable(const TruncatedMap& f) {
  return {[f](const CVector& z) { return f.evaluate(z); },
          [f](const CVector& z) { return f.jacobian(z); }};
}

MembershipReport spirallike_membership(const MapWithJacobian& f, const OperatorA& A,
                                       std::span<const double> t_grid, int samples,
                                       std::uint64_t seed) {
  const int n = A.n();
  Rng rng(seed);
  std::vector<CVector> zs;
  for (int i = 0; i < samples; ++i) zs.push_back(rng.ball(n, 0.8));
  const std::vector<double> ts(t_grid.begin(), t_grid.end());

  auto solve = [&](const CVector& z, double t) {
    MembershipPoint p;
    p.z = z;
    p.t = t;
    const CMatrix E = A.exp(-t);
    const CVector y = E * f.f(z);
    CVector w = E * z;
    CVector r = f.f(w) - y;
    double rn = r.norm();
    int it = 0;
    bool stuck = false;
    while (rn > 1e-9 && it < 50) {
      ++it;
      Eigen::FullPivLU<CMatrix> lu(f.Df(w));
      if (!lu.isInvertible()) {
        stuck = true;
        break;
      }
      const CVector d = lu.solve(r);
      double lam = 1.0;
      bool improved = false;
      for (int j = 0; j < 12; ++j, lam *= 0.5) {
        const CVector wc = w - lam * d;
        const CVector rc = f.f(wc) - y;
        if (rc.norm() < rn) {
          w = wc;
          r = rc;
          rn = rc.norm();
          improved = true;
          break;
        }
      }
      if (!improved) {
        stuck = true;
        break;
      }
    }
    p.w = w;
    p.residual = rn;
    p.iterations = it;
    if (stuck || rn > 1e-9) p.status = MembershipStatus::Inconclusive;
    else p.status = w.norm() < 1.0 ? MembershipStatus::Inside : MembershipStatus::Outside;
    return p;
  };

  const std::size_t total = zs.size() * ts.size();
  MembershipReport rep;
  rep.points = parallel_map<MembershipPoint>(total, [&](std::size_t i) {
    return solve(zs[i / ts.size()], ts[i % ts.size()]);
  });
  for (const auto& p : rep.points) {
    switch (p.status) {
      case MembershipStatus::Inside: ++rep.inside; break;
      case MembershipStatus::Outside: ++rep.outside; break;
      case MembershipStatus::Inconclusive: ++rep.inconclusive; break;
    }
  }
  rep.pass = rep.outside == 0;
  return rep;
}

MembershipReport spirallike_membership(const TruncatedMap& f, const OperatorA& A,
                                       std::span<const double> t_grid, int samples,
                                       std::uint64_t seed) {
  return spirallike_membership(as_callable(f), A, t_grid, samples, seed);
}

RoperSuffridgeExtension roper_suffridge_extend(const OneVarMap& f1, double alpha, double beta,
                                               cplx lambda, int K) {
  if (std::abs(f1.f(0.0)) > 1e-14 || std::abs(f1.df(0.0) - 1.0) > 1e-12)
    throw PreconditionViolated("roper_suffridge_extend: f must satisfy f(0) = 0, f'(0) = 1");
  if (K < 1) throw PreconditionViolated("roper_suffridge_extend: K must be >= 1");
  RoperSuffridgeExtension ext;
  ext.map.f = [f1, alpha, beta](const CVector& z) { return roper_suffridge_map(f1, alpha, beta, z); };
  ext.map.Df = [f1, alpha, beta](const CVector& z) {
    return roper_suffridge_jacobian(f1, alpha, beta, z);
  };
  ext.admissibility = roper_suffridge_admissibility(alpha, beta, lambda);
  const auto coeffs = taylor_extract(ext.map.f, 2, K);
  ext.taylor = TruncatedMap::identity(2, K);
  ext.taylor.provenance = "extension";
  for (int k = 2; k <= K; ++k) ext.taylor.F[static_cast<std::size_t>(k - 1)] = coeffs[k - 1];
  return ext;
}

NoncompactnessWitness noncompactness_witness(const OperatorA& A, double M, double h_scale) {
  if (!(M >= 0.0)) throw ParameterOutOfRange("noncompactness_witness: M must be >= 0");
  if (!(h_scale >= 0.0) || h_scale >= A.m())
    throw ParameterOutOfRange("noncompactness_witness: h_scale must lie in [0, m(A))");
  if (!A.diagonalizable())
    throw NotDiagonalizable(A.eigenvector_condition(), "noncompactness_witness: A is not diagonalizable");
  const int n = A.n();
  const int n0 = A.n0();
  int k0 = 0;
  for (int k = n0; k >= 2 && k0 == 0; --k) {
    const CVector mu = Bk_eigenvalue_formula(A.eigenvalues(), k);
    for (Eigen::Index i = 0; i < mu.size(); ++i)
      if (std::abs(mu(i)) <= kResonanceTol) {
        k0 = k;
        break;
      }
  }
  if (k0 == 0) {
    std::ostringstream os;
    os << "noncompactness_witness: A has no resonance of degree <= n0 = " << n0;
    throw NotResonant(os.str());
  }

  const Eigendecomposition eig = Bk_eigenbasis(A, k0);
  int kmode = -1, rmode = -1;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const bool res = std::abs(eig.values(i)) <= kResonanceTol;
    if (res && kmode < 0) kmode = static_cast<int>(i);
    if (!res && rmode < 0) rmode = static_cast<int>(i);
  }

  NoncompactnessWitness w;
  HomPolyMap Hk0(n, k0);
  if (h_scale > 0.0 && rmode >= 0) {
    Hk0 = kernel_vector(A, k0, rmode);
    Hk0 *= h_scale;
  }
  w.H.push_back(Hk0);
  w.kernel_vector = kernel_vector(A, k0, kmode);

  const int K = std::max(n0, k0);
  w.f = TruncatedMap::identity(n, K);
  w.f.provenance = "witness";
  w.f.unique = false;
  std::vector<HomPolyMap> Fv(static_cast<std::size_t>(K + 1));
  std::vector<HomPolyMap> Hv(static_cast<std::size_t>(K + 1));
  for (int l = 2; l <= K; ++l) Hv[l] = l == k0 ? Hk0 : HomPolyMap(n, l);
  for (int k = 2; k <= K; ++k) {
    const HomPolyMap N = assemble_Nk(Fv, Hv, k);
    ModalSolve ms = solve_degree(A, k, N);
    if (!ms.obstructions.empty()) throw_obstruction(k, std::move(ms.obstructions));
    if (k == k0) {
      const double shift = M + poly_norm(ms.F);
      ms.F += shift * w.kernel_vector;
    }
    for (int mode : ms.kernel) w.f.kernel.push_back({k, kernel_vector(A, k, mode)});
    Fv[k] = ms.F;
    w.f.F[static_cast<std::size_t>(k - 1)] = ms.F;
  }

  const GeneratorSpec h = witness_generator(A, w);
  const std::vector<double> radii{0.5, 0.25};
  const auto res = spirallike_residual(w.f, h, radii, 100);
  w.certificate.k0 = k0;
  w.certificate.norm_Fk0 = poly_norm(w.f.degree(k0));
  w.certificate.target = M;
  w.certificate.residual = res.max_residual;
  w.certificate.norm_ok = w.certificate.norm_Fk0 >= M * (1.0 - 1e-12);
  return w;
}

GeneratorSpec witness_generator(const OperatorA& A, const NoncompactnessWitness& w) {
  std::vector<HomPolyMap> H;
  for (const auto& Q : w.H)
    if (!Q.is_zero()) H.push_back(Q);
  return H.empty() ? GeneratorSpec::linear(A) : GeneratorSpec::polynomial(A, std::move(H));
}

}  // namespace loewner
