#include "loewner/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "loewner/errors.hpp"

namespace loewner {

struct GeneratorSpec::Cache {
  std::mutex mu;
  std::map<int, HomPolyMap> taylor;  // autonomous pushforward only
};

GeneratorSpec GeneratorSpec::linear(const OperatorA& A) {
  GeneratorSpec g;
  g.A_ = std::make_shared<const OperatorA>(A);
  g.form_ = Form::PolynomialAutonomous;
  g.cache_ = std::make_shared<Cache>();
  return g;
}

GeneratorSpec GeneratorSpec::polynomial(const OperatorA& A, std::vector<HomPolyMap> H) {
  GeneratorSpec g = linear(A);
  for (auto& q : H) {
    if (q.n() != A.n()) throw DimensionMismatch("generator: term dimension differs from A");
    if (q.k() < 2) throw PreconditionViolated("generator: polynomial terms need degree >= 2");
    g.terms_.push_back({std::move(q), TimeFunction::constant()});
  }
  return g;
}

GeneratorSpec GeneratorSpec::time_dependent(const OperatorA& A, std::vector<PolyTerm> terms) {
  GeneratorSpec g = linear(A);
  g.form_ = Form::PolynomialTimeDependent;
  for (auto& t : terms) {
    if (t.H.n() != A.n()) throw DimensionMismatch("generator: term dimension differs from A");
    if (t.H.k() < 2) throw PreconditionViolated("generator: polynomial terms need degree >= 2");
  }
  g.terms_ = std::move(terms);
  return g;
}

GeneratorSpec GeneratorSpec::pushforward(const OperatorA& A, Pushforward field) {
  if (!field.f || !field.Df || !field.Q) throw PreconditionViolated("pushforward: missing callable");
  GeneratorSpec g = linear(A);
  g.form_ = Form::Pushforward;
  g.field_ = std::make_shared<const Pushforward>(std::move(field));
  return g;
}

bool GeneratorSpec::autonomous() const {
  if (form_ == Form::Pushforward) return field_->autonomous;
  for (const auto& t : terms_)
    if (!t.a.is_constant()) return false;
  return true;
}

int GeneratorSpec::max_degree() const {
  int k = 1;
  for (const auto& t : terms_) k = std::max(k, t.H.k());
  return k;
}

CVector GeneratorSpec::evaluate(const CVector& z, double t) const {
  if (z.size() != n()) throw DimensionMismatch("generator: point dimension differs from A");
  if (form_ == Form::Pushforward) {
    const CVector w = field_->f(z);
    const CMatrix J = field_->Df(z);
    Eigen::FullPivLU<CMatrix> lu(J);
    if (!lu.isInvertible()) throw SingularJacobian("pushforward: Df(z) is singular");
    return lu.solve(field_->Q(w, t));
  }
  CVector out = A_->entries() * z;
  for (const auto& term : terms_) {
    const cplx a = term.a(t);
    if (a != cplx(0.0)) out += a * term.H.evaluate(z);
  }
  return out;
}

CVector GeneratorSpec::remainder(const CVector& z, double t, int K) const {
  if (form_ != Form::Pushforward) {
    CVector out = CVector::Zero(n());
    for (const auto& term : terms_) {
      if (term.H.k() <= K) continue;
      const cplx a = term.a(t);
      if (a != cplx(0.0)) out += a * term.H.evaluate(z);
    }
    return out;
  }
  CVector out = evaluate(z, t) - A_->entries() * z;
  for (int k = 2; k <= K; ++k) out -= H(k, t).evaluate(z);
  return out;
}

HomPolyMap GeneratorSpec::H(int k, double t) const {
  if (k < 2) throw PreconditionViolated("generator: H_k needs k >= 2");
  if (form_ != Form::Pushforward) {
    HomPolyMap out(n(), k);
    for (const auto& term : terms_) {
      if (term.H.k() != k) continue;
      const cplx a = term.a(t);
      if (a != cplx(0.0)) out += a * term.H;
    }
    return out;
  }
  if (field_->autonomous) {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->taylor.find(k);
    if (it != cache_->taylor.end()) return it->second;
  }
  auto coeffs = taylor_extract([this, t](const CVector& z) { return evaluate(z, t); }, n(), k);
  HomPolyMap out = coeffs[k - 1];
  if (field_->autonomous) {
    std::lock_guard lock(cache_->mu);
    for (int d = 2; d <= k; ++d) cache_->taylor.emplace(d, coeffs[d - 1]);
  }
  return out;
}

std::vector<double> GeneratorSpec::breakpoints() const {
  std::vector<double> out;
  for (const auto& t : terms_) {
    auto b = t.a.breakpoints();
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double GeneratorSpec::rate() const {
  double r = 0.0;
  for (const auto& t : terms_) r = std::max(r, t.a.rate());
  return r;
}

ValidationReport validate(const GeneratorSpec& h, std::span<const double> radii,
                          int samples_per_sphere, std::span<const double> t_grid,
                          std::uint64_t seed, bool throw_on_violation) {
  if (samples_per_sphere < 1) throw PreconditionViolated("validate: samples must be >= 1");
  if (t_grid.empty()) throw PreconditionViolated("validate: empty t grid");
  for (double r : radii)
    if (!(r > 0.0 && r < 1.0)) throw PreconditionViolated("validate: radii must lie in (0, 1)");
  const int n = h.n();
  ValidationReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  rep.min_normalized = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    const auto pts = sphere_points(n, r, samples_per_sphere, seed);
    for (double t : t_grid) {
      SphereMinimum sm{r, t, std::numeric_limits<double>::infinity()};
      for (const auto& z : pts) {
        const double v = (z.adjoint() * h.evaluate(z, t))(0).real();
        if (v < sm.min_value) sm.min_value = v;
        if (v < rep.min_value) {
          rep.min_value = v;
          rep.witness = z;
          rep.witness_t = t;
        }
        rep.min_normalized = std::min(rep.min_normalized, v / (r * r));
      }
      rep.spheres.push_back(sm);
    }
  }
  rep.violation = rep.min_value < -kValidationSlack;

  const double eps = 1e-5;
  for (double t : t_grid) {
    const CVector zero = CVector::Zero(n);
    rep.origin_error = std::max(rep.origin_error, h.evaluate(zero, t).norm());
    CMatrix J(n, n);
    for (int j = 0; j < n; ++j) {
      CVector e = CVector::Zero(n);
      e(j) = eps;
      J.col(j) = (h.evaluate(e, t) - h.evaluate(-e, t)) / (2.0 * eps);
    }
    rep.jacobian_error = std::max(rep.jacobian_error, operator_norm(J - h.A().entries()));
  }
  rep.origin_ok = rep.origin_error <= 1e-6 && rep.jacobian_error <= 1e-6;

  if (rep.violation && throw_on_violation) {
    std::ostringstream os;
    os << "validate: Re<h(z,t), z> = " << rep.min_value << " < 0 at t = " << rep.witness_t
       << ", |z| = " << rep.witness.norm();
    throw GeneratorInvalid(rep.witness, rep.witness_t, rep.min_value, os.str());
  }
  return rep;
}

GeneratorSpec example_generator(cplx lambda, const TimeFunction& a) {
  if (!(lambda.real() >= 2.0)) {
    std::ostringstream os;
    os << "example_generator: Re lambda = " << lambda.real() << " < 2";
    throw ParameterOutOfRange(os.str());
  }
  if (!(a.sup_abs() <= 1.0 + 1e-15))
    throw ParameterOutOfRange("example_generator: need |a(t)| <= 1");
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = lambda;
  A(1, 1) = 1.0;
  return GeneratorSpec::time_dependent(analyze(A), {{HomPolyMap::monomial(2, {0, 2}, 0), a}});
}

GeneratorSpec monomial_generator(const OperatorA& A, const MultiIndex& m, int s, cplx a) {
  if (!A.diagonal()) throw PreconditionViolated("monomial_generator: A must be diagonal");
  if (static_cast<int>(m.size()) != A.n() || s < 0 || s >= A.n() - 1)
    throw ParameterOutOfRange("monomial_generator: need 0 <= s < n - 1 and |m| = n entries");
  for (int i = 0; i <= s; ++i)
    if (m[i] != 0) throw ParameterOutOfRange("monomial_generator: m_i must vanish for i <= s");
  const CVector& lam = A.eigenvalues();
  cplx ml = 0.0;
  for (int i = 0; i < A.n(); ++i) ml += static_cast<double>(m[i]) * lam(i);
  return GeneratorSpec::polynomial(A, {HomPolyMap::monomial(A.n(), m, s, a * (lam(s) - ml))});
}

QuadraticAdmissibility roper_suffridge_admissibility(double alpha, double beta, cplx lambda) {
  const double L = lambda.real();
  const double a2 = L - alpha - beta;
  const double a1 = -2.0 * beta;
  const double a0 = alpha + beta;
  auto q = [&](double x) { return (a2 * x + a1) * x + a0; };
  QuadraticAdmissibility out;
  out.q_min = q(0.0);
  out.argmin = 0.0;
  if (q(1.0) < out.q_min) {
    out.q_min = q(1.0);
    out.argmin = 1.0;
  }
  if (a2 > 0.0) {
    const double xv = -a1 / (2.0 * a2);
    if (xv > 0.0 && xv < 1.0 && q(xv) < out.q_min) {
      out.q_min = q(xv);
      out.argmin = xv;
    }
  }
  out.admissible = out.q_min >= 0.0;
  out.hypotheses_hold = alpha >= 0.0 && alpha <= L && beta >= 0.0 && beta <= 0.5 && alpha + beta <= L;
  return out;
}

namespace {

cplx extension_factor(const OneVarMap& f, double alpha, double beta, cplx z1) {
  return std::exp(alpha * f.log_f_over_z(z1) + beta * f.log_df(z1));
}

}  // namespace

CVector roper_suffridge_map(const OneVarMap& f, double alpha, double beta, const CVector& z) {
  if (z.size() != 2) throw DimensionMismatch("roper_suffridge_map: needs n = 2");
  CVector out(2);
  out(0) = f.f(z(0));
  out(1) = extension_factor(f, alpha, beta, z(0)) * z(1);
  return out;
}

CMatrix roper_suffridge_jacobian(const OneVarMap& f, double alpha, double beta, const CVector& z) {
  if (z.size() != 2) throw DimensionMismatch("roper_suffridge_jacobian: needs n = 2");
  const cplx G = extension_factor(f, alpha, beta, z(0));
  const cplx dG = G * (alpha * f.dlog_f_over_z(z(0)) + beta * f.dlog_df(z(0)));
  CMatrix J(2, 2);
  J << f.df(z(0)), 0.0, dG * z(1), G;
  return J;
}

CVector roper_suffridge_field(const OneVarMap& f, double alpha, double beta, cplx lambda,
                              const CVector& z) {
  const cplx p = f.p(z(0));
  const cplx dp = f.dp(z(0));
  CVector out(2);
  out(0) = z(0) * p;
  out(1) = z(1) * (lambda - alpha - beta + (alpha + beta) * p + beta * z(0) * dp);
  return out;
}

RoperSuffridgeGenerator roper_suffridge_generator(const OneVarMap& f, double alpha, double beta,
                                                  cplx lambda) {
  if (!(lambda.real() >= 1.0)) throw ParameterOutOfRange("roper_suffridge_generator: Re lambda < 1");
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = lambda;
  const OperatorA op = analyze(A);
  Pushforward pf;
  pf.f = [f, alpha, beta](const CVector& z) { return roper_suffridge_map(f, alpha, beta, z); };
  pf.Df = [f, alpha, beta](const CVector& z) { return roper_suffridge_jacobian(f, alpha, beta, z); };
  pf.Q = [A](const CVector& w, double) -> CVector { return A * w; };
  pf.autonomous = true;
  std::ostringstream os;
  os.precision(17);
  os << "{\"roper_suffridge\":{\"f\":\"" << f.name() << "\",\"alpha\":" << alpha
     << ",\"beta\":" << beta << ",\"lambda\":[" << lambda.real() << "," << lambda.imag() << "]}}";
  pf.recipe = os.str();
  return {GeneratorSpec::pushforward(op, std::move(pf)),
          roper_suffridge_admissibility(alpha, beta, lambda)};
}

OperatorA random_operator(Rng& rng, int n, double re_lo, double re_hi, bool diagonal) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    CMatrix A = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) A(i, i) = cplx(rng.uniform(re_lo, re_hi), rng.uniform(-1.0, 1.0));
    if (!diagonal) {
      const double off = 0.5 * re_lo / n;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) A(i, j) = off * rng.disc();
    }
    try {
      OperatorA op = analyze(A);
      if (op.m() >= 0.25 * re_lo && op.diagonalizable()) return op;
    } catch (const NotAccretive&) {
    }
  }
  throw PreconditionViolated("random_operator: could not draw an accretive matrix");
}

GeneratorSpec random_generator(Rng& rng, const OperatorA& A, const RandomGeneratorOptions& opt) {
  const int n = A.n();
  std::vector<PolyTerm> terms;
  std::vector<double> weight;
  for (int k = 2; k <= opt.max_degree; ++k) {
    for (int j = 0; j < opt.terms_per_degree; ++j) {
      HomPolyMap H(n, k);
      for (Eigen::Index i = 0; i < H.coeffs().size(); ++i)
        H.coeffs()(i) = rng.uniform() < 0.5 ? rng.complex_normal() : cplx(0.0);
      if (H.is_zero()) H.coeffs()(rng.integer(0, H.dim() - 1)) = 1.0;
      TimeFunction a = TimeFunction::constant();
      if (opt.time_dependent) {
        switch (rng.integer(0, 3)) {
          case 0:
            a = TimeFunction::constant(rng.disc());
            break;
          case 1:
            a = TimeFunction::exp_decay(rng.uniform(0.2, 2.0), std::polar(1.0, rng.uniform(0.0, 6.283185307179586)));
            break;
          case 2:
            a = TimeFunction::window(rng.uniform(0.5, 4.0), std::polar(1.0, rng.uniform(0.0, 6.283185307179586)));
            break;
          default:
            a = TimeFunction::oscillation(rng.uniform(-3.0, 3.0), std::polar(1.0, rng.uniform(0.0, 6.283185307179586)));
            break;
        }
      }
      weight.push_back(rng.uniform(0.2, 1.0));
      terms.push_back({std::move(H), a});
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) total += weight[i];
  const double budget = opt.fraction * A.m();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double share = budget * weight[i] / total;
    const double norm = poly_norm(terms[i].H) * std::max(terms[i].a.sup_abs(), 1e-300);
    terms[i].H *= share / norm;
  }
  if (!opt.time_dependent) {
    std::vector<HomPolyMap> H;
    for (auto& t : terms) H.push_back(t.a.scale() * t.H);
    return GeneratorSpec::polynomial(A, std::move(H));
  }
  return GeneratorSpec::time_dependent(A, std::move(terms));
}

}  // namespace loewner
