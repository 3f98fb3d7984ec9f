#include "loewner/polyspace.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "loewner/errors.hpp"

namespace loewner {

int degree(const MultiIndex& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

namespace {

void fill_indices(int n, int remaining, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    fill_indices(n, remaining - e, pos + 1, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices(int n, int k) {
  if (n < 1 || k < 0) throw PreconditionViolated("multi_indices: need n >= 1 and k >= 0");
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(n), 0);
  fill_indices(n, k, 0, cur, out);
  return out;
}

int monomial_count(int n, int k) {
  long long c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - 1 + i) / i;
  return static_cast<int>(c);
}

MonomialBasis::MonomialBasis(int n, int k) : n_(n), k_(k), indices_(loewner::multi_indices(n, k)) {
  for (int r = 0; r < static_cast<int>(indices_.size()); ++r) lookup_.emplace(key(indices_[r]), r);
}

long long MonomialBasis::key(const MultiIndex& m) const {
  long long out = 0;
  for (int e : m) out = out * (k_ + 1) + e;
  return out;
}

int MonomialBasis::rank(const MultiIndex& m) const {
  if (static_cast<int>(m.size()) != n_ || degree(m) != k_) return -1;
  for (int e : m)
    if (e < 0) return -1;
  auto it = lookup_.find(key(m));
  return it == lookup_.end() ? -1 : it->second;
}

std::shared_ptr<const MonomialBasis> monomial_basis(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, k}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(n, k);
  return slot;
}

HomPolyMap::HomPolyMap(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 1) throw PreconditionViolated("HomPolyMap: need n >= 1 and k >= 1");
  basis_ = monomial_basis(n, k);
  coeffs_ = CVector::Zero(basis_->dim());
}

HomPolyMap::HomPolyMap(int n, int k, CVector coeffs) : HomPolyMap(n, k) {
  if (coeffs.size() != coeffs_.size()) {
    std::ostringstream os;
    os << "HomPolyMap: expected " << coeffs_.size() << " coefficients, got " << coeffs.size();
    throw DimensionMismatch(os.str());
  }
  coeffs_ = std::move(coeffs);
}

HomPolyMap HomPolyMap::monomial(int n, const MultiIndex& m, int s, cplx c) {
  HomPolyMap q(n, degree(m));
  q.set(m, s, c);
  return q;
}

HomPolyMap HomPolyMap::linear(const CMatrix& L) {
  const int n = static_cast<int>(L.rows());
  HomPolyMap q(n, 1);
  MultiIndex m(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < n; ++j) {
    m[j] = 1;
    for (int s = 0; s < n; ++s) q.coeffs_(q.basis_->index(m, s)) = L(s, j);
    m[j] = 0;
  }
  return q;
}

cplx HomPolyMap::coefficient(const MultiIndex& m, int s) const {
  const int r = basis_->rank(m);
  if (r < 0 || s < 0 || s >= n_) throw DimensionMismatch("HomPolyMap: multi-index not in basis");
  return coeffs_(basis_->index(r, s));
}

void HomPolyMap::set(const MultiIndex& m, int s, cplx c) {
  const int r = basis_->rank(m);
  if (r < 0 || s < 0 || s >= n_) throw DimensionMismatch("HomPolyMap: multi-index not in basis");
  coeffs_(basis_->index(r, s)) = c;
}

bool HomPolyMap::is_zero() const {
  for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
    if (coeffs_(i) != cplx(0.0)) return false;
  return true;
}

namespace {

void check_point(const HomPolyMap& q, const CVector& z, const char* who) {
  if (z.size() != q.n()) {
    std::ostringstream os;
    os << who << ": point has length " << z.size() << ", expected " << q.n();
    throw DimensionMismatch(os.str());
  }
}

// powers(i, p) = z_i^p for p = 0..k
Eigen::MatrixXcd power_table(const CVector& z, int k) {
  Eigen::MatrixXcd p(z.size(), k + 1);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    p(i, 0) = 1.0;
    for (int e = 1; e <= k; ++e) p(i, e) = p(i, e - 1) * z(i);
  }
  return p;
}

}  // namespace

CVector HomPolyMap::evaluate(const CVector& z) const {
  check_point(*this, z, "evaluate");
  const auto pw = power_table(z, k_);
  CVector out = CVector::Zero(n_);
  for (int r = 0; r < basis_->monomials(); ++r) {
    const MultiIndex& m = basis_->multi_index(r);
    cplx zm = 1.0;
    for (int i = 0; i < n_; ++i) zm *= pw(i, m[i]);
    for (int s = 0; s < n_; ++s) out(s) += coeffs_(r * n_ + s) * zm;
  }
  return out;
}

CMatrix HomPolyMap::jacobian(const CVector& z) const {
  check_point(*this, z, "jacobian");
  const auto pw = power_table(z, k_);
  CMatrix J = CMatrix::Zero(n_, n_);
  for (int r = 0; r < basis_->monomials(); ++r) {
    const MultiIndex& m = basis_->multi_index(r);
    for (int i = 0; i < n_; ++i) {
      if (m[i] == 0) continue;
      cplx d = static_cast<double>(m[i]);
      for (int j = 0; j < n_; ++j) d *= pw(j, j == i ? m[j] - 1 : m[j]);
      for (int s = 0; s < n_; ++s) J(s, i) += coeffs_(r * n_ + s) * d;
    }
  }
  return J;
}

CVector HomPolyMap::jacobian_apply(const CVector& z, const CVector& w) const {
  check_point(*this, w, "jacobian_apply");
  return jacobian(z) * w;
}

HomPolyMap& HomPolyMap::operator+=(const HomPolyMap& other) {
  if (other.n_ != n_ || other.k_ != k_) throw DimensionMismatch("HomPolyMap: degree mismatch in +");
  coeffs_ += other.coeffs_;
  return *this;
}

HomPolyMap& HomPolyMap::operator-=(const HomPolyMap& other) {
  if (other.n_ != n_ || other.k_ != k_) throw DimensionMismatch("HomPolyMap: degree mismatch in -");
  coeffs_ -= other.coeffs_;
  return *this;
}

HomPolyMap& HomPolyMap::operator*=(cplx c) {
  coeffs_ *= c;
  return *this;
}

HomPolyMap operator+(HomPolyMap a, const HomPolyMap& b) { return a += b; }
HomPolyMap operator-(HomPolyMap a, const HomPolyMap& b) { return a -= b; }
HomPolyMap operator*(cplx c, HomPolyMap a) { return a *= c; }

namespace {

// Scalar homogeneous polynomial on the monomials of a basis.
struct ScalarPoly {
  std::shared_ptr<const MonomialBasis> basis;
  CVector c;
};

ScalarPoly component(const HomPolyMap& Q, int s) {
  ScalarPoly p{monomial_basis(Q.n(), Q.k()), CVector(Q.basis().monomials())};
  for (int r = 0; r < Q.basis().monomials(); ++r) p.c(r) = Q.coeffs()(r * Q.n() + s);
  return p;
}

// out += c * z^shift * p, where out has degree deg(p) + |shift|.
void accumulate_shifted(const ScalarPoly& p, const MultiIndex& shift, cplx c,
                        const MonomialBasis& out_basis, CVector& out, int s) {
  const int n = out_basis.n();
  MultiIndex m(static_cast<std::size_t>(n));
  for (int r = 0; r < p.basis->monomials(); ++r) {
    if (p.c(r) == cplx(0.0)) continue;
    const MultiIndex& pm = p.basis->multi_index(r);
    for (int i = 0; i < n; ++i) m[i] = pm[i] + shift[i];
    out(out_basis.index(out_basis.rank(m), s)) += c * p.c(r);
  }
}

ScalarPoly multiply_linear(const ScalarPoly& p, const CVector& row) {
  const int n = p.basis->n();
  ScalarPoly out{monomial_basis(n, p.basis->k() + 1), CVector::Zero(monomial_count(n, p.basis->k() + 1))};
  MultiIndex m(static_cast<std::size_t>(n));
  for (int r = 0; r < p.basis->monomials(); ++r) {
    if (p.c(r) == cplx(0.0)) continue;
    const MultiIndex& pm = p.basis->multi_index(r);
    for (int j = 0; j < n; ++j) {
      if (row(j) == cplx(0.0)) continue;
      m = pm;
      ++m[j];
      out.c(out.basis->rank(m)) += p.c(r) * row(j);
    }
  }
  return out;
}

}  // namespace

HomPolyMap derivative_apply(const HomPolyMap& F, const HomPolyMap& W) {
  if (F.n() != W.n()) throw DimensionMismatch("derivative_apply: dimension mismatch");
  const int n = F.n();
  HomPolyMap out(n, F.k() + W.k() - 1);
  std::vector<ScalarPoly> w;
  for (int i = 0; i < n; ++i) w.push_back(component(W, i));
  MultiIndex shift(static_cast<std::size_t>(n));
  for (int r = 0; r < F.basis().monomials(); ++r) {
    const MultiIndex& m = F.basis().multi_index(r);
    for (int s = 0; s < n; ++s) {
      const cplx c = F.coeffs()(r * n + s);
      if (c == cplx(0.0)) continue;
      for (int i = 0; i < n; ++i) {
        if (m[i] == 0) continue;
        shift = m;
        --shift[i];
        accumulate_shifted(w[i], shift, c * static_cast<double>(m[i]), out.basis(), out.coeffs(), s);
      }
    }
  }
  return out;
}

HomPolyMap compose_linear(const HomPolyMap& Q, const CMatrix& M) {
  const int n = Q.n();
  if (M.rows() != n || M.cols() != n) throw DimensionMismatch("compose_linear: matrix size");
  HomPolyMap out(n, Q.k());
  for (int r = 0; r < Q.basis().monomials(); ++r) {
    bool any = false;
    for (int s = 0; s < n; ++s) any = any || Q.coeffs()(r * n + s) != cplx(0.0);
    if (!any) continue;
    const MultiIndex& m = Q.basis().multi_index(r);
    ScalarPoly prod{nullptr, CVector::Ones(1)};
    bool first = true;
    for (int i = 0; i < n; ++i) {
      for (int e = 0; e < m[i]; ++e) {
        const CVector row = M.row(i).transpose();
        if (first) {
          prod.basis = monomial_basis(n, 1);
          prod.c = CVector::Zero(n);
          MultiIndex u(static_cast<std::size_t>(n), 0);
          for (int j = 0; j < n; ++j) {
            u[j] = 1;
            prod.c(prod.basis->rank(u)) = row(j);
            u[j] = 0;
          }
          first = false;
        } else {
          prod = multiply_linear(prod, row);
        }
      }
    }
    for (int q = 0; q < prod.basis->monomials(); ++q)
      for (int s = 0; s < n; ++s) out.coeffs()(q * n + s) += Q.coeffs()(r * n + s) * prod.c(q);
  }
  return out;
}

HomPolyMap left_multiply(const CMatrix& L, const HomPolyMap& Q) {
  const int n = Q.n();
  if (L.rows() != n || L.cols() != n) throw DimensionMismatch("left_multiply: matrix size");
  HomPolyMap out(n, Q.k());
  const int M = Q.basis().monomials();
  for (int r = 0; r < M; ++r) out.coeffs().segment(r * n, n) = L * Q.coeffs().segment(r * n, n);
  return out;
}

CMatrix build_Bk(const CMatrix& A, int k) {
  if (A.rows() != A.cols()) throw DimensionMismatch("build_Bk: A must be square");
  if (k < 1) throw PreconditionViolated("build_Bk: k must be >= 1");
  const int n = static_cast<int>(A.rows());
  const auto basis = monomial_basis(n, k);
  const HomPolyMap Az = HomPolyMap::linear(A);
  CMatrix B(basis->dim(), basis->dim());
  for (int col = 0; col < basis->dim(); ++col) {
    HomPolyMap e(n, k);
    e.coeffs()(col) = 1.0;
    B.col(col) = (derivative_apply(e, Az) - left_multiply(A, e)).coeffs();
  }
  return B;
}

CMatrix build_Bk(const OperatorA& A, int k) { return build_Bk(A.entries(), k); }

CVector Bk_eigenvalue_formula(const CVector& lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  const auto basis = monomial_basis(n, k);
  CVector out(basis->dim());
  for (int r = 0; r < basis->monomials(); ++r) {
    const MultiIndex& m = basis->multi_index(r);
    cplx ml = 0.0;
    for (int i = 0; i < n; ++i) ml += static_cast<double>(m[i]) * lambda(i);
    for (int s = 0; s < n; ++s) out(r * n + s) = ml - lambda(s);
  }
  return out;
}

Eigendecomposition Bk_eigenbasis(const OperatorA& A, int k) {
  const int n = A.n();
  const auto basis = monomial_basis(n, k);
  Eigendecomposition out;
  out.values = Bk_eigenvalue_formula(A.eigenvalues(), k);
  const int N = basis->dim();
  if (A.diagonal()) {
    out.vectors = CMatrix::Identity(N, N);
    out.inverse = CMatrix::Identity(N, N);
    out.condition = 1.0;
    return out;
  }
  const CMatrix& V = A.eigen().vectors;
  const CMatrix& W = A.eigen().inverse;
  out.vectors.resize(N, N);
  out.inverse.resize(N, N);
  for (int col = 0; col < N; ++col) {
    HomPolyMap e(n, k);
    e.coeffs()(col) = 1.0;
    // eigenvector: V P(W z) for P = y^m e_s; coordinates: W Q(V y)
    out.vectors.col(col) = left_multiply(V, compose_linear(e, W)).coeffs();
    out.inverse.col(col) = left_multiply(W, compose_linear(e, V)).coeffs();
  }
  CMatrix Vn = out.vectors;
  for (int j = 0; j < N; ++j) Vn.col(j).normalize();
  const RVector sv = N <= 16 ? RVector(Eigen::JacobiSVD<CMatrix>(Vn).singularValues())
                             : RVector(Eigen::BDCSVD<CMatrix>(Vn).singularValues());
  out.condition = sv(0) / sv(sv.size() - 1);
  return out;
}

double poly_norm(const HomPolyMap& Q) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < Q.coeffs().size(); ++i) s += std::abs(Q.coeffs()(i));
  return s;
}

CVector evaluate_sum(std::span<const HomPolyMap> terms, const CVector& z) {
  CVector out = CVector::Zero(z.size());
  for (const auto& q : terms) out += q.evaluate(z);
  return out;
}

std::vector<HomPolyMap> taylor_extract(const BatchMap& f, int n, int K, double rho, int points) {
  if (n < 1 || K < 1 || points < 2 || !(rho > 0.0))
    throw PreconditionViolated("taylor_extract: bad parameters");
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= points;
  std::vector<CVector> nodes;
  nodes.reserve(static_cast<std::size_t>(total));
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  CVector roots(points);
  for (int j = 0; j < points; ++j)
    roots(j) = std::polar(1.0, 2.0 * std::numbers::pi * j / points);
  for (long long idx = 0; idx < total; ++idx) {
    CVector z(n);
    for (int i = 0; i < n; ++i) z(i) = rho * roots(digit[i]);
    nodes.push_back(std::move(z));
    for (int i = n - 1; i >= 0; --i) {
      if (++digit[i] < points) break;
      digit[i] = 0;
    }
  }
  const std::vector<CVector> values = f(nodes);
  if (static_cast<long long>(values.size()) != total)
    throw DimensionMismatch("taylor_extract: batch map returned wrong count");

  std::vector<HomPolyMap> out;
  for (int d = 1; d <= K; ++d) out.emplace_back(n, d);
  std::fill(digit.begin(), digit.end(), 0);
  for (long long idx = 0; idx < total; ++idx) {
    const CVector& v = values[static_cast<std::size_t>(idx)];
    for (int d = 1; d <= K; ++d) {
      HomPolyMap& Q = out[d - 1];
      for (int r = 0; r < Q.basis().monomials(); ++r) {
        const MultiIndex& m = Q.basis().multi_index(r);
        long long phase = 0;
        for (int i = 0; i < n; ++i) phase += static_cast<long long>(m[i]) * digit[i];
        const cplx w = std::conj(roots(static_cast<int>(phase % points)));
        for (int s = 0; s < n; ++s) Q.coeffs()(r * n + s) += w * v(s);
      }
    }
    for (int i = n - 1; i >= 0; --i) {
      if (++digit[i] < points) break;
      digit[i] = 0;
    }
  }
  for (int d = 1; d <= K; ++d) out[d - 1] *= 1.0 / (static_cast<double>(total) * std::pow(rho, d));
  return out;
}

std::vector<HomPolyMap> taylor_extract(const std::function<CVector(const CVector&)>& f, int n,
                                       int K, double rho, int points) {
  BatchMap batch = [&f](const std::vector<CVector>& zs) {
    std::vector<CVector> out;
    out.reserve(zs.size());
    for (const auto& z : zs) out.push_back(f(z));
    return out;
  };
  return taylor_extract(batch, n, K, rho, points);
}

}  // namespace loewner
