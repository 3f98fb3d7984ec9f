#pragma once

#include <functional>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "loewner/linalg_spectral.hpp"
#include "loewner/types.hpp"

namespace loewner {

using MultiIndex = std::vector<int>;

int degree(const MultiIndex& m);

/// All multi-indices of length n and degree k in graded lexicographic order,
/// largest first: z_1^k, z_1^{k-1} z_2, ..., z_n^k.
std::vector<MultiIndex> multi_indices(int n, int k);

/// C(n + k - 1, k)
int monomial_count(int n, int k);

/// Basis {z^m e_s} of P^k(C^n). Index of (m, s) is rank(m) * n + s, so the
/// output component varies fastest.
class MonomialBasis {
 public:
  MonomialBasis(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }
  int monomials() const { return static_cast<int>(indices_.size()); }
  int dim() const { return monomials() * n_; }

  const MultiIndex& multi_index(int rank) const { return indices_[rank]; }
  const std::vector<MultiIndex>& multi_indices() const { return indices_; }
  /// -1 if m is not a multi-index of this basis.
  int rank(const MultiIndex& m) const;
  int index(const MultiIndex& m, int s) const { return rank(m) * n_ + s; }
  int index(int rank, int s) const { return rank * n_ + s; }

 private:
  long long key(const MultiIndex& m) const;

  int n_;
  int k_;
  std::vector<MultiIndex> indices_;
  std::unordered_map<long long, int> lookup_;
};

/// Shared, immutable basis for (n, k); cached and safe to call concurrently.
std::shared_ptr<const MonomialBasis> monomial_basis(int n, int k);

/// Homogeneous polynomial mapping Q(z) = sum c[m,s] z^m e_s of degree k.
class HomPolyMap {
 public:
  HomPolyMap() = default;
  /// Zero map.
  HomPolyMap(int n, int k);
  HomPolyMap(int n, int k, CVector coeffs);

  static HomPolyMap monomial(int n, const MultiIndex& m, int s, cplx c = 1.0);
  /// The linear map z -> L z as an element of P^1.
  static HomPolyMap linear(const CMatrix& L);

  int n() const { return n_; }
  int k() const { return k_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }
  const MonomialBasis& basis() const { return *basis_; }
  const CVector& coeffs() const { return coeffs_; }
  CVector& coeffs() { return coeffs_; }

  cplx coefficient(const MultiIndex& m, int s) const;
  void set(const MultiIndex& m, int s, cplx c);
  bool is_zero() const;

  CVector evaluate(const CVector& z) const;
  /// DQ(z) w.
  CVector jacobian_apply(const CVector& z, const CVector& w) const;
  CMatrix jacobian(const CVector& z) const;

  HomPolyMap& operator+=(const HomPolyMap& other);
  HomPolyMap& operator-=(const HomPolyMap& other);
  HomPolyMap& operator*=(cplx c);

 private:
  int n_ = 0;
  int k_ = 0;
  std::shared_ptr<const MonomialBasis> basis_;
  CVector coeffs_;
};

HomPolyMap operator+(HomPolyMap a, const HomPolyMap& b);
HomPolyMap operator-(HomPolyMap a, const HomPolyMap& b);
HomPolyMap operator*(cplx c, HomPolyMap a);

/// z -> DF(z) W(z), a map of degree deg F + deg W - 1, built symbolically.
HomPolyMap derivative_apply(const HomPolyMap& F, const HomPolyMap& W);

/// z -> Q(M z).
HomPolyMap compose_linear(const HomPolyMap& Q, const CMatrix& M);

/// z -> L Q(z).
HomPolyMap left_multiply(const CMatrix& L, const HomPolyMap& Q);

/// Matrix of Q -> DQ(z) A z - A Q(z) on the monomial basis of P^k.
CMatrix build_Bk(const CMatrix& A, int k);
CMatrix build_Bk(const OperatorA& A, int k);

/// <m, lambda> - lambda_s for every basis element, in basis order.
CVector Bk_eigenvalue_formula(const CVector& lambda, int k);

/// Eigenbasis of B_k obtained by conjugating with the eigenvectors V of A:
/// column (m, s) is the coefficient vector of z -> V e_s prod (V^{-1} z)_i^{m_i}
/// with eigenvalue <m, lambda> - lambda_s.
Eigendecomposition Bk_eigenbasis(const OperatorA& A, int k);

/// Upper bound for the multilinear norm: sum of |c[m,s]|.
double poly_norm(const HomPolyMap& Q);

/// Sum of several degrees evaluated at z.
CVector evaluate_sum(std::span<const HomPolyMap> terms, const CVector& z);

using BatchMap = std::function<std::vector<CVector>(const std::vector<CVector>&)>;

inline constexpr double kTorusRadius = 0.4;
inline constexpr int kTorusPoints = 64;

/// Taylor coefficients of degrees 1..K of a holomorphic map by the trapezoid
/// rule on the torus |z_j| = rho. Result index d-1 holds degree d.
std::vector<HomPolyMap> taylor_extract(const BatchMap& f, int n, int K,
                                       double rho = kTorusRadius, int points = kTorusPoints);
std::vector<HomPolyMap> taylor_extract(const std::function<CVector(const CVector&)>& f, int n,
                                       int K, double rho = kTorusRadius,
                                       int points = kTorusPoints);

}  // namespace loewner
