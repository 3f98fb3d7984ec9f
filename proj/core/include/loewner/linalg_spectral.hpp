#pragma once

#include <span>
#include <vector>

#include "loewner/types.hpp"

namespace loewner {

/// Conditioning above which an eigenvector basis is treated as defective.
inline constexpr double kDiagonalizableCondition = 1e8;
/// Real parts with magnitude below this are treated as zero when splitting spectra.
inline constexpr double kZeroRealPart = 1e-9;

/// Eigen-decomposition L = V diag(values) V^{-1} with the condition number of V
/// (columns normalized to unit length before measuring).
struct Eigendecomposition {
  CVector values;
  CMatrix vectors;
  CMatrix inverse;
  double condition = 1.0;
};

Eigendecomposition eigendecompose(const CMatrix& L);

/// Largest singular value (operator norm induced by the Euclidean norm on C^n).
double operator_norm(const CMatrix& M);

/// ||M M^* - M^* M|| < tol.
bool is_normal(const CMatrix& M, double tol = 1e-10);

/// The linear part A of a generator together with its spectral indices.
///
/// m(A) is the smallest eigenvalue of the Hermitian part (A + A^*)/2, which is
/// min Re<Az, z> over the unit sphere. k_-(A) and k_+(A) are the smallest and
/// largest real parts of the spectrum and n0 = floor(k_+ / m).
///
/// For an exactly diagonal input the eigenvalues are reported in coordinate
/// order and the eigenvector basis is the identity, so multi-indices in the
/// resonance analysis refer to the coordinate monomials z^m e_s.
class OperatorA {
 public:
  int n() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  const CVector& eigenvalues() const { return eig_.values; }
  const Eigendecomposition& eigen() const { return eig_; }

  double m() const { return m_; }
  double k_minus() const { return k_minus_; }
  double k_plus() const { return k_plus_; }
  int n0() const { return n0_; }

  bool diagonal() const { return diagonal_; }
  bool normal() const { return normal_; }
  bool diagonalizable() const { return eig_.condition <= kDiagonalizableCondition; }
  double eigenvector_condition() const { return eig_.condition; }
  /// Warning flag: the eigenvector matrix condition number exceeds 1e8.
  bool ill_conditioned() const { return !diagonalizable(); }

  /// e^{tA}, evaluated through the cached eigendecomposition when it is well
  /// conditioned.
  CMatrix exp(double t) const;

  friend OperatorA analyze(const CMatrix& matrix);

 private:
  OperatorA() = default;

  CMatrix entries_;
  Eigendecomposition eig_;
  double m_ = 0.0;
  double k_minus_ = 0.0;
  double k_plus_ = 0.0;
  int n0_ = 0;
  bool diagonal_ = false;
  bool normal_ = false;
};

/// Throws NotAccretive if m(A) <= 0 and DimensionMismatch for non-square input.
OperatorA analyze(const CMatrix& matrix);

/// e^{tL}. Exactly diagonal L is exponentiated entrywise; up to dimension 24
/// a well-conditioned eigenbasis (condition <= 1e4) is used when available,
/// otherwise scaling-and-squaring with a Pade approximant.
CMatrix matrix_exp(const CMatrix& L, double t);

struct ExpNormSample {
  double t = 0.0;
  double norm = 0.0;   ///< ||e^{tA}||
  double bound = 0.0;  ///< e^{t k_+(A)}
  double ratio = 0.0;  ///< norm / bound
};

struct ExpNormReport {
  bool normal = false;
  double k_plus = 0.0;
  std::vector<ExpNormSample> samples;
  double max_ratio = 0.0;
  /// Only meaningful for normal A: some |ratio - 1| exceeded 1e-9.
  bool normal_equality_violated = false;
};

ExpNormReport exp_norm_certificates(const OperatorA& A, std::span<const double> t_grid);

enum class RealPartSign { Positive, Zero, Negative };

/// Spectral projections of L onto sigma_+ (Re > 0), sigma_<= (Re <= 0) and
/// sigma_0 (Re = 0), built from right/left eigenvector pairs.
struct SpectralSplit {
  CMatrix op;
  Eigendecomposition eig;
  std::vector<RealPartSign> classes;
  std::vector<int> plus;
  std::vector<int> le;
  std::vector<int> zero;
  CMatrix P_plus;
  CMatrix P_le;
  CMatrix P_zero;

  CVector sigma_plus() const;
  CVector sigma_le() const;
  CVector sigma_zero() const;
  /// min Re over sigma_+, +infinity if sigma_+ is empty.
  double min_positive_real_part() const;
};

/// Numeric classification: |Re| <= 1e-12 (1 + ||L||) is zero, Re >= 1e-9 positive,
/// Re <= -1e-9 negative. Anything in between raises ZeroBoundaryAmbiguous.
/// Throws NotDiagonalizable when the eigenvector condition exceeds 1e8.
SpectralSplit spectral_split(const CMatrix& L);

/// Split with a caller-supplied eigendecomposition and exact classification
/// (e.g. from the multi-index eigenvalue formula); the classification overrides
/// the numeric threshold.
SpectralSplit spectral_split(const CMatrix& L, Eigendecomposition eig,
                             std::span<const RealPartSign> exact_classes);

struct SplitResiduals {
  double completeness = 0.0;   ///< ||P_+ + P_<= - I||
  double orthogonality = 0.0;  ///< ||P_+ P_<=||
  double commutation = 0.0;    ///< max ||P L - L P|| over both projections
  double idempotence = 0.0;    ///< max ||P^2 - P|| over both projections
  double coupling = 0.0;       ///< ||P_+ L P_<=||
  double zero_subprojection = 0.0;  ///< ||P_<= P_0 - P_0||
};

SplitResiduals split_residuals(const SpectralSplit& split);

}  // namespace loewner
