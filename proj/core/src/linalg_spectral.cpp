#include "loewner/linalg_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr double kEigenPathCondition = 1e4;
constexpr Eigen::Index kEigenPathMaxDim = 24;

bool exactly_diagonal(const CMatrix& L) {
  for (Eigen::Index j = 0; j < L.cols(); ++j)
    for (Eigen::Index i = 0; i < L.rows(); ++i)
      if (i != j && L(i, j) != cplx(0.0)) return false;
  return true;
}

RVector singular_values(const CMatrix& M) {
  if (M.rows() <= 16) return Eigen::JacobiSVD<CMatrix>(M).singularValues();
  return Eigen::BDCSVD<CMatrix>(M).singularValues();
}

double column_normalized_condition(const CMatrix& V) {
  CMatrix W = V;
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    const double nrm = W.col(j).norm();
    if (nrm == 0.0) return std::numeric_limits<double>::infinity();
    W.col(j) /= nrm;
  }
  const RVector sv = singular_values(W);
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

void require_square(const CMatrix& L, const char* who) {
  if (L.rows() != L.cols() || L.rows() == 0) {
    std::ostringstream os;
    os << who << ": expected a non-empty square matrix, got " << L.rows() << "x" << L.cols();
    throw DimensionMismatch(os.str());
  }
}

CMatrix diagonal_exp(const CVector& values, double t) {
  CVector e(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) e(i) = std::exp(t * values(i));
  return e.asDiagonal();
}

}  // namespace

Eigendecomposition eigendecompose(const CMatrix& L) {
  require_square(L, "eigendecompose");
  Eigendecomposition out;
  const auto n = L.rows();
  if (exactly_diagonal(L)) {
    out.values = L.diagonal();
    out.vectors = CMatrix::Identity(n, n);
    out.inverse = CMatrix::Identity(n, n);
    out.condition = 1.0;
    return out;
  }
  Eigen::ComplexEigenSolver<CMatrix> solver(L, true);
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  out.condition = column_normalized_condition(out.vectors);
  if (std::isfinite(out.condition)) {
    out.inverse = out.vectors.partialPivLu().inverse();
  } else {
    out.inverse = CMatrix::Zero(n, n);
  }
  return out;
}

double operator_norm(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  return singular_values(M)(0);
}

bool is_normal(const CMatrix& M, double tol) {
  const CMatrix Ms = M.adjoint();
  return operator_norm(M * Ms - Ms * M) < tol;
}

CMatrix OperatorA::exp(double t) const {
  if (diagonal_) return diagonal_exp(eig_.values, t);
  if (eig_.condition <= kEigenPathCondition)
    return eig_.vectors * diagonal_exp(eig_.values, t) * eig_.inverse;
  return (t * entries_).exp();
}

OperatorA analyze(const CMatrix& matrix) {
  require_square(matrix, "analyze");
  OperatorA A;
  A.entries_ = matrix;
  A.diagonal_ = exactly_diagonal(matrix);
  A.normal_ = A.diagonal_ || is_normal(matrix);

  const CMatrix herm = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> hs(herm, Eigen::EigenvaluesOnly);
  A.m_ = hs.eigenvalues().minCoeff();
  if (!(A.m_ > 0.0)) {
    std::ostringstream os;
    os << "analyze: m(A) = " << A.m_ << " <= 0 (the Hermitian part is not positive definite)";
    throw NotAccretive(A.m_, os.str());
  }

  A.eig_ = eigendecompose(matrix);
  A.k_minus_ = std::numeric_limits<double>::infinity();
  A.k_plus_ = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < A.eig_.values.size(); ++i) {
    A.k_minus_ = std::min(A.k_minus_, A.eig_.values(i).real());
    A.k_plus_ = std::max(A.k_plus_, A.eig_.values(i).real());
  }
  // A ratio that is an integer up to rounding must not drop to the integer below.
  A.n0_ = static_cast<int>(std::floor(A.k_plus_ / A.m_ + 1e-10));
  A.n0_ = std::max(A.n0_, 1);
  return A;
}

CMatrix matrix_exp(const CMatrix& L, double t) {
  require_square(L, "matrix_exp");
  if (exactly_diagonal(L)) return diagonal_exp(L.diagonal(), t);
  // B_k has highly degenerate spectra; for large blocks the eigen attempt
  // costs three times the Pade path and usually fails the condition test.
  if (L.rows() > kEigenPathMaxDim) return (t * L).exp();
  Eigen::ComplexEigenSolver<CMatrix> solver(L, true);
  const CMatrix& V = solver.eigenvectors();
  if (column_normalized_condition(V) <= kEigenPathCondition) {
    return V * diagonal_exp(solver.eigenvalues(), t) * V.partialPivLu().inverse();
  }
  return (t * L).exp();
}

ExpNormReport exp_norm_certificates(const OperatorA& A, std::span<const double> t_grid) {
  if (t_grid.empty()) throw PreconditionViolated("exp_norm_certificates: empty t grid");
  ExpNormReport report;
  report.normal = A.normal();
  report.k_plus = A.k_plus();
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw PreconditionViolated("exp_norm_certificates: t must be >= 0");
    ExpNormSample s;
    s.t = t;
    s.norm = operator_norm(A.exp(t));
    s.bound = std::exp(t * A.k_plus());
    s.ratio = s.norm / s.bound;
    report.max_ratio = std::max(report.max_ratio, s.ratio);
    if (report.normal && std::abs(s.ratio - 1.0) > 1e-9) report.normal_equality_violated = true;
    report.samples.push_back(s);
  }
  return report;
}

namespace {

CVector gather(const CVector& values, const std::vector<int>& idx) {
  CVector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = values(idx[i]);
  return out;
}

CMatrix projector(const Eigendecomposition& eig, const std::vector<int>& idx) {
  const auto n = eig.values.size();
  CMatrix P = CMatrix::Zero(n, n);
  for (int i : idx) P.noalias() += eig.vectors.col(i) * eig.inverse.row(i);
  return P;
}

SpectralSplit assemble(const CMatrix& L, Eigendecomposition eig, std::vector<RealPartSign> classes) {
  SpectralSplit split;
  split.op = L;
  split.classes = std::move(classes);
  for (int i = 0; i < static_cast<int>(split.classes.size()); ++i) {
    switch (split.classes[i]) {
      case RealPartSign::Positive:
        split.plus.push_back(i);
        break;
      case RealPartSign::Zero:
        split.zero.push_back(i);
        split.le.push_back(i);
        break;
      case RealPartSign::Negative:
        split.le.push_back(i);
        break;
    }
  }
  split.eig = std::move(eig);
  split.P_plus = projector(split.eig, split.plus);
  split.P_le = projector(split.eig, split.le);
  split.P_zero = projector(split.eig, split.zero);
  return split;
}

}  // namespace

CVector SpectralSplit::sigma_plus() const { return gather(eig.values, plus); }
CVector SpectralSplit::sigma_le() const { return gather(eig.values, le); }
CVector SpectralSplit::sigma_zero() const { return gather(eig.values, zero); }

double SpectralSplit::min_positive_real_part() const {
  double out = std::numeric_limits<double>::infinity();
  for (int i : plus) out = std::min(out, eig.values(i).real());
  return out;
}

SpectralSplit spectral_split(const CMatrix& L) {
  Eigendecomposition eig = eigendecompose(L);
  if (!(eig.condition <= kDiagonalizableCondition)) {
    std::ostringstream os;
    os << "spectral_split: eigenvector condition number " << eig.condition << " exceeds 1e8";
    throw NotDiagonalizable(eig.condition, os.str());
  }
  const double floor = 1e-12 * (1.0 + operator_norm(L));
  std::vector<RealPartSign> classes;
  classes.reserve(static_cast<std::size_t>(eig.values.size()));
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double re = eig.values(i).real();
    if (std::abs(re) <= floor) {
      classes.push_back(RealPartSign::Zero);
    } else if (re >= kZeroRealPart) {
      classes.push_back(RealPartSign::Positive);
    } else if (re <= -kZeroRealPart) {
      classes.push_back(RealPartSign::Negative);
    } else {
      std::ostringstream os;
      os << "spectral_split: eigenvalue " << eig.values(i)
         << " has a real part inside the ambiguous band (" << floor << ", 1e-9)";
      throw ZeroBoundaryAmbiguous(eig.values(i), os.str());
    }
  }
  return assemble(L, std::move(eig), std::move(classes));
}

SpectralSplit spectral_split(const CMatrix& L, Eigendecomposition eig,
                             std::span<const RealPartSign> exact_classes) {
  require_square(L, "spectral_split");
  if (eig.values.size() != L.rows() || static_cast<Eigen::Index>(exact_classes.size()) != L.rows())
    throw DimensionMismatch("spectral_split: eigendata size does not match the operator");
  if (!(eig.condition <= kDiagonalizableCondition)) {
    std::ostringstream os;
    os << "spectral_split: eigenvector condition number " << eig.condition << " exceeds 1e8";
    throw NotDiagonalizable(eig.condition, os.str());
  }
  return assemble(L, std::move(eig),
                  std::vector<RealPartSign>(exact_classes.begin(), exact_classes.end()));
}

SplitResiduals split_residuals(const SpectralSplit& s) {
  const auto n = s.op.rows();
  const CMatrix I = CMatrix::Identity(n, n);
  SplitResiduals r;
  r.completeness = operator_norm(s.P_plus + s.P_le - I);
  r.orthogonality = operator_norm(s.P_plus * s.P_le);
  r.commutation = std::max(operator_norm(s.P_plus * s.op - s.op * s.P_plus),
                           operator_norm(s.P_le * s.op - s.op * s.P_le));
  r.idempotence = std::max(operator_norm(s.P_plus * s.P_plus - s.P_plus),
                           operator_norm(s.P_le * s.P_le - s.P_le));
  r.coupling = operator_norm(s.P_plus * s.op * s.P_le);
  r.zero_subprojection = operator_norm(s.P_le * s.P_zero - s.P_zero);
  return r;
}

}  // namespace loewner
