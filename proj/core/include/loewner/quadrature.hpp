#pragma once

#include <functional>
#include <vector>

#include "loewner/types.hpp"

namespace loewner {

using VecIntegrand = std::function<CVector(double)>;

struct QuadResult {
  CVector value;
  double error = 0.0;
  int evals = 0;
  bool converged = true;
};

/// Globally adaptive Gauss-Kronrod (7, 15) for vector-valued complex
/// integrands; stops when the summed error estimate is below
/// max(abs_tol, rel_tol |I|).
QuadResult gauss_kronrod(const VecIntegrand& f, double a, double b, double abs_tol,
                         double rel_tol = 1e-13, int max_intervals = 4000);

/// Same, with the interval pre-split at the given interior points.
QuadResult gauss_kronrod(const VecIntegrand& f, const std::vector<double>& cuts, double abs_tol,
                         double rel_tol = 1e-13, int max_intervals = 4000);

/// Chebyshev points of the second kind on [a, b], increasing.
std::vector<double> chebyshev_points(double a, double b, int degree);

/// Barycentric interpolant through values at chebyshev_points(a, b, degree).
class ChebyshevPiece {
 public:
  ChebyshevPiece(double a, double b, std::vector<CVector> values);
  double a() const { return a_; }
  double b() const { return b_; }
  CVector operator()(double t) const;
  const std::vector<CVector>& values() const { return values_; }

 private:
  double a_, b_;
  std::vector<double> nodes_;
  std::vector<CVector> values_;
};

/// Concatenation of pieces covering [front.a, back.b].
class PiecewiseChebyshev {
 public:
  void push_back(ChebyshevPiece piece);
  bool empty() const { return pieces_.empty(); }
  double begin() const { return pieces_.front().a(); }
  double end() const { return pieces_.back().b(); }
  bool covers(double t) const { return !empty() && t >= begin() && t <= end(); }
  CVector operator()(double t) const;
  const std::vector<ChebyshevPiece>& pieces() const { return pieces_; }

 private:
  std::vector<ChebyshevPiece> pieces_;
};

}  // namespace loewner
