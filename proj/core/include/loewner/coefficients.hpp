#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "loewner/generators.hpp"
#include "loewner/linalg_spectral.hpp"
#include "loewner/polyspace.hpp"
#include "loewner/quadrature.hpp"

namespace loewner {

using VecFunction = std::function<CVector(double)>;
using PolyFunction = std::function<HomPolyMap(double)>;

struct GreenOptions {
  /// Interpolants cover [0, horizon].
  double horizon = 40.0;
  int cheb_degree = 16;
  double max_piece = 0.5;
  /// Bound on the neglected part of the improper integral.
  double tail_tol = 1e-10;
  /// Breakpoints of N (pieces are split there).
  std::vector<double> breakpoints;
  /// Fastest time scale of N (pieces are at most 2 / rate long).
  double rate = 0.0;
};

/// Polynomially bounded solution of x' = L x + N(t) with P^<= x(0) = x0_le:
/// x(t) = e^{tL} x0_le + int_0^inf G_L(t - s) N(s) ds with G_L(t) = e^{tL} P^<=
/// for t >= 0 and -e^{tL} P^+ for t < 0.
///
/// Computed mode by mode in the eigenbasis of L: sigma_<= modes forward from
/// 0, sigma_+ modes backward from the horizon, whose value is the truncated
/// tail integral. Results are stored as piecewise Chebyshev interpolants;
/// times beyond the horizon fall back to direct quadrature.
class PolyBoundedSolution {
 public:
  CVector operator()(double t) const;

  const CMatrix& op() const { return L_; }
  const SpectralSplit& split() const { return split_; }
  const CVector& initial_le() const { return x0_le_; }
  /// The supplied datum was not in the range of P^<= and was projected.
  bool projected_initial() const { return projected_; }
  double horizon() const { return horizon_; }
  /// Length of the tail integral used at the horizon.
  double tail_length() const { return tail_length_; }
  /// sigma_0 nonempty and the running integral of P^0 N fails the Cauchy test.
  bool resonant_unbounded() const { return unbounded_; }
  /// |x(t)|_1 <= bound(t) on [0, horizon]; constant unless resonant_unbounded.
  int bound_degree() const { return unbounded_ ? 1 : 0; }
  double bound(double t) const;
  const std::vector<double>& breakpoints() const { return opt_.breakpoints; }
  const PiecewiseChebyshev& interpolant() const { return interp_; }

  friend PolyBoundedSolution solve_polybounded(const CMatrix& L, SpectralSplit split, VecFunction N,
                                               CVector x0_le, GreenOptions opt);

 private:
  CVector modal_beyond(double t) const;

  CMatrix L_;
  SpectralSplit split_;
  VecFunction N_;
  CVector x0_le_;
  GreenOptions opt_;
  bool projected_ = false;
  double horizon_ = 0.0;
  double tail_length_ = 0.0;
  bool unbounded_ = false;
  double bound_c_ = 0.0;
  PiecewiseChebyshev interp_;
  CVector y_horizon_;  // modal values at the horizon
};

PolyBoundedSolution solve_polybounded(const CMatrix& L, SpectralSplit split, VecFunction N,
                                      CVector x0_le, GreenOptions opt = {});

/// -int_t^inf e^{mu_i (t - u)} n_i(u) du for the sigma_+ modes listed in idx
/// (other entries zero), n = W N. Returns the value and sets the tail length.
CVector plus_tail(const CVector& mu, const CMatrix& W, const std::vector<int>& idx,
                  const VecFunction& N, double t, double tail_tol, double* length = nullptr);

/// Solution F_k of dF_k/dt = B_k F_k + N_k for one degree.
class CoefficientSolution {
 public:
  int k() const { return k_; }
  int n() const { return A_->n(); }
  const OperatorA& A() const { return *A_; }
  const CMatrix& Bk() const { return solution_.op(); }
  const SpectralSplit& split() const { return solution_.split(); }
  HomPolyMap F0_le() const { return HomPolyMap(n(), k_, solution_.initial_le()); }
  const PolyBoundedSolution& solution() const { return solution_; }

  HomPolyMap operator()(double t) const { return HomPolyMap(n(), k_, solution_(t)); }
  /// N_k(t) used to build this solution.
  HomPolyMap N(double t) const { return N_(t); }
  const PolyFunction& N_function() const { return N_; }

  bool resonant_unbounded() const { return solution_.resonant_unbounded(); }
  int bound_degree() const { return solution_.bound_degree(); }
  double bound(double t) const { return solution_.bound(t); }
  double horizon() const { return solution_.horizon(); }
  double tail_length() const { return solution_.tail_length(); }

  friend std::shared_ptr<const CoefficientSolution> solve_coefficient(
      const OperatorA& A, int k, PolyFunction N, const HomPolyMap& F0_le, GreenOptions opt);

 private:
  CoefficientSolution(std::shared_ptr<const OperatorA> A, int k, PolyFunction N,
                      PolyBoundedSolution sol)
      : A_(std::move(A)), k_(k), N_(std::move(N)), solution_(std::move(sol)) {}

  std::shared_ptr<const OperatorA> A_;
  int k_;
  PolyFunction N_;
  PolyBoundedSolution solution_;
};

using CoefficientPtr = std::shared_ptr<const CoefficientSolution>;

/// Real parts of <m, lambda> - lambda_s with |Re| <= 1e-10 count as zero.
inline constexpr double kResonanceTol = 1e-10;

/// Exact sign classification of the spectrum of B_k from the eigenvalue formula.
std::vector<RealPartSign> Bk_classes(const OperatorA& A, int k);

/// Spectral split of B_k built from the analytic eigenbasis.
SpectralSplit Bk_split(const OperatorA& A, int k);

/// Solve one degree; F0_le is projected onto range(P^<=) if needed.
CoefficientPtr solve_coefficient(const OperatorA& A, int k, PolyFunction N, const HomPolyMap& F0_le,
                                 GreenOptions opt);

/// H_k + sum_{j=2}^{k-1} DF_j(z) H_{k-j+1}(z^{k-j+1}); F[j] holds F_j and
/// H[l] holds H_l (lower entries unused).
HomPolyMap assemble_Nk(const std::vector<HomPolyMap>& F, const std::vector<HomPolyMap>& H, int k);

/// N_k(., t) from the lower-order solutions F_2..F_{k-1} (F[j-2] = F_j).
/// Throws MissingLowerOrder if one is absent.
HomPolyMap compute_Nk(std::span<const CoefficientPtr> F, const GeneratorSpec& h, int k, double t);

struct CoefficientSet {
  std::vector<CoefficientPtr> F;  ///< F[k-2] solves degree k
  int max_degree() const { return static_cast<int>(F.size()) + 1; }
  const CoefficientSolution& degree(int k) const { return *F.at(static_cast<std::size_t>(k - 2)); }
  /// F_2(t), ..., F_K(t)
  std::vector<HomPolyMap> at(double t) const;
};

struct CoefficientOptions {
  /// Horizon required for the highest degree; 0 means 40 / m(A) + 10.
  double horizon = 0.0;
  int cheb_degree = 16;
  double max_piece = 0.5;
  double tail_tol = 1e-10;
};

/// F_2 .. F_K for a polynomial generator (or an autonomous pushforward),
/// K = n0 by default. F0_le[k-2] is the prescribed datum for degree k
/// (missing entries mean 0). Lower degrees get longer horizons so that the
/// tail integrals of higher degrees stay on interpolated data.
CoefficientSet solve_coefficients(const GeneratorSpec& h, std::span<const HomPolyMap> F0_le = {},
                                  int K = 0, const CoefficientOptions& opt = {});

struct ResidualSample {
  double t = 0.0;
  double residual = 0.0;
  double norm = 0.0;
};

struct ResidualReport {
  std::vector<ResidualSample> samples;
  double max_residual = 0.0;
  double max_relative = 0.0;  ///< residual / (1 + |x|)
  bool pass = false;          ///< max_relative <= 1e-6
};

/// Central differences (step 1e-4, one-sided near 0) of x against L x + N;
/// points within 2e-4 of a breakpoint are skipped. Norms are l1 on coefficients.
ResidualReport residual_check(const PolyBoundedSolution& sol, const VecFunction& N,
                              std::span<const double> t_grid);
ResidualReport residual_check(const CoefficientSolution& sol, std::span<const double> t_grid);

struct ResonanceEntry {
  int k = 0;
  MultiIndex m;
  int s = 0;
  cplx value;
};

struct ResonanceReport {
  int k_max = 0;
  int n0 = 0;
  std::vector<ResonanceEntry> exact;      ///< <m,lambda> = lambda_s
  std::vector<ResonanceEntry> real_part;  ///< Re(<m,lambda> - lambda_s) = 0
  bool nonresonant = true;
  bool real_nonresonant = true;
  /// No exact resonance was found above n0.
  bool none_above_n0 = true;
};

ResonanceReport resonance_report(const OperatorA& A, int k_max);

}  // namespace loewner
