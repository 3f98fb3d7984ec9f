#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "loewner/linalg_spectral.hpp"
#include "loewner/polyspace.hpp"

namespace loewner {

struct ExpIdentityResiduals {
  double ab_a = 0.0;  ///< |e^{tA} (e^{tB_k} Q)((e^{-tA} z)^k) - Q(z^k)|
  double a_a = 0.0;   ///< |e^{tA} Q((e^{-tA} z)^k) - (e^{-tB_k} Q)(z^k)|
  double ab = 0.0;    ///< |e^{tA} (e^{tB_k} Q)(z^k) - Q((e^{tA} z)^k)|
  double max() const { return std::max({ab_a, a_a, ab}); }
};

/// Residuals of the three conjugation identities between e^{tA} and e^{tB_k},
/// each divided by 1 + |Q(z^k)|.
ExpIdentityResiduals exp_identities(const OperatorA& A, const HomPolyMap& Q, const CVector& z,
                                    double t);

/// Largest |mu - nu| after matching the numeric spectrum of build_Bk to the
/// eigenvalue formula (greedy nearest match).
double Bk_spectrum_mismatch(const OperatorA& A, int k);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  bool pass() const;
};

/// Suite names: exp, transition, semigroup, oracle, coefficients,
/// subordination, growth, spirallike. "all" runs every suite.
std::vector<std::string> suite_names();
std::vector<SuiteResult> run_suite(const std::string& name, std::uint64_t seed);

}  // namespace loewner
