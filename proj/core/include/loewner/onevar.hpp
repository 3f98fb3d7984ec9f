#pragma once

#include <functional>
#include <string>

#include "loewner/types.hpp"

namespace loewner {

/// Normalized holomorphic function of one variable on the unit disc,
/// f(0) = 0, f'(0) = 1, with the logarithms needed for power extensions.
///
/// log(f/z) and log f' use the branch that is 0 at the origin, continued
/// along the ray [0, z]. Built-ins have closed forms; custom maps are
/// continued numerically and raise BranchFailure if a value vanishes.
class OneVarMap {
 public:
  static OneVarMap identity();
  /// z / (1 - z)^2
  static OneVarMap koebe();
  static OneVarMap custom(std::string name, std::function<cplx(cplx)> f,
                          std::function<cplx(cplx)> df, std::function<cplx(cplx)> d2f);

  const std::string& name() const { return name_; }

  cplx f(cplx z) const;
  cplx df(cplx z) const;
  cplx d2f(cplx z) const;

  cplx log_f_over_z(cplx z) const;
  cplx log_df(cplx z) const;
  /// d/dz log(f/z) and d/dz log f'.
  cplx dlog_f_over_z(cplx z) const;
  cplx dlog_df(cplx z) const;

  /// p = f / (z f'), p(0) = 1.
  cplx p(cplx z) const;
  cplx dp(cplx z) const;

 private:
  enum class Kind { Identity, Koebe, Custom };
  Kind kind_ = Kind::Identity;
  std::string name_;
  std::function<cplx(cplx)> f_, df_, d2f_;
};

}  // namespace loewner
