#include "loewner/onevar.hpp"

#include <cmath>
#include <numbers>

#include "loewner/errors.hpp"

namespace loewner {

namespace {

constexpr double kSmall = 1e-6;
constexpr int kRaySteps = 64;

// log g(z) continued from g(0) = 1 along the segment [0, z].
cplx ray_log(const std::function<cplx(cplx)>& g, cplx z, const char* what) {
  double arg = 0.0;
  cplx prev = 1.0;
  cplx last = 1.0;
  for (int j = 1; j <= kRaySteps; ++j) {
    const cplx v = g(z * (static_cast<double>(j) / kRaySteps));
    if (!(std::abs(v) > 1e-300) || !std::isfinite(std::abs(v)))
      throw BranchFailure(std::string(what) + " vanishes on the ray to the evaluation point");
    double d = std::arg(v / prev);
    arg += d;
    prev = v;
    last = v;
  }
  return {std::log(std::abs(last)), arg};
}

}  // namespace

OneVarMap OneVarMap::identity() {
  OneVarMap m;
  m.kind_ = Kind::Identity;
  m.name_ = "identity";
  return m;
}

OneVarMap OneVarMap::koebe() {
  OneVarMap m;
  m.kind_ = Kind::Koebe;
  m.name_ = "koebe";
  return m;
}

OneVarMap OneVarMap::custom(std::string name, std::function<cplx(cplx)> f,
                            std::function<cplx(cplx)> df, std::function<cplx(cplx)> d2f) {
  OneVarMap m;
  m.kind_ = Kind::Custom;
  m.name_ = std::move(name);
  m.f_ = std::move(f);
  m.df_ = std::move(df);
  m.d2f_ = std::move(d2f);
  return m;
}

cplx OneVarMap::f(cplx z) const {
  switch (kind_) {
    case Kind::Identity:
      return z;
    case Kind::Koebe:
      return z / ((1.0 - z) * (1.0 - z));
    case Kind::Custom:
      return f_(z);
  }
  return 0.0;
}

cplx OneVarMap::df(cplx z) const {
  switch (kind_) {
    case Kind::Identity:
      return 1.0;
    case Kind::Koebe:
      return (1.0 + z) / std::pow(1.0 - z, 3);
    case Kind::Custom:
      return df_(z);
  }
  return 0.0;
}

cplx OneVarMap::d2f(cplx z) const {
  switch (kind_) {
    case Kind::Identity:
      return 0.0;
    case Kind::Koebe:
      return (4.0 + 2.0 * z) / std::pow(1.0 - z, 4);
    case Kind::Custom:
      return d2f_(z);
  }
  return 0.0;
}

cplx OneVarMap::log_f_over_z(cplx z) const {
  switch (kind_) {
    case Kind::Identity:
      return 0.0;
    case Kind::Koebe:
      return -2.0 * std::log(1.0 - z);
    case Kind::Custom:
      if (std::abs(z) < kSmall) return 0.5 * d2f_(0.0) * z;
      return ray_log([this](cplx w) { return std::abs(w) < kSmall ? 1.0 + 0.5 * d2f_(0.0) * w : f_(w) / w; },
                     z, "f(z)/z");
  }
  return 0.0;
}

cplx OneVarMap::log_df(cplx z) const {
  switch (kind_) {
    case Kind::Identity:
      return 0.0;
    case Kind::Koebe:
      return std::log(1.0 + z) - 3.0 * std::log(1.0 - z);
    case Kind::Custom:
      return ray_log(df_, z, "f'(z)");
  }
  return 0.0;
}

cplx OneVarMap::dlog_f_over_z(cplx z) const {
  switch (kind_) {
    case Kind::Identity:
      return 0.0;
    case Kind::Koebe:
      return 2.0 / (1.0 - z);
    case Kind::Custom:
      if (std::abs(z) < kSmall) return 0.5 * d2f_(0.0);
      return df_(z) / f_(z) - 1.0 / z;
  }
  return 0.0;
}

cplx OneVarMap::dlog_df(cplx z) const {
  switch (kind_) {
    case Kind::Identity:
      return 0.0;
    case Kind::Koebe:
      return 1.0 / (1.0 + z) + 3.0 / (1.0 - z);
    case Kind::Custom:
      return d2f_(z) / df_(z);
  }
  return 0.0;
}

cplx OneVarMap::p(cplx z) const {
  switch (kind_) {
    case Kind::Identity:
      return 1.0;
    case Kind::Koebe:
      return (1.0 - z) / (1.0 + z);
    case Kind::Custom:
      if (std::abs(z) < kSmall) return 1.0 - 0.5 * d2f_(0.0) * z;
      return f_(z) / (z * df_(z));
  }
  return 0.0;
}

cplx OneVarMap::dp(cplx z) const {
  switch (kind_) {
    case Kind::Identity:
      return 0.0;
    case Kind::Koebe:
      return -2.0 / ((1.0 + z) * (1.0 + z));
    case Kind::Custom: {
      if (std::abs(z) < kSmall) return -0.5 * d2f_(0.0);
      const cplx f = f_(z), d1 = df_(z), d2 = d2f_(z);
      return (z * d1 * d1 - f * d1 - z * f * d2) / ((z * d1) * (z * d1));
    }
  }
  return 0.0;
}

}  // namespace loewner
