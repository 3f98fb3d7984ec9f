#include "loewner/sampling.hpp"

#include <cmath>
#include <numbers>

#include "loewner/errors.hpp"

namespace loewner {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::integer(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

cplx Rng::complex_normal() {
  const double a = normal();
  const double b = normal();
  return {a, b};
}

cplx Rng::disc() {
  const double r = std::sqrt(uniform());
  return std::polar(r, 2.0 * std::numbers::pi * uniform());
}

CVector Rng::sphere(int n, double r) {
  CVector z(n);
  for (int i = 0; i < n; ++i) z(i) = complex_normal();
  const double nz = z.norm();
  return nz > 0.0 ? CVector(z * (r / nz)) : sphere(n, r);
}

CVector Rng::ball(int n, double r) {
  const double rho = r * std::pow(uniform(), 1.0 / (2.0 * n));
  return sphere(n, rho);
}

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double out = 0.0;
  while (i > 0) {
    out += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return out;
}

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

std::vector<CVector> sphere_points(int n, double r, int count, std::uint64_t offset) {
  if (n < 1 || 2 * n > static_cast<int>(std::size(kPrimes)))
    throw PreconditionViolated("sphere_points: unsupported dimension");
  if (count < 1) throw PreconditionViolated("sphere_points: count must be >= 1");
  std::vector<CVector> out;
  const int axis = 4 * n <= count / 2 ? 4 * n : 0;
  for (int q = 0; q < count - axis; ++q) {
    const std::uint64_t idx = offset + static_cast<std::uint64_t>(q) + 1;
    CVector z(n);
    for (int i = 0; i < n; ++i) {
      double u1 = radical_inverse(idx, kPrimes[2 * i]);
      const double u2 = radical_inverse(idx, kPrimes[2 * i + 1]);
      if (u1 <= 0.0) u1 = 0.5 / static_cast<double>(idx + 1);
      const double rad = std::sqrt(-2.0 * std::log(u1));
      z(i) = cplx(rad * std::cos(2.0 * std::numbers::pi * u2), rad * std::sin(2.0 * std::numbers::pi * u2));
    }
    const double nz = z.norm();
    if (nz == 0.0) {
      z.setZero();
      z(0) = 1.0;
    } else {
      z /= nz;
    }
    out.push_back(r * z);
  }
  for (int a = 0; a < axis; ++a) {
    CVector z = CVector::Zero(n);
    const cplx dir[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    z(a / 4) = r * dir[a % 4];
    out.push_back(z);
  }
  return out;
}

}  // namespace loewner
