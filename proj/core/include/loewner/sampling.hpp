#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "loewner/types.hpp"

namespace loewner {

/// Seeded generator with platform-independent uniform and normal draws
/// (std distributions are implementation-defined, the raw engine is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  ///< [0, 1)
  double uniform(double lo, double hi);
  double normal();
  int integer(int lo, int hi);  ///< inclusive
  cplx complex_normal();
  /// Uniform in the unit disc.
  cplx disc();
  /// Uniform on the sphere of radius r in C^n.
  CVector sphere(int n, double r);
  /// Uniform in the ball of radius r in C^n.
  CVector ball(int n, double r);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Radical inverse of i in the given prime base.
double radical_inverse(std::uint64_t i, int base);

/// `count` low-discrepancy points on the sphere of radius r in C^n: Halton
/// points in dimension 2n pushed through Box-Muller and normalized, followed
/// by the 4n axis points +-r e_j, +-i r e_j when count allows. `offset`
/// shifts the Halton index and acts as the seed.
std::vector<CVector> sphere_points(int n, double r, int count, std::uint64_t offset = 0);

}  // namespace loewner
