#pragma once

// Seeded generators and comparison helpers shared by the test suites.

#include <cmath>
#include <random>

#include <Eigen/Core>

#include "sintermech/tensorlab.hpp"

namespace testsupport {

using sintermech::tensorlab::SymTensor3;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  SymTensor3 tensor(double scale) {
    SymTensor3 t;
    for (int k = 0; k < 6; ++k) t[k] = uniform(-scale, scale);
    return t;
  }

  /// Deformation gradient near identity with det > 0.
  Eigen::Matrix3d defgrad(double spread) {
    Eigen::Matrix3d F;
    do {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) F(i, j) = (i == j ? 1.0 : 0.0) + uniform(-spread, spread);
    } while (F.determinant() <= 0.05);
    return F;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace testsupport
