#pragma once

// Scalar helpers shared by the templated constitutive code.  Everything in
// the model is written once over a scalar type `S` that is either `double`
// or an Eigen forward-mode AutoDiffScalar; the integrator uses the latter to
// obtain exact Newton Jacobians.

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

namespace sintermech {

inline double value_of(double x) { return x; }

template <class Der>
double value_of(const Eigen::AutoDiffScalar<Der>& x) {
  return x.value();
}

/// Same value, all derivatives dropped.
template <class S>
S constant_like(const S& /*shape*/, double v) {
  return S(v);
}

template <class S>
S max_of(const S& a, const S& b) {
  return value_of(a) >= value_of(b) ? a : b;
}

template <class S>
S min_of(const S& a, const S& b) {
  return value_of(a) <= value_of(b) ? a : b;
}

template <int N>
using AdScalar = Eigen::AutoDiffScalar<Eigen::Matrix<double, N, 1>>;

}  // namespace sintermech
