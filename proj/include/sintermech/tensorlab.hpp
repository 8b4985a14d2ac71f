#pragma once

// Symmetric second-order tensors in 3D, logarithmic strain and stress
// invariants.  Components are stored in the order 11, 22, 33, 12, 13, 23;
// shear slots hold tensor (not engineering) components.

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "sintermech/scalar.hpp"

namespace sintermech::tensorlab {

template <class S>
class BasicSymTensor3 {
 public:
  BasicSymTensor3() { c_.fill(S(0.0)); }
  BasicSymTensor3(S a11, S a22, S a33, S a12, S a13, S a23)
      : c_{a11, a22, a33, a12, a13, a23} {}

  static BasicSymTensor3 zero() { return {}; }
  static BasicSymTensor3 identity() {
    return {S(1.0), S(1.0), S(1.0), S(0.0), S(0.0), S(0.0)};
  }
  static BasicSymTensor3 diag(S a, S b, S c) {
    return {a, b, c, S(0.0), S(0.0), S(0.0)};
  }

  S& operator[](int k) { return c_[k]; }
  const S& operator[](int k) const { return c_[k]; }

  /// Matrix-style access with 0-based indices.
  const S& operator()(int i, int j) const { return c_[slot(i, j)]; }
  S& operator()(int i, int j) { return c_[slot(i, j)]; }

  const std::array<S, 6>& components() const { return c_; }

  BasicSymTensor3& operator+=(const BasicSymTensor3& o) {
    for (int k = 0; k < 6; ++k) c_[k] += o.c_[k];
    return *this;
  }
  BasicSymTensor3& operator-=(const BasicSymTensor3& o) {
    for (int k = 0; k < 6; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  template <class T>
  BasicSymTensor3& operator*=(const T& a) {
    for (int k = 0; k < 6; ++k) c_[k] *= a;
    return *this;
  }

  static constexpr int slot(int i, int j) {
    if (i == j) return i;
    const int lo = i < j ? i : j;
    const int hi = i < j ? j : i;
    return lo == 0 ? (hi == 1 ? 3 : 4) : 5;
  }

 private:
  std::array<S, 6> c_;
};

using SymTensor3 = BasicSymTensor3<double>;

template <class S>
BasicSymTensor3<S> operator+(BasicSymTensor3<S> a, const BasicSymTensor3<S>& b) {
  return a += b;
}
template <class S>
BasicSymTensor3<S> operator-(BasicSymTensor3<S> a, const BasicSymTensor3<S>& b) {
  return a -= b;
}
template <class S>
BasicSymTensor3<S> operator-(BasicSymTensor3<S> a) {
  for (int k = 0; k < 6; ++k) a[k] = -a[k];
  return a;
}
template <class S, class T>
BasicSymTensor3<S> operator*(BasicSymTensor3<S> a, const T& s) {
  for (int k = 0; k < 6; ++k) a[k] = a[k] * s;
  return a;
}
template <class S, class T>
BasicSymTensor3<S> operator*(const T& s, BasicSymTensor3<S> a) {
  for (int k = 0; k < 6; ++k) a[k] = s * a[k];
  return a;
}
template <class S, class T>
BasicSymTensor3<S> operator/(BasicSymTensor3<S> a, const T& s) {
  for (int k = 0; k < 6; ++k) a[k] = a[k] / s;
  return a;
}

/// Converts between scalar types, dropping derivatives when going to double.
template <class To, class From>
BasicSymTensor3<To> tensor_cast(const BasicSymTensor3<From>& a) {
  BasicSymTensor3<To> r;
  for (int k = 0; k < 6; ++k) r[k] = To(value_of(a[k]));
  return r;
}

template <class S>
S trace(const BasicSymTensor3<S>& a) {
  return S(a[0] + a[1] + a[2]);
}

template <class S>
BasicSymTensor3<S> deviator(const BasicSymTensor3<S>& a) {
  const S m = S(trace(a) / 3.0);
  BasicSymTensor3<S> d = a;
  d[0] -= m;
  d[1] -= m;
  d[2] -= m;
  return d;
}

/// Double contraction a : b.
template <class S>
S dot(const BasicSymTensor3<S>& a, const BasicSymTensor3<S>& b) {
  S r = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  r += 2.0 * (a[3] * b[3] + a[4] * b[4] + a[5] * b[5]);
  return r;
}

template <class S>
S norm(const BasicSymTensor3<S>& a) {
  using std::sqrt;
  return S(sqrt(dot(a, a)));
}

/// Matrix product a·b of two symmetric tensors that commute (used for
/// powers, where the result is symmetric).
template <class S>
BasicSymTensor3<S> square(const BasicSymTensor3<S>& a) {
  BasicSymTensor3<S> r;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      S s = a(i, 0) * a(0, j);
      s += a(i, 1) * a(1, j);
      s += a(i, 2) * a(2, j);
      r(i, j) = s;
    }
  }
  return r;
}

/// tr(a³) from the full matrix cube.
template <class S>
S trace_cube(const BasicSymTensor3<S>& a) {
  const BasicSymTensor3<S> a2 = square(a);
  return dot(a2, a);
}

template <class S>
S determinant(const BasicSymTensor3<S>& a) {
  return S(a[0] * (a[1] * a[2] - a[5] * a[5]) - a[3] * (a[3] * a[2] - a[5] * a[4]) +
           a[4] * (a[3] * a[5] - a[1] * a[4]));
}

Eigen::Matrix3d to_matrix(const SymTensor3& a);

/// Symmetric part of a 3x3 matrix.
SymTensor3 from_matrix(const Eigen::Matrix3d& m);

/// ½ log(FᵀF).  Throws InvalidDeformation when det F ≤ 0 or when an
/// eigenvalue of C falls below 1e-14.
SymTensor3 log_strain_from_defgrad(const Eigen::Matrix3d& F);

/// Default degeneracy threshold on q: 1e-10 times a characteristic stress
/// (the fully dense yield strength, 150 MPa).
inline constexpr double kDefaultQEps = 1e-10 * 150.0;

struct StressInvariants {
  double p = 0.0;        ///< mean pressure, compression positive
  double q = 0.0;        ///< von Mises equivalent stress
  double theta_c = 0.0;  ///< Lode angle in [0, π/3]
  bool degenerate = false;  ///< q ≤ q_eps: Lode angle undefined, reported as 0
  double lode_argument = 0.0;  ///< 9 tr(dev σ)³ / (2q³) before clamping
};

StressInvariants stress_invariants(const SymTensor3& sigma, double q_eps = kDefaultQEps);

}  // namespace sintermech::tensorlab
