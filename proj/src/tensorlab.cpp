#include "sintermech/tensorlab.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "sintermech/error.hpp"

namespace sintermech::tensorlab {

Eigen::Matrix3d to_matrix(const SymTensor3& a) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = a(i, j);
  return m;
}

SymTensor3 from_matrix(const Eigen::Matrix3d& m) {
  SymTensor3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) r(i, j) = 0.5 * (m(i, j) + m(j, i));
  return r;
}

SymTensor3 log_strain_from_defgrad(const Eigen::Matrix3d& F) {
  const double J = F.determinant();
  if (!(J > 0.0)) {
    throw InvalidDeformation("log strain: det F = " + std::to_string(J) + " is not positive");
  }
  const Eigen::Matrix3d C = F.transpose() * F;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(C);
  if (eig.info() != Eigen::Success) {
    throw InvalidDeformation("log strain: eigendecomposition of C failed");
  }
  const Eigen::Vector3d lambda = eig.eigenvalues();
  if (lambda.minCoeff() < 1e-14) {
    throw InvalidDeformation("log strain: C is numerically singular (min eigenvalue " +
                             std::to_string(lambda.minCoeff()) + ")");
  }
  const Eigen::Matrix3d& V = eig.eigenvectors();
  const Eigen::Vector3d half_log = 0.5 * lambda.array().log().matrix();
  const Eigen::Matrix3d eps = V * half_log.asDiagonal() * V.transpose();
  return from_matrix(eps);
}

StressInvariants stress_invariants(const SymTensor3& sigma, double q_eps) {
  StressInvariants inv;
  inv.p = -trace(sigma) / 3.0;
  const SymTensor3 s = deviator(sigma);
  inv.q = std::sqrt(1.5 * dot(s, s));
  if (inv.q <= q_eps) {
    inv.degenerate = true;
    inv.theta_c = 0.0;
    inv.lode_argument = 0.0;
    return inv;
  }
  inv.lode_argument = 9.0 * trace_cube(s) / (2.0 * inv.q * inv.q * inv.q);
  // acos(cos 3Θ) loses half the digits at the meridians; the principal
  // values give Θ directly
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(to_matrix(s), Eigen::EigenvaluesOnly);
  const Eigen::Vector3d d = eig.eigenvalues();  // ascending
  inv.theta_c = std::atan2(std::sqrt(3.0) * (d(1) - d(0)), 2.0 * d(2) - d(1) - d(0));
  return inv;
}

}  // namespace sintermech::tensorlab
