#pragma once

// Density-driven evolution of the yield-surface parameters p_c, c and M from
// a plane-strain upper-bound analysis of a unit cell of cylindrical grains
// and a linear contact-area model.
//
// The closed forms are templates so that the return mapping can
// differentiate them with forward-mode AD; they throw DomainError outside
// their range instead of returning NaN.

#include <cmath>
#include <numbers>
#include <string>

#include "sintermech/error.hpp"
#include "sintermech/params.hpp"
#include "sintermech/scalar.hpp"

namespace sintermech::micromech {

using matmodel::MaterialParams;

namespace detail {

inline void require_open_unit(double rho, const char* what) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw DomainError(std::string(what) + ": relative density " + std::to_string(rho) +
                      " outside (0, 1)");
  }
}

/// √((ρ̂ − 1)/(π − 4)), real on (0, 1].
template <class S>
S s_of(const S& rho) {
  using std::sqrt;
  return S(sqrt((1.0 - rho) / (4.0 - std::numbers::pi)));
}

}  // namespace detail

/// Unit-cell half side R = (R0/2)√(π/ρ̂).
template <class S>
S cell_side(const S& rho, double R0) {
  using std::sqrt;
  if (!(value_of(rho) > 0.0)) {
    throw DomainError("cell_side: relative density must be positive, got " +
                      std::to_string(value_of(rho)));
  }
  return S(0.5 * R0 * sqrt(std::numbers::pi / rho));
}

/// Deformable block height h = ζ R0 √(π(1 − ρ̂)/(ρ̂(4 − π))).
template <class S>
S block_height(const S& rho, double R0, double zeta) {
  using std::sqrt;
  detail::require_open_unit(value_of(rho), "block_height");
  return S(zeta * R0 * sqrt(std::numbers::pi * (1.0 - rho) / (rho * (4.0 - std::numbers::pi))));
}

struct CellGeometry {
  double rho_hat = 0.0;
  double R_cell = 0.0;
  double h = 0.0;
  double a = 0.0;  ///< contact half-length a = R − h; negative means breakdown
  double R0 = 0.0;
  double zeta = 1.0;

  bool valid() const { return a >= 0.0 && h > 0.0; }
};

CellGeometry cell_geometry(double rho, double R0, double zeta);

/// P/R with P = k(3a + a²/(2h) + h/2), the limit load of the assumed
/// collapse mechanism.  Diagnostic only; throws GeometryBreakdown when the
/// geometry is invalid.
double geometric_limit_pressure(const CellGeometry& geom, double k);

/// Plane-strain compaction curve with the √π prefactor, k = σ_m/√3.
template <class S>
S compaction_pressure_plane(const S& rho, double sigma_m) {
  using std::sqrt;
  constexpr double pi = std::numbers::pi;
  detail::require_open_unit(value_of(rho), "compaction_pressure_plane");
  const double k = sigma_m / std::sqrt(3.0);
  const S s = detail::s_of(rho);
  const S num = S(-8.0 + (12.0 + pi - 16.0 * rho) * s + 8.0 * rho);
  return S(k * std::sqrt(pi) * num / (8.0 * rho * (rho - 1.0)));
}

/// Modified limit-analysis compaction curve (block height scaled by ζ = 2.7),
/// evaluated literally.  Negative below ρ̂* ≈ 0.4756; flooring happens in
/// hardening_bundle.
template <class S>
S compaction_pressure_mla(const S& rho, double sigma_m) {
  constexpr double pi = std::numbers::pi;
  detail::require_open_unit(value_of(rho), "compaction_pressure_mla");
  const S s = detail::s_of(rho);
  const S num = S(-530.0 + (619.0 + 25.0 * pi - 719.0 * rho) * s + 530.0 * rho);
  return S(sigma_m * num / (210.0 * std::sqrt(3.0) * (rho - 1.0)));
}

/// Algebraically equivalent form (25 + 530s − 719s²)σ_m/(210√3 s).
double compaction_pressure_mla_factored(double rho, double sigma_m);

/// Density at which the modified closed form changes sign.
double mla_zero_density();

/// Normalized contact area (4π/12)(ρ̂ − ρ̂0)/(1 − ρ̂0), clamped at 0.
template <class S>
S contact_area(const S& rho, double rho0) {
  if (value_of(rho) <= rho0) return S(0.0);
  return S((4.0 * std::numbers::pi / 12.0) * (rho - rho0) / (1.0 - rho0));
}

template <class S>
S cohesion(const S& rho, double rho0, double sigma_m) {
  return S(sigma_m * contact_area(rho, rho0));
}

template <class S>
S bp_meridian_G(const S& phi, double m, double alpha) {
  using std::pow;
  return S((phi - pow(phi, m)) * (2.0 * (1.0 - alpha) * phi + alpha));
}

/// Pressure-sensitivity M from the pure-shear failure condition
/// q_s = σ_m A_c = c at p = 0.  Inputs are unsoftened; M never drops
/// below params.M_floor and is exactly M_floor when c = 0.
template <class S>
S friction_M(const S& p_c, const S& c, const MaterialParams& params) {
  using std::sqrt;
  if (value_of(p_c) + value_of(c) == 0.0) {
    throw DegenerateSurface("friction_M: p_c + c = 0");
  }
  if (!(value_of(p_c) > 0.0)) {
    throw DomainError("friction_M: p_c must be positive, got " + std::to_string(value_of(p_c)));
  }
  if (value_of(c) <= 0.0) return S(params.M_floor);
  const S phi = S(c / (p_c + c));
  const S G = bp_meridian_G(phi, params.m_bp, params.alpha_bp);
  if (!(value_of(G) > 0.0)) return S(params.M_floor);
  const S M = S(std::sqrt(3.0) * c / (p_c * 2.0 * sqrt(G)));
  return max_of(M, S(params.M_floor));
}

template <class S>
struct HardeningState {
  S p_c;  ///< hydrostatic compressive strength [MPa]
  S c;    ///< cohesion [MPa]
  S M;
  S A_c;
};

/// Unsoftened p_c = max(MLA(ρ̂), p_c_floor).
template <class S>
S floored_compaction_pressure(const S& rho, const MaterialParams& params) {
  return max_of(compaction_pressure_mla(rho, params.sigma_m), S(params.p_c_floor));
}

template <class S>
S friction_M(const S& rho, const MaterialParams& params) {
  const S pc = floored_compaction_pressure(rho, params);
  const S c = cohesion(rho, params.rho_hat0, params.sigma_m);
  return friction_M(pc, c, params);
}

/// All density and temperature dependent yield-surface parameters.
/// p_c and c are softened by f_T(T); M uses unsoftened values.
template <class S>
HardeningState<S> hardening_bundle(const S& rho, double T, const MaterialParams& params) {
  detail::require_open_unit(value_of(rho), "hardening_bundle");
  const double fT = matmodel::thermal_softening(T, params);
  const S pc_raw = compaction_pressure_mla(rho, params.sigma_m);
  const S pc0 = max_of(pc_raw, S(params.p_c_floor));
  const S A_c = contact_area(rho, params.rho_hat0);
  const S c0 = S(params.sigma_m * A_c);
  HardeningState<S> h;
  h.M = friction_M(pc0, c0, params);
  h.p_c = max_of(S(fT * pc_raw), S(params.p_c_floor));
  h.c = S(fT * c0);
  h.A_c = A_c;
  return h;
}

}  // namespace sintermech::micromech
