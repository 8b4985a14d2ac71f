#pragma once

// Constitutive core: thermoelastic stress, sintering stress, effective
// stress, the seven-parameter BP yield function with its gradient, and the
// temperature laws (softening, viscosity, grain growth).
//
// Temperatures are in °C everywhere; conversion to Kelvin happens only inside
// the Arrhenius factors.  Stresses are in MPa, lengths in m.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sintermech/error.hpp"
#include "sintermech/micromech.hpp"
#include "sintermech/params.hpp"
#include "sintermech/scalar.hpp"
#include "sintermech/tensorlab.hpp"

namespace sintermech::matmodel {

using micromech::HardeningState;
using tensorlab::BasicSymTensor3;
using tensorlab::SymTensor3;

struct MaterialState {
  SymTensor3 eps_e;       ///< elastic log strain
  SymTensor3 eps_p;       ///< plastic log strain
  double rho_hat = 0.38;  ///< inelastic relative density
  double R_grain = 11.24e-6;  ///< grain radius [m]
  double T = 20.0;        ///< temperature [°C]

  /// Undeformed powder at the reference temperature.
  static MaterialState initial(const MaterialParams& params);

  SymTensor3 total_strain() const { return eps_e + eps_p; }
};

// ---------------------------------------------------------------------------
// Thermoelasticity

template <class S>
BasicSymTensor3<S> elastic_stress(const BasicSymTensor3<S>& eps_e, double T,
                                  const MaterialParams& params) {
  const double lambda = params.lame_lambda();
  const double mu = params.shear_modulus();
  const double thermal = params.bulk_modulus() * params.alpha0 * (T - params.T0);
  BasicSymTensor3<S> sigma = (2.0 * mu) * eps_e;
  const S vol = S(lambda * tensorlab::trace(eps_e) - thermal);
  sigma[0] += vol;
  sigma[1] += vol;
  sigma[2] += vol;
  return sigma;
}

/// Elastic free energy density ρψ_e [MPa]; elastic_stress is its derivative.
double elastic_energy(const SymTensor3& eps_e, double T, const MaterialParams& params);

// ---------------------------------------------------------------------------
// Sintering stress

/// (8π/3)(3/(4π))^(2/3) ≈ 3.2240.
inline const double kSinteringPrefactor =
    8.0 * std::numbers::pi / 3.0 * std::pow(3.0 / (4.0 * std::numbers::pi), 2.0 / 3.0);

/// Densities at or above this value are evaluated here (saturation).
inline constexpr double kSinteringSaturationDensity = 1.0 - 1e-9;

/// Laplace pressure γ_s·prefactor/(2R)·(ρ̂/(1−ρ̂))^(1/3) in MPa, using the
/// current grain diameter 2R as the length scale.
template <class S>
S sintering_stress(const S& rho, double R_grain, const MaterialParams& params,
                   bool* saturated = nullptr) {
  using std::pow;
  const double r = value_of(rho);
  if (!(r > 0.0)) {
    throw DomainError("sintering_stress: relative density must be positive, got " +
                      std::to_string(r));
  }
  const double scale = kSinteringPrefactor * params.gamma_s / (2.0 * R_grain) * 1e-6;
  if (saturated) *saturated = r >= kSinteringSaturationDensity;
  if (r >= kSinteringSaturationDensity) {
    const double cap = kSinteringSaturationDensity;
    return S(scale * std::pow(cap / (1.0 - cap), 1.0 / 3.0));
  }
  return S(scale * pow(rho / (1.0 - rho), 1.0 / 3.0));
}

struct PoreEnergy {
  double psi_pore = 0.0;  ///< [J/kg]
  double sigma_s = 0.0;   ///< [MPa]
};

/// Surface energy of spherical pores per unit solid mass and the resulting
/// sintering stress, σ_s = −ρ̂² ρ_fd ∂ψ_pore/∂ρ̂.
PoreEnergy pore_energy(double rho, double R_grain, const MaterialParams& params);

/// σ̂ = σ − σ_s I.
template <class S>
BasicSymTensor3<S> effective_stress(const BasicSymTensor3<S>& sigma, const S& sigma_s) {
  BasicSymTensor3<S> r = sigma;
  r[0] -= sigma_s;
  r[1] -= sigma_s;
  r[2] -= sigma_s;
  return r;
}

// ---------------------------------------------------------------------------
// BP yield function

/// Half-width of the meridian band outside which the yield function is
/// continued linearly.
inline constexpr double kMeridianClamp = 1e-6;

template <class S>
struct YieldPoint {
  S p;
  S q;
  S lode_x;  ///< cos 3Θ, clamped to [−1, 1]
  BasicSymTensor3<S> s;
  bool degenerate = false;
};

template <class S>
YieldPoint<S> yield_point(const BasicSymTensor3<S>& sigma_hat, double q_eps) {
  using std::sqrt;
  YieldPoint<S> y;
  y.p = S(-tensorlab::trace(sigma_hat) / 3.0);
  y.s = tensorlab::deviator(sigma_hat);
  const S ss = S(1.5 * tensorlab::dot(y.s, y.s));
  if (value_of(ss) <= q_eps * q_eps) {
    y.degenerate = true;
    y.q = S(std::sqrt(std::max(value_of(ss), 0.0)));
    y.lode_x = S(0.0);
    return y;
  }
  y.q = S(sqrt(ss));
  const S x = S(9.0 * tensorlab::trace_cube(y.s) / (2.0 * y.q * y.q * y.q));
  if (value_of(x) > 1.0) {
    y.lode_x = S(1.0);
  } else if (value_of(x) < -1.0) {
    y.lode_x = S(-1.0);
  } else {
    y.lode_x = x;
  }
  return y;
}

/// Deviatoric shape g = cos[βπ/6 − ⅓ cos⁻¹(γ cos 3Θ)], written in terms of
/// x = cos 3Θ.
template <class S>
S deviatoric_shape(const S& x, const MaterialParams& params) {
  using std::acos;
  using std::cos;
  return S(cos(params.beta_bp * std::numbers::pi / 6.0 - acos(params.gamma_bp * x) / 3.0));
}

template <class S>
S deviatoric_shape_dx(const S& x, const MaterialParams& params) {
  using std::acos;
  using std::sin;
  using std::sqrt;
  if (params.gamma_bp == 0.0) return S(0.0);
  const S u = S(params.beta_bp * std::numbers::pi / 6.0 - acos(params.gamma_bp * x) / 3.0);
  const S gx = S(params.gamma_bp * x);
  return S(-sin(u) * params.gamma_bp / (3.0 * sqrt(1.0 - gx * gx)));
}

/// Meridian part F(p) and dF/dΦ, continued linearly outside [δ, 1 − δ].
template <class S>
void meridian(const S& p, const HardeningState<S>& h, const MaterialParams& params, S& F,
              S& dF_dphi) {
  using std::pow;
  using std::sqrt;
  const double m = params.m_bp;
  const double a = params.alpha_bp;
  const S denom = S(h.p_c + h.c);
  const S phi = S((p + h.c) / denom);
  const double ph = value_of(phi);
  const bool inside = ph >= kMeridianClamp && ph <= 1.0 - kMeridianClamp;
  S pc;
  if (inside) {
    pc = phi;
  } else {
    // clamp point keeps its dependence on the hardening parameters only
    pc = S(ph < kMeridianClamp ? kMeridianClamp : 1.0 - kMeridianClamp);
  }
  const S G = micromech::bp_meridian_G(pc, m, a);
  const S root = S(sqrt(G));
  const S dG = S((1.0 - m * pow(pc, m - 1.0)) * (2.0 * (1.0 - a) * pc + a) +
                 (pc - pow(pc, m)) * 2.0 * (1.0 - a));
  const S Mpc = S(h.M * h.p_c);
  dF_dphi = S(-Mpc * dG / (2.0 * root));
  F = S(-Mpc * root);
  if (!inside) F += dF_dphi * (phi - pc);
}

/// Yield value ℱ(σ̂) in MPa.
template <class S>
S bp_yield(const BasicSymTensor3<S>& sigma_hat, const HardeningState<S>& h,
           const MaterialParams& params) {
  const YieldPoint<S> y = yield_point(sigma_hat, params.q_eps);
  S F, dF;
  meridian(y.p, h, params, F, dF);
  return S(F + y.q * deviatoric_shape(y.lode_x, params));
}

/// Raw derivative ∂ℱ/∂σ̂ (not normalized).  Purely volumetric when q ≤ q_eps.
template <class S>
BasicSymTensor3<S> bp_yield_derivative(const BasicSymTensor3<S>& sigma_hat,
                                       const HardeningState<S>& h,
                                       const MaterialParams& params) {
  const YieldPoint<S> y = yield_point(sigma_hat, params.q_eps);
  S F, dF_dphi;
  meridian(y.p, h, params, F, dF_dphi);
  const S dF_dp = S(dF_dphi / (h.p_c + h.c));

  BasicSymTensor3<S> N;
  const S vol = S(-dF_dp / 3.0);
  N[0] = vol;
  N[1] = vol;
  N[2] = vol;
  if (y.degenerate) return N;

  const S g = deviatoric_shape(y.lode_x, params);
  N += (1.5 * g / y.q) * y.s;
  if (params.gamma_bp != 0.0) {
    // x = 9 tr(s³)/(2q³):  dx/dσ = 27/(2q³) dev(s²) − 81 tr(s³)/(4q⁵) s
    const S q3 = S(y.q * y.q * y.q);
    const S t = tensorlab::trace_cube(y.s);
    const BasicSymTensor3<S> dev_s2 = tensorlab::deviator(tensorlab::square(y.s));
    const BasicSymTensor3<S> dx =
        (27.0 / (2.0 * q3)) * dev_s2 - (81.0 * t / (4.0 * q3 * y.q * y.q)) * y.s;
    N += (y.q * deviatoric_shape_dx(y.lode_x, params)) * dx;
  }
  return N;
}

/// Unit flow direction Q = ∂ℱ/∂σ̂ / ‖∂ℱ/∂σ̂‖.  Throws DegenerateDirection at
/// a stationary point.
template <class S>
BasicSymTensor3<S> bp_yield_gradient(const BasicSymTensor3<S>& sigma_hat,
                                     const HardeningState<S>& h,
                                     const MaterialParams& params) {
  const BasicSymTensor3<S> N = bp_yield_derivative(sigma_hat, h, params);
  const S n = tensorlab::norm(N);
  // relative to the meridian slope scale M p_c/(p_c + c)
  const double scale =
      1.0 + std::abs(value_of(h.M) * value_of(h.p_c) / (value_of(h.p_c) + value_of(h.c)));
  if (!(value_of(n) > 1e-12 * scale) || !std::isfinite(value_of(n))) {
    throw DegenerateDirection("bp_yield_gradient: yield function has no usable gradient");
  }
  return N / n;
}

// ---------------------------------------------------------------------------
// Temperature laws

inline double kelvin(double T_celsius) { return T_celsius + kKelvinOffset; }

/// η_v = η_v1 (R/R0)^w exp(Q_E/(R_g T)) in MPa·s.
double viscosity(double T, double R_grain, const MaterialParams& params);

/// Grain-boundary mobility M_gc0 exp(−Q_gc/(R_g T)).
double grain_boundary_mobility(double T, const MaterialParams& params);

/// Exact constant-temperature update of Ṙ = γ_b M_gc/(4R).
double grain_growth_step(double R_grain, double T, double dt, const MaterialParams& params);

struct DensityInfo {
  double rho_hat = 0.0;   ///< inelastic relative density
  double porosity = 0.0;  ///< void fraction
};

/// ρ̂ = ρ̂0 exp(−tr ε_p); porosity is 1 − ρ̂ exp(−tr ε_e) when the elastic
/// strain is supplied, 1 − ρ̂ otherwise.
DensityInfo density_from_plastic_strain(const SymTensor3& eps_p, const MaterialParams& params,
                                        const SymTensor3* eps_e = nullptr);

}  // namespace sintermech::matmodel
