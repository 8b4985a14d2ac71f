#pragma once

// Material constants of the ceramic powder model.  Defaults are the
// calibrated values for a spray-dried aluminium-silicate stoneware powder;
// nu, alpha0, c_h and k_th have no calibrated source and are placeholders.

#include <cmath>

#include "sintermech/scalar.hpp"

namespace sintermech::matmodel {

inline constexpr double kKelvinOffset = 273.15;

struct MaterialParams {
  // Thermoelasticity
  double E = 5000.0;      ///< Young's modulus [MPa]
  double nu = 0.3;        ///< Poisson ratio (placeholder)
  double alpha0 = 6e-6;   ///< thermal expansion [1/K] (placeholder)
  double T0 = 20.0;       ///< reference temperature [°C]

  // Yield surface
  double sigma_m = 150.0;  ///< fully dense yield strength [MPa]
  double m_bp = 4.38;
  double alpha_bp = 1.0;
  double beta_bp = 0.0;
  double gamma_bp = 0.0;

  // Powder and sintering
  double rho_hat0 = 0.38;   ///< initial relative density
  double rho_fd = 2.375;    ///< fully dense mass density [g/cm³]
  double R0 = 11.24e-6;     ///< initial grain radius [m]
  double gamma_s = 1.10;    ///< surface energy [J/m²]
  double gamma_b = 1.10;    ///< grain-boundary energy [J/m²]
  double M_gc0 = 2.25;      ///< grain-boundary mobility coefficient [m²s/kg]
  double Q_gc = 354e3;      ///< grain coarsening activation energy [J/mol]
  double Q_E = 354e3;       ///< viscous activation energy [J/mol]
  double R_g = 8.314;       ///< gas constant [J/(mol K)]
  double eta_v1 = 1e-8;     ///< viscosity constant [MPa s]
  double w = 3.0;           ///< grain-size exponent of the viscosity

  // Thermal softening
  double T_C1 = 800.0;  ///< [°C]
  double C_T = 1e-4;
  double b1 = 0.9;

  double zeta = 2.7;  ///< correction factor on the block height
  double chi = 0.0;   ///< Quinney–Taylor coefficient; only 0 is supported

  // Heat conduction (placeholders)
  double c_h = 900.0;   ///< specific heat [J/(kg K)]
  double k_th = 1.5;    ///< thermal conductivity [W/(m K)]

  // Regularizations
  double p_c_floor = 1e-3;  ///< [MPa]
  double M_floor = 0.1;
  double q_eps = 1e-10 * 150.0;  ///< [MPa]

  double lame_lambda() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
  double shear_modulus() const { return E / (2.0 * (1.0 + nu)); }
  double bulk_modulus() const { return E / (3.0 * (1.0 - 2.0 * nu)); }

  /// Fully dense mass density in kg/m³.
  double rho_fd_si() const { return rho_fd * 1000.0; }

  /// Throws ConfigError naming the first violated range.
  void validate() const;
};

/// Multiplicative strength decay ⟨1 − T/T_C1⟩^b1 + C_T, T in °C.
inline double thermal_softening(double T, const MaterialParams& params) {
  const double base = 1.0 - T / params.T_C1;
  return (base > 0.0 ? std::pow(base, params.b1) : 0.0) + params.C_T;
}

}  // namespace sintermech::matmodel
