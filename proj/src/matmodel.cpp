#include "sintermech/matmodel.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sintermech::matmodel {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid material parameter: " + what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

void require_absolute_temperature(double T, const char* what) {
  if (!(kelvin(T) > 0.0)) {
    throw DomainError(std::string(what) + ": temperature " + std::to_string(T) +
                      " °C is at or below absolute zero");
  }
}

}  // namespace

void MaterialParams::validate() const {
  require(finite_positive(E), "E must be positive");
  require(std::isfinite(nu) && nu > -1.0 && nu < 0.5, "nu must lie in (-1, 0.5)");
  require(std::isfinite(alpha0) && alpha0 >= 0.0, "alpha0 must be non-negative");
  require(std::isfinite(T0) && kelvin(T0) > 0.0, "T0 must be above absolute zero");
  require(finite_positive(sigma_m), "sigma_m must be positive");
  require(std::isfinite(m_bp) && m_bp > 1.0, "m_bp must exceed 1");
  require(std::isfinite(alpha_bp) && alpha_bp >= 0.0 && alpha_bp <= 2.0,
          "alpha_bp must lie in [0, 2]");
  require(std::isfinite(beta_bp) && beta_bp >= 0.0 && beta_bp <= 2.0,
          "beta_bp must lie in [0, 2]");
  require(std::isfinite(gamma_bp) && gamma_bp >= 0.0 && gamma_bp < 1.0,
          "gamma_bp must lie in [0, 1)");
  require(std::isfinite(rho_hat0) && rho_hat0 > 0.0 && rho_hat0 < 1.0,
          "rho_hat0 must lie in (0, 1)");
  require(finite_positive(rho_fd), "rho_fd must be positive");
  require(finite_positive(R0), "R0 must be positive");
  require(std::isfinite(gamma_s) && gamma_s >= 0.0, "gamma_s must be non-negative");
  require(std::isfinite(gamma_b) && gamma_b >= 0.0, "gamma_b must be non-negative");
  require(std::isfinite(M_gc0) && M_gc0 >= 0.0, "M_gc0 must be non-negative");
  require(std::isfinite(Q_gc) && Q_gc >= 0.0, "Q_gc must be non-negative");
  require(std::isfinite(Q_E) && Q_E >= 0.0, "Q_E must be non-negative");
  require(finite_positive(R_g), "R_g must be positive");
  require(finite_positive(eta_v1), "eta_v1 must be positive");
  require(std::isfinite(w), "w must be finite");
  require(finite_positive(T_C1), "T_C1 must be positive");
  require(std::isfinite(C_T) && C_T >= 0.0, "C_T must be non-negative");
  require(finite_positive(b1), "b1 must be positive");
  require(finite_positive(zeta), "zeta must be positive");
  require(chi == 0.0, "chi must be 0 (plastic heating is not modelled)");
  require(finite_positive(c_h), "c_h must be positive");
  require(finite_positive(k_th), "k_th must be positive");
  require(finite_positive(p_c_floor), "p_c_floor must be positive");
  require(finite_positive(M_floor), "M_floor must be positive");
  require(finite_positive(q_eps), "q_eps must be positive");
}

MaterialState MaterialState::initial(const MaterialParams& params) {
  MaterialState s;
  s.rho_hat = params.rho_hat0;
  s.R_grain = params.R0;
  s.T = params.T0;
  return s;
}

double elastic_energy(const SymTensor3& eps_e, double T, const MaterialParams& params) {
  const double tr = tensorlab::trace(eps_e);
  return 0.5 * params.lame_lambda() * tr * tr +
         params.shear_modulus() * tensorlab::dot(eps_e, eps_e) -
         params.bulk_modulus() * params.alpha0 * (T - params.T0) * tr;
}

PoreEnergy pore_energy(double rho, double R_grain, const MaterialParams& params) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw DomainError("pore_energy: relative density " + std::to_string(rho) +
                      " outside (0, 1)");
  }
  const double length = 2.0 * R_grain;
  PoreEnergy e;
  e.psi_pore = params.gamma_s / (params.rho_fd_si() * length) * 4.0 * std::numbers::pi *
               std::pow(3.0 * (1.0 - rho) / (4.0 * std::numbers::pi * rho), 2.0 / 3.0);
  e.sigma_s = sintering_stress(rho, R_grain, params);
  return e;
}

double viscosity(double T, double R_grain, const MaterialParams& params) {
  require_absolute_temperature(T, "viscosity");
  return params.eta_v1 * std::pow(R_grain / params.R0, params.w) *
         std::exp(params.Q_E / (params.R_g * kelvin(T)));
}

double grain_boundary_mobility(double T, const MaterialParams& params) {
  require_absolute_temperature(T, "grain_boundary_mobility");
  return params.M_gc0 * std::exp(-params.Q_gc / (params.R_g * kelvin(T)));
}

double grain_growth_step(double R_grain, double T, double dt, const MaterialParams& params) {
  if (!(dt >= 0.0)) throw DomainError("grain_growth_step: negative time step");
  if (dt == 0.0) return R_grain;
  const double rate = params.gamma_b * grain_boundary_mobility(T, params);
  return std::sqrt(R_grain * R_grain + 0.5 * rate * dt);
}

DensityInfo density_from_plastic_strain(const SymTensor3& eps_p, const MaterialParams& params,
                                        const SymTensor3* eps_e) {
  DensityInfo d;
  d.rho_hat = params.rho_hat0 * std::exp(-tensorlab::trace(eps_p));
  if (eps_e) {
    d.porosity = 1.0 - d.rho_hat * std::exp(-tensorlab::trace(*eps_e));
  } else {
    d.porosity = 1.0 - d.rho_hat;
  }
  return d;
}

}  // namespace sintermech::matmodel
