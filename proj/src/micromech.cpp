#include "sintermech/micromech.hpp"

#include <cmath>

namespace sintermech::micromech {

CellGeometry cell_geometry(double rho, double R0, double zeta) {
  CellGeometry g;
  g.rho_hat = rho;
  g.R0 = R0;
  g.zeta = zeta;
  g.R_cell = cell_side(rho, R0);
  g.h = block_height(rho, R0, zeta);
  g.a = g.R_cell - g.h;
  // a = 0 exactly at ρ̂ = π/4 with ζ = 1; keep rounding from flipping validity
  if (std::abs(g.a) <= 1e-14 * g.R_cell) g.a = 0.0;
  return g;
}

double geometric_limit_pressure(const CellGeometry& geom, double k) {
  if (!geom.valid()) {
    throw GeometryBreakdown("geometric_limit_pressure: invalid cell geometry (a = " +
                                std::to_string(geom.a) + ", h = " + std::to_string(geom.h) +
                                ") at relative density " + std::to_string(geom.rho_hat),
                            geom.rho_hat);
  }
  const double a = geom.a;
  const double h = geom.h;
  const double P = k * (3.0 * a + 0.5 * a * a / h + 0.5 * h);
  return P / geom.R_cell;
}

double compaction_pressure_mla_factored(double rho, double sigma_m) {
  detail::require_open_unit(rho, "compaction_pressure_mla_factored");
  const double s = detail::s_of(rho);
  return (25.0 + 530.0 * s - 719.0 * s * s) * sigma_m / (210.0 * std::sqrt(3.0) * s);
}

double mla_zero_density() {
  // positive root of 719 s² − 530 s − 25 = 0, mapped back through s
  const double s = (530.0 + std::sqrt(530.0 * 530.0 + 4.0 * 719.0 * 25.0)) / (2.0 * 719.0);
  return 1.0 - s * s * (4.0 - std::numbers::pi);
}

}  // namespace sintermech::micromech
