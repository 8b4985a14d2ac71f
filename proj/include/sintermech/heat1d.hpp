#pragma once

// One-dimensional transient conduction through the thickness of a green
// body, ρ c_h Ṫ = k ∂²T/∂x², with prescribed face temperatures, and the
// one-way coupled column of material points it drives.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sintermech/integrator.hpp"
#include "sintermech/params.hpp"
#include "sintermech/records.hpp"

namespace sintermech::heat1d {

using matmodel::MaterialParams;

struct ThermalGrid {
  double length = 0.0;         ///< [m]
  std::vector<double> T;       ///< node temperatures [°C]
  std::vector<double> rho_hat; ///< per-node relative density
  double rho_fd = 2375.0;      ///< fully dense density [kg/m³]
  double c_h = 900.0;          ///< [J/(kg K)]
  double k_th = 1.5;           ///< [W/(m K)]

  static ThermalGrid uniform(double length, int n_nodes, double T, double rho_hat,
                             const MaterialParams& params);

  int n_nodes() const { return static_cast<int>(T.size()); }
  double spacing() const { return length / (n_nodes() - 1); }
  /// Volumetric heat capacity ρ̂ ρ_fd c_h at node i [J/(m³ K)].
  double heat_capacity(int i) const { return rho_hat[i] * rho_fd * c_h; }
  void validate() const;
};

/// Piecewise-linear face temperature; constant outside the table.
class FiringSchedule {
 public:
  FiringSchedule() = default;
  explicit FiringSchedule(std::vector<std::pair<double, double>> points);

  static FiringSchedule constant(double T);
  /// CSV with mandatory header `time_s,temperature_C`.
  static FiringSchedule parse_csv(std::istream& in, const std::string& source = "schedule");
  static FiringSchedule load_csv(const std::string& path);

  double at(double t) const;
  double end_time() const { return points_.back().first; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  std::vector<std::pair<double, double>> points_;
};

/// Solves a tridiagonal system in place (Thomas algorithm); `lower[0]` and
/// `upper[n-1]` are ignored.  Throws NumericalError on a vanishing pivot.
std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      std::vector<double> rhs);

/// One backward-Euler step from t to t + dt with face temperatures taken
/// from the schedules at t + dt.
ThermalGrid conduction_step(const ThermalGrid& grid, const FiringSchedule& left,
                            const FiringSchedule& right, double t, double dt);

ThermalGrid conduction_step(const ThermalGrid& grid, const FiringSchedule& schedule, double t,
                            double dt);

/// Interior enthalpy per unit face area [J/m²] relative to 0 °C, using the
/// heat capacities of `grid`.
double interior_enthalpy(const ThermalGrid& grid);

/// Heat entering through both faces [J/m²] during the step old → next,
/// evaluated with the end-of-step gradients as the implicit scheme does.
double boundary_heat_input(const ThermalGrid& next, double dt);

struct ColumnSpec {
  double length = 0.02;     ///< [m]
  int n_nodes = 11;
  double T_initial = 20.0;  ///< [°C]
  double dt = 10.0;         ///< conduction step [s]
  double duration = 0.0;    ///< [s]; 0 runs to the end of the schedule
  double mech_max_dt = 10.0;
};

struct ColumnResult {
  std::vector<double> times;  ///< end of each conduction step (and 0)
  /// node_records[i][k] is node i at times[k]
  std::vector<std::vector<TimeSeriesRecord>> node_records;
};

/// Staggered run: conduction step, then a zero-stress mechanical update of
/// every node with its temperature interpolated across the step.
ColumnResult coupled_column_run(const MaterialParams& params, const ColumnSpec& spec,
                                const FiringSchedule& schedule,
                                const integrator::IntegratorSettings& settings);

}  // namespace sintermech::heat1d
