#pragma once

// Time integration of the Perzyna visco-plastic law and material-point
// drivers (arbitrary load programs, free-sintering dilatometer, oedometric
// die pressing).
//
// A step is an elastic predictor followed, when ℱ(σ̂_trial) > 0, by a fully
// implicit solve of
//
//   Δε_p − Δλ Q(σ̂) = 0,    ⟨ℱ(σ̂)⟩ − (η_v/Δt) Δλ = 0
//
// for (Δε_p, Δλ), where σ̂, ρ̂ and the hardening parameters are evaluated at
// the end of the step.  The Jacobian comes from forward-mode AD.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "sintermech/matmodel.hpp"
#include "sintermech/records.hpp"

namespace sintermech::integrator {

using matmodel::MaterialParams;
using matmodel::MaterialState;
using tensorlab::SymTensor3;

using Matrix6 = Eigen::Matrix<double, 6, 6>;

struct IntegratorSettings {
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  int substep_max_levels = 20;
  double dt_initial = 1.0;  ///< [s]
  /// Constant viscosity [MPa·s] replacing the Arrhenius law (rate-independent
  /// pressing).
  std::optional<double> viscosity_override;
  /// When false the sintering stress is omitted from the effective stress.
  bool sintering_stress = true;

  void validate() const;
};

struct StepResult {
  MaterialState state;
  SymTensor3 sigma;
  SymTensor3 sigma_hat;
  double yield_value = 0.0;   ///< ℱ at the end of the step [MPa]
  double dlambda = 0.0;
  double dissipation = 0.0;   ///< σ̂·Δε_p [MPa]
  bool converged = false;
  bool plastic = false;
  int substeps_used = 1;
  int newton_iterations = 0;
  Matrix6 tangent = Matrix6::Zero();  ///< dσ/dΔε in stored-component form
};

/// Isotropic stiffness in stored-component form (σ_i = Σ C_ij ε_j).
Matrix6 elastic_stiffness(const MaterialParams& params);

/// Macaulay bracket smoothed quadratically over [0, band].
double smooth_macaulay(double F, double band);

/// Advances one material point by a total-strain increment over dt, ending
/// at temperature T_new.  Bisects the step recursively on Newton failure;
/// throws NonConvergence once substep_max_levels is exhausted.
StepResult return_map_step(const MaterialState& state, const SymTensor3& strain_increment,
                           double T_new, double dt, const MaterialParams& params,
                           const IntegratorSettings& settings);

// ---------------------------------------------------------------------------
// Load programs

struct ConstantTemperature {
  double T_C = 20.0;
};

/// Linear ramp starting from `start_C` (or the current temperature).
struct TemperatureRamp {
  std::optional<double> start_C;
  double rate_C_per_min = 0.0;
};

/// Piecewise-linear (time since segment start [s], T [°C]); held constant
/// outside the table.
struct TemperatureTable {
  std::vector<std::pair<double, double>> points;
};

using TemperatureSchedule = std::variant<ConstantTemperature, TemperatureRamp, TemperatureTable>;

/// Temperature at `t` seconds after segment start.
double temperature_at(const TemperatureSchedule& schedule, double t, double T_segment_start);

enum class ControlMode { StrainRate, Stress };

struct AxisControl {
  ControlMode mode = ControlMode::StrainRate;
  /// Strain rate [1/s] or the stress [MPa] to reach at the end of the segment.
  double value = 0.0;
};

struct LoadSegment {
  double duration = 0.0;  ///< [s]
  std::array<AxisControl, 6> control{};  ///< per stored component 11,22,33,12,13,23
  TemperatureSchedule temperature = TemperatureRamp{std::nullopt, 0.0};
  double max_dt = 1.0;  ///< [s]
  std::optional<double> viscosity_override;
  std::optional<bool> sintering_stress;
  std::string name;

  static LoadSegment strain_rate(double duration, const SymTensor3& rate);
  static LoadSegment stress_target(double duration, const SymTensor3& target);

  bool has_stress_control() const;
  void validate() const;
};

struct ProgramResult {
  std::vector<TimeSeriesRecord> records;
  MaterialState final_state;
};

/// Stress and yield value of a state without advancing it (zero increment).
StepResult evaluate_state(const MaterialState& state, const MaterialParams& params,
                          const IntegratorSettings& settings);

TimeSeriesRecord make_record(double time, const StepResult& step, const MaterialParams& params);

/// Runs one segment starting at absolute time t_start, appending a record
/// per accepted step.  `sigma` holds the stress at segment start and is
/// updated.  Stress-controlled components are met to 1e-8·σ_m by an outer
/// Newton loop on the unknown strain components.
void advance_segment(MaterialState& state, SymTensor3& sigma, const LoadSegment& segment,
                     double t_start, const MaterialParams& params,
                     const IntegratorSettings& settings, std::vector<TimeSeriesRecord>& out);

ProgramResult drive_program(const MaterialState& state0, const std::vector<LoadSegment>& program,
                            const MaterialParams& params, const IntegratorSettings& settings);

// ---------------------------------------------------------------------------
// Drivers

struct DilatometerOptions {
  double ramp_rate_C_per_min = 30.0;
  double T_start_C = 20.0;
  double T_max_C = 1200.0;
  double max_dt = 2.0;  ///< [s]
};

/// Zero-stress heating ramp (free sintering).
ProgramResult dilatometer_run(const MaterialParams& params, const DilatometerOptions& options,
                              const IntegratorSettings& settings);

struct PressOptions {
  double stroke_ratio = 12.6 / 22.0;  ///< ΔH/H0
  double strain_rate = 1e-2;          ///< axial compaction rate [1/s]
  double viscosity = 1e-12;           ///< constant viscosity while pressing [MPa·s]
  double T_C = 20.0;
  double max_dt = 0.5;
  double unload_duration = 10.0;      ///< [s]
  bool sintering_stress = false;
};

/// Uniaxial-strain (die) compaction to ln(1 − stroke_ratio) followed by
/// removal of the axial load at fixed lateral strain.
ProgramResult oedometric_press_run(const MaterialParams& params, const PressOptions& options,
                                   const IntegratorSettings& settings);

}  // namespace sintermech::integrator
