#include "sintermech/commands.hpp"

#include <cmath>
#include <ostream>

#include "sintermech/csv.hpp"
#include "sintermech/error.hpp"
#include "sintermech/heat1d.hpp"
#include "sintermech/integrator.hpp"
#include "sintermech/matmodel.hpp"
#include "sintermech/micromech.hpp"
#include "sintermech/program_io.hpp"

namespace sintermech::commands {

namespace {

using config::RunConfig;

const std::vector<std::string> kRecordColumns = {
    "time_s",   "T_C",       "p_MPa",           "q_MPa",           "eps_axial", "eps_p_trace",
    "rho_hat", "R_grain_m", "yield_value_MPa", "dissipation_MPa", "substeps"};

std::vector<double> record_values(const TimeSeriesRecord& r) {
  return {r.time_s,  r.T_C,       r.p_MPa,           r.q_MPa,           r.eps_axial,
          r.eps_p_trace, r.rho_hat, r.R_grain_m, r.yield_value_MPa, r.dissipation_MPa,
          static_cast<double>(r.substeps)};
}

}  // namespace

CommandOutput cmd_compaction_curve(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto& p = cfg.params;
  const double k = p.sigma_m / std::sqrt(3.0);
  csv::Writer w(out);
  w.header({"rho_hat", "pc_plane_MPa", "pc_mla_MPa", "pc_geometric_MPa", "geometry_valid"});
  const int n = cfg.curve.points;
  for (int i = 0; i < n; ++i) {
    const double rho =
        n == 1 ? cfg.curve.rho_min
               : cfg.curve.rho_min + (cfg.curve.rho_max - cfg.curve.rho_min) * i / (n - 1);
    const micromech::CellGeometry geom = micromech::cell_geometry(rho, p.R0, p.zeta);
    const bool valid = geom.valid();
    const double geometric = valid ? micromech::geometric_limit_pressure(geom, k) : 0.0;
    w.row({rho, micromech::compaction_pressure_plane(rho, p.sigma_m),
           micromech::compaction_pressure_mla(rho, p.sigma_m), geometric, valid ? 1.0 : 0.0});
  }
  return {};
}

CommandOutput cmd_yield_surface(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto& params = cfg.params;
  CommandOutput result;
  csv::Writer w(out);
  w.header({"rho_hat", "p_MPa", "q_MPa"});
  // compression meridian, cos 3Θ = −1
  const double g = matmodel::deviatoric_shape(-1.0, params);
  const int n = cfg.surface.points;
  for (double rho : cfg.surface.densities) {
    const auto h = micromech::hardening_bundle(rho, cfg.surface.T_C, params);
    const double span = h.p_c + h.c;
    for (int j = 0; j < n; ++j) {
      const double p = j == n - 1 ? h.p_c : -h.c + span * j / (n - 1);
      const double phi = (p + h.c) / span;
      const double G = micromech::bp_meridian_G(phi, params.m_bp, params.alpha_bp);
      if (!(G >= 0.0) || !(g > 0.0)) {
        ++result.skipped_points;
        continue;
      }
      w.row({rho, p, h.M * h.p_c * std::sqrt(G) / g});
    }
  }
  return result;
}

CommandOutput cmd_dilatometer(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto run = integrator::dilatometer_run(cfg.params, cfg.dil, cfg.settings);
  csv::Writer w(out);
  auto cols = kRecordColumns;
  cols.push_back("eps_axial_corrected");
  w.header(cols);
  for (const auto& r : run.records) {
    auto v = record_values(r);
    v.push_back(r.eps_axial_corrected);
    w.row(v);
  }
  return {};
}

CommandOutput cmd_press(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto run = integrator::oedometric_press_run(cfg.params, cfg.press, cfg.settings);
  csv::Writer w(out);
  auto cols = kRecordColumns;
  cols.insert(cols.end(), {"sigma_axial_MPa", "sigma_lateral_MPa"});
  w.header(cols);
  for (const auto& r : run.records) {
    auto v = record_values(r);
    v.push_back(r.sigma[0]);
    v.push_back(r.sigma[1]);
    w.row(v);
  }
  return {};
}

CommandOutput cmd_heat1d(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  heat1d::FiringSchedule schedule;
  if (cfg.heat.schedule.empty()) {
    const double T0 = cfg.heat.column.T_initial;
    const double t_end = (cfg.heat.T_max_C - T0) / cfg.heat.ramp_rate_C_per_min * 60.0;
    schedule = heat1d::FiringSchedule({{0.0, T0}, {t_end, cfg.heat.T_max_C}});
  } else {
    schedule = heat1d::FiringSchedule::load_csv(cfg.heat.schedule);
  }
  const auto run = heat1d::coupled_column_run(cfg.params, cfg.heat.column, schedule, cfg.settings);
  const std::size_t n = run.node_records.size();
  std::vector<std::string> cols{"time_s"};
  for (std::size_t i = 0; i < n; ++i) {
    const std::string node = "node" + std::to_string(i);
    cols.insert(cols.end(), {node + "_T_C", node + "_rho_hat", node + "_R_grain_m"});
  }
  csv::Writer w(out);
  w.header(cols);
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    std::vector<double> v{run.times[k]};
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = run.node_records[i][k];
      v.insert(v.end(), {r.T_C, r.rho_hat, r.R_grain_m});
    }
    w.row(v);
  }
  return {};
}

CommandOutput cmd_point_run(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (cfg.program.empty()) throw ConfigError("point-run needs 'program' (a load-program JSON file)");
  const auto prog = program_io::load_program(cfg.program, cfg.params);
  const auto run = integrator::drive_program(prog.initial, prog.segments, cfg.params, cfg.settings);
  static const char* comp[] = {"11", "22", "33", "12", "13", "23"};
  auto cols = kRecordColumns;
  for (const char* c : comp) cols.push_back(std::string("sigma_") + c + "_MPa");
  for (const char* c : comp) cols.push_back(std::string("eps_") + c);
  csv::Writer w(out);
  w.header(cols);
  for (const auto& r : run.records) {
    auto v = record_values(r);
    for (int i = 0; i < 6; ++i) v.push_back(r.sigma[i]);
    for (int i = 0; i < 6; ++i) v.push_back(r.eps[i]);
    w.row(v);
  }
  return {};
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"compaction-curve", "yield-surface", "dilatometer",
                                                 "press",            "heat1d",        "point-run"};
  return names;
}

CommandOutput run_command(const std::string& name, const RunConfig& cfg, std::ostream& out) {
  if (name == "compaction-curve") return cmd_compaction_curve(cfg, out);
  if (name == "yield-surface") return cmd_yield_surface(cfg, out);
  if (name == "dilatometer") return cmd_dilatometer(cfg, out);
  if (name == "press") return cmd_press(cfg, out);
  if (name == "heat1d") return cmd_heat1d(cfg, out);
  if (name == "point-run") return cmd_point_run(cfg, out);
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace sintermech::commands
