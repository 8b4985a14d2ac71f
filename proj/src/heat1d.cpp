#include "sintermech/heat1d.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "sintermech/error.hpp"

namespace sintermech::heat1d {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError(where + ": not a number: '" + t + "'");
  }
  return v;
}

}  // namespace

ThermalGrid ThermalGrid::uniform(double length, int n_nodes, double T, double rho_hat,
                                 const MaterialParams& params) {
  if (n_nodes < 3) throw ConfigError("thermal grid needs at least 3 nodes");
  ThermalGrid g;
  g.length = length;
  g.T.assign(n_nodes, T);
  g.rho_hat.assign(n_nodes, rho_hat);
  g.rho_fd = params.rho_fd_si();
  g.c_h = params.c_h;
  g.k_th = params.k_th;
  g.validate();
  return g;
}

void ThermalGrid::validate() const {
  if (n_nodes() < 3) throw ConfigError("thermal grid needs at least 3 nodes");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ConfigError("thermal grid length must be positive");
  }
  if (rho_hat.size() != T.size()) throw ConfigError("thermal grid density/temperature size mismatch");
  for (double v : T) {
    if (!std::isfinite(v)) throw NumericalError("thermal grid: non-finite temperature");
  }
}

FiringSchedule::FiringSchedule(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw ConfigError("firing schedule is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].first) || !std::isfinite(points_[i].second)) {
      throw ConfigError("firing schedule: non-finite entry");
    }
    if (i > 0 && !(points_[i].first > points_[i - 1].first)) {
      throw ConfigError("firing schedule: times must be strictly increasing");
    }
  }
}

FiringSchedule FiringSchedule::constant(double T) { return FiringSchedule({{0.0, T}}); }

FiringSchedule FiringSchedule::parse_csv(std::istream& in, const std::string& source) {
  std::string line;
  int lineno = 0;
  bool header = false;
  std::vector<std::pair<double, double>> pts;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected two columns");
    }
    if (!header) {
      if (trim(t.substr(0, comma)) != "time_s" || trim(t.substr(comma + 1)) != "temperature_C") {
        throw ConfigError(source + ": header must be 'time_s,temperature_C'");
      }
      header = true;
      continue;
    }
    const std::string where = source + ":" + std::to_string(lineno);
    pts.emplace_back(parse_number(t.substr(0, comma), where),
                     parse_number(t.substr(comma + 1), where));
  }
  if (!header) throw ConfigError(source + ": missing header 'time_s,temperature_C'");
  if (pts.empty()) throw ConfigError(source + ": no data rows");
  return FiringSchedule(std::move(pts));
}

FiringSchedule FiringSchedule::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schedule file '" + path + "'");
  return parse_csv(in, path);
}

double FiringSchedule::at(double t) const {
  if (t <= points_.front().first) return points_.front().second;
  if (t >= points_.back().first) return points_.back().second;
  const auto hi = std::upper_bound(
      points_.begin(), points_.end(), t,
      [](double v, const std::pair<double, double>& p) { return v < p.first; });
  const auto lo = hi - 1;
  const double w = (t - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

std::vector<double> solve_tridiagonal(const std::vector<double>& lower,
                                      const std::vector<double>& diag,
                                      const std::vector<double>& upper,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0);
  double pivot = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot = diag[i] - lower[i] * c[i - 1];
    if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot)) {
      throw NumericalError("tridiagonal solve: singular system at row " + std::to_string(i));
    }
    if (i + 1 < n) c[i] = upper[i] / pivot;
    rhs[i] = (rhs[i] - (i > 0 ? lower[i] * rhs[i - 1] : 0.0)) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

ThermalGrid conduction_step(const ThermalGrid& grid, const FiringSchedule& left,
                            const FiringSchedule& right, double t, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("conduction_step: dt must be positive");
  }
  grid.validate();
  const int n = grid.n_nodes();
  const int m = n - 2;
  const double h = grid.spacing();
  const double D = grid.k_th / (h * h);
  const double T_left = left.at(t + dt);
  const double T_right = right.at(t + dt);

  std::vector<double> lower(m, -D), diag(m), upper(m, -D), rhs(m);
  for (int j = 0; j < m; ++j) {
    const double C = grid.heat_capacity(j + 1) / dt;
    if (!(C > 0.0) || !std::isfinite(C) || !(D > 0.0)) {
      throw NumericalError("conduction_step: non-physical coefficients at node " +
                           std::to_string(j + 1));
    }
    diag[j] = C + 2.0 * D;
    rhs[j] = C * grid.T[j + 1];
  }
  rhs.front() += D * T_left;
  rhs.back() += D * T_right;

  const std::vector<double> interior = solve_tridiagonal(lower, diag, upper, std::move(rhs));
  ThermalGrid next = grid;
  next.T.front() = T_left;
  next.T.back() = T_right;
  std::copy(interior.begin(), interior.end(), next.T.begin() + 1);
  next.validate();
  return next;
}

ThermalGrid conduction_step(const ThermalGrid& grid, const FiringSchedule& schedule, double t,
                            double dt) {
  return conduction_step(grid, schedule, schedule, t, dt);
}

double interior_enthalpy(const ThermalGrid& grid) {
  const double h = grid.spacing();
  double H = 0.0;
  for (int i = 1; i + 1 < grid.n_nodes(); ++i) H += grid.heat_capacity(i) * grid.T[i] * h;
  return H;
}

double boundary_heat_input(const ThermalGrid& next, double dt) {
  const int n = next.n_nodes();
  const double h = next.spacing();
  return dt * next.k_th / h * ((next.T[0] - next.T[1]) + (next.T[n - 1] - next.T[n - 2]));
}

ColumnResult coupled_column_run(const MaterialParams& params, const ColumnSpec& spec,
                                const FiringSchedule& schedule,
                                const integrator::IntegratorSettings& settings) {
  using integrator::LoadSegment;
  using tensorlab::SymTensor3;
  params.validate();
  settings.validate();
  if (!(spec.dt > 0.0)) throw ConfigError("heat1d: dt must be positive");
  if (!(spec.mech_max_dt > 0.0)) throw ConfigError("heat1d: mech_max_dt must be positive");
  const double duration = spec.duration > 0.0 ? spec.duration : schedule.end_time();
  if (!(duration > 0.0)) throw ConfigError("heat1d: duration must be positive");

  ThermalGrid grid =
      ThermalGrid::uniform(spec.length, spec.n_nodes, spec.T_initial, params.rho_hat0, params);
  const int n = grid.n_nodes();

  matmodel::MaterialState start = matmodel::MaterialState::initial(params);
  start.T = spec.T_initial;
  start.eps_e = SymTensor3::identity() * (params.alpha0 / 3.0 * (start.T - params.T0));
  std::vector<matmodel::MaterialState> states(n, start);
  std::vector<SymTensor3> sigma(n);

  ColumnResult result;
  result.node_records.resize(n);
  result.times.push_back(0.0);
  const integrator::StepResult initial = integrator::evaluate_state(start, params, settings);
  for (int i = 0; i < n; ++i) {
    sigma[i] = initial.sigma;
    result.node_records[i].push_back(integrator::make_record(0.0, initial, params));
  }

  double t = 0.0;
  std::vector<TimeSeriesRecord> scratch;
  while (t < duration) {
    double h = std::min(spec.dt, duration - t);
    if (duration - (t + h) <= 1e-12 * duration) h = duration - t;
    const ThermalGrid next = conduction_step(grid, schedule, t, h);
    for (int i = 0; i < n; ++i) {
      LoadSegment seg = LoadSegment::stress_target(h, SymTensor3::zero());
      seg.temperature = integrator::TemperatureTable{{{0.0, grid.T[i]}, {h, next.T[i]}}};
      seg.max_dt = std::min(h, spec.mech_max_dt);
      seg.name = "node " + std::to_string(i);
      scratch.clear();
      integrator::advance_segment(states[i], sigma[i], seg, t, params, settings, scratch);
      result.node_records[i].push_back(scratch.back());
    }
    grid = next;
    for (int i = 0; i < n; ++i) grid.rho_hat[i] = states[i].rho_hat;
    t += h;
    result.times.push_back(t);
  }
  return result;
}

}  // namespace sintermech::heat1d
