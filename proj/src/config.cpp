#include "sintermech/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "sintermech/error.hpp"

namespace sintermech::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a finite number, got '" + t + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + t + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + t + "'");
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class Access>
Field number(std::string key, Access access) {
  return {key,
          [key, access](RunConfig& c, const std::string& v) { access(c) = parse_double(key, v); },
          [access](const RunConfig& c) {
            return format_double(access(const_cast<RunConfig&>(c)));
          }};
}

template <class Access>
Field integer(std::string key, Access access) {
  return {key,
          [key, access](RunConfig& c, const std::string& v) { access(c) = parse_int(key, v); },
          [access](const RunConfig& c) {
            return std::to_string(access(const_cast<RunConfig&>(c)));
          }};
}

template <class Access>
Field boolean(std::string key, Access access) {
  return {key,
          [key, access](RunConfig& c, const std::string& v) { access(c) = parse_bool(key, v); },
          [access](const RunConfig& c) {
            return std::string(access(const_cast<RunConfig&>(c)) ? "true" : "false");
          }};
}

template <class Access>
Field text(std::string key, Access access) {
  return {key, [access](RunConfig& c, const std::string& v) { access(c) = trim(v); },
          [access](const RunConfig& c) { return access(const_cast<RunConfig&>(c)); }};
}

#define SM_NUMBER(name, expr) number(name, [](RunConfig& c) -> double& { return expr; })
#define SM_INT(name, expr) integer(name, [](RunConfig& c) -> int& { return expr; })
#define SM_BOOL(name, expr) boolean(name, [](RunConfig& c) -> bool& { return expr; })
#define SM_TEXT(name, expr) text(name, [](RunConfig& c) -> std::string& { return expr; })

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f{
        SM_NUMBER("E", c.params.E),
        SM_NUMBER("nu", c.params.nu),
        SM_NUMBER("alpha0", c.params.alpha0),
        SM_NUMBER("T0", c.params.T0),
        SM_NUMBER("sigma_m", c.params.sigma_m),
        SM_NUMBER("m_bp", c.params.m_bp),
        SM_NUMBER("alpha_bp", c.params.alpha_bp),
        SM_NUMBER("beta_bp", c.params.beta_bp),
        SM_NUMBER("gamma_bp", c.params.gamma_bp),
        SM_NUMBER("rho_hat0", c.params.rho_hat0),
        SM_NUMBER("rho_fd", c.params.rho_fd),
        SM_NUMBER("R0", c.params.R0),
        SM_NUMBER("gamma_s", c.params.gamma_s),
        SM_NUMBER("gamma_b", c.params.gamma_b),
        SM_NUMBER("M_gc0", c.params.M_gc0),
        SM_NUMBER("Q_gc", c.params.Q_gc),
        SM_NUMBER("Q_E", c.params.Q_E),
        SM_NUMBER("R_g", c.params.R_g),
        SM_NUMBER("eta_v1", c.params.eta_v1),
        SM_NUMBER("w", c.params.w),
        SM_NUMBER("T_C1", c.params.T_C1),
        SM_NUMBER("C_T", c.params.C_T),
        SM_NUMBER("b1", c.params.b1),
        SM_NUMBER("zeta", c.params.zeta),
        SM_NUMBER("chi", c.params.chi),
        SM_NUMBER("c_h", c.params.c_h),
        SM_NUMBER("k_th", c.params.k_th),
        SM_NUMBER("p_c_floor", c.params.p_c_floor),
        SM_NUMBER("M_floor", c.params.M_floor),
        SM_NUMBER("q_eps", c.params.q_eps),

        SM_NUMBER("newton_tol", c.settings.newton_tol),
        SM_INT("newton_max_iter", c.settings.newton_max_iter),
        SM_INT("substep_max_levels", c.settings.substep_max_levels),
        SM_NUMBER("dt_initial", c.settings.dt_initial),
        SM_BOOL("sintering_stress", c.settings.sintering_stress),

        SM_NUMBER("curve_rho_min", c.curve.rho_min),
        SM_NUMBER("curve_rho_max", c.curve.rho_max),
        SM_INT("curve_points", c.curve.points),

        SM_INT("surface_points", c.surface.points),
        SM_NUMBER("surface_T", c.surface.T_C),

        SM_NUMBER("dil_ramp_rate", c.dil.ramp_rate_C_per_min),
        SM_NUMBER("dil_T_start", c.dil.T_start_C),
        SM_NUMBER("dil_T_max", c.dil.T_max_C),
        SM_NUMBER("dil_max_dt", c.dil.max_dt),

        SM_NUMBER("press_stroke_ratio", c.press.stroke_ratio),
        SM_NUMBER("press_strain_rate", c.press.strain_rate),
        SM_NUMBER("press_viscosity", c.press.viscosity),
        SM_NUMBER("press_T", c.press.T_C),
        SM_NUMBER("press_max_dt", c.press.max_dt),
        SM_NUMBER("press_unload_duration", c.press.unload_duration),
        SM_BOOL("press_sintering_stress", c.press.sintering_stress),

        SM_NUMBER("heat_length", c.heat.column.length),
        SM_INT("heat_nodes", c.heat.column.n_nodes),
        SM_NUMBER("heat_T_initial", c.heat.column.T_initial),
        SM_NUMBER("heat_dt", c.heat.column.dt),
        SM_NUMBER("heat_duration", c.heat.column.duration),
        SM_NUMBER("heat_mech_max_dt", c.heat.column.mech_max_dt),
        SM_NUMBER("heat_ramp_rate", c.heat.ramp_rate_C_per_min),
        SM_NUMBER("heat_T_max", c.heat.T_max_C),
        SM_TEXT("heat_schedule", c.heat.schedule),

        SM_TEXT("program", c.program),
    };

    f.push_back({"viscosity_override",
                 [](RunConfig& c, const std::string& v) {
                   if (trim(v) == "none") {
                     c.settings.viscosity_override.reset();
                   } else {
                     c.settings.viscosity_override = parse_double("viscosity_override", v);
                   }
                 },
                 [](const RunConfig& c) {
                   return c.settings.viscosity_override
                              ? format_double(*c.settings.viscosity_override)
                              : std::string("none");
                 }});
    f.push_back({"surface_densities",
                 [](RunConfig& c, const std::string& v) {
                   std::vector<double> list;
                   std::stringstream ss(v);
                   std::string item;
                   while (std::getline(ss, item, ',')) {
                     list.push_back(parse_double("surface_densities", item));
                   }
                   if (list.empty()) {
                     throw ConfigError("key 'surface_densities': empty list");
                   }
                   c.surface.densities = std::move(list);
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.surface.densities.size(); ++i) {
                     if (i) out += ",";
                     out += format_double(c.surface.densities[i]);
                   }
                   return out;
                 }});
    return f;
  }();
  return table;
}

#undef SM_NUMBER
#undef SM_INT
#undef SM_BOOL
#undef SM_TEXT

const Field& find_field(const std::string& key) {
  for (const Field& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  find_field(key).set(*this, value);
}

std::string RunConfig::get(const std::string& key) const { return find_field(key).get(*this); }

void RunConfig::validate() const {
  params.validate();
  settings.validate();
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_unit(curve.rho_min) || !open_unit(curve.rho_max) || curve.rho_min > curve.rho_max) {
    throw ConfigError("curve_rho_min/curve_rho_max must satisfy 0 < min <= max < 1");
  }
  if (curve.points < 1) throw ConfigError("curve_points must be at least 1");
  if (curve.points > 1 && curve.rho_min == curve.rho_max) {
    throw ConfigError("curve_points > 1 needs curve_rho_min < curve_rho_max");
  }
  for (double r : surface.densities) {
    if (!open_unit(r)) throw ConfigError("surface_densities entries must lie in (0, 1)");
  }
  if (surface.points < 2) throw ConfigError("surface_points must be at least 2");
  if (!(dil.ramp_rate_C_per_min > 0.0)) throw ConfigError("dil_ramp_rate must be positive");
  if (!(dil.T_max_C > dil.T_start_C)) throw ConfigError("dil_T_max must exceed dil_T_start");
  if (!(dil.max_dt > 0.0)) throw ConfigError("dil_max_dt must be positive");
  if (!(press.stroke_ratio >= 0.0 && press.stroke_ratio < 1.0)) {
    throw ConfigError("press_stroke_ratio must lie in [0, 1)");
  }
  if (!(press.strain_rate > 0.0)) throw ConfigError("press_strain_rate must be positive");
  if (!(press.viscosity > 0.0)) throw ConfigError("press_viscosity must be positive");
  if (!(press.max_dt > 0.0)) throw ConfigError("press_max_dt must be positive");
  if (!(press.unload_duration > 0.0)) {
    throw ConfigError("press_unload_duration must be positive");
  }
  if (!(heat.column.length > 0.0)) throw ConfigError("heat_length must be positive");
  if (heat.column.n_nodes < 3) throw ConfigError("heat_nodes must be at least 3");
  if (!(heat.column.dt > 0.0)) throw ConfigError("heat_dt must be positive");
  if (heat.column.duration < 0.0) throw ConfigError("heat_duration must be non-negative");
  if (!(heat.column.mech_max_dt > 0.0)) throw ConfigError("heat_mech_max_dt must be positive");
  if (heat.schedule.empty()) {
    if (!(heat.ramp_rate_C_per_min > 0.0)) throw ConfigError("heat_ramp_rate must be positive");
    if (!(heat.T_max_C > heat.column.T_initial)) {
      throw ConfigError("heat_T_max must exceed heat_T_initial");
    }
  }
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void apply_stream(RunConfig& cfg, std::istream& in, const std::string& source) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      cfg.set(trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void apply_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  apply_stream(cfg, in, path);
}

void apply_assignment(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  }
  cfg.set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::string dump(const RunConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

}  // namespace sintermech::config
