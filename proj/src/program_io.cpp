#include "sintermech/program_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sintermech/error.hpp"

namespace sintermech::program_io {

namespace {

using nlohmann::json;
using integrator::AxisControl;
using integrator::ControlMode;
using integrator::LoadSegment;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

int component_index(const std::string& name, const std::string& where) {
  static const char* names[] = {"11", "22", "33", "12", "13", "23"};
  for (int i = 0; i < 6; ++i) {
    if (name == names[i]) return i;
  }
  throw ConfigError(where + ": unknown component '" + name + "'");
}

integrator::TemperatureSchedule parse_temperature(const json& t, const std::string& where) {
  reject_unknown(t, {"constant", "ramp", "start", "table"}, where);
  const int kinds = int(t.contains("constant")) + int(t.contains("ramp")) + int(t.contains("table"));
  if (kinds != 1) throw ConfigError(where + ": give exactly one of constant, ramp, table");
  if (t.contains("start") && !t.contains("ramp")) {
    throw ConfigError(where + ": 'start' only applies to a ramp");
  }
  if (t.contains("constant")) {
    return integrator::ConstantTemperature{number(t["constant"], where + ".constant")};
  }
  if (t.contains("ramp")) {
    integrator::TemperatureRamp r;
    r.rate_C_per_min = number(t["ramp"], where + ".ramp");
    if (t.contains("start")) r.start_C = number(t["start"], where + ".start");
    return r;
  }
  integrator::TemperatureTable tab;
  const json& rows = t["table"];
  if (!rows.is_array() || rows.empty()) throw ConfigError(where + ".table: expected a non-empty array");
  for (const json& row : rows) {
    if (!row.is_array() || row.size() != 2) {
      throw ConfigError(where + ".table: rows must be [time_s, T_C]");
    }
    tab.points.emplace_back(number(row[0], where + ".table"), number(row[1], where + ".table"));
  }
  return tab;
}

LoadSegment parse_segment(const json& s, const std::string& where) {
  reject_unknown(s, {"name", "duration", "max_dt", "components", "temperature",
                     "viscosity_override", "sintering_stress"},
                 where);
  LoadSegment seg;
  if (s.contains("name")) {
    if (!s["name"].is_string()) throw ConfigError(where + ".name: expected a string");
    seg.name = s["name"].get<std::string>();
  }
  if (!s.contains("duration")) throw ConfigError(where + ": missing 'duration'");
  seg.duration = number(s["duration"], where + ".duration");
  if (s.contains("max_dt")) seg.max_dt = number(s["max_dt"], where + ".max_dt");
  if (s.contains("components")) {
    const json& comps = s["components"];
    if (!comps.is_object()) throw ConfigError(where + ".components: expected an object");
    for (const auto& [name, ctl] : comps.items()) {
      const std::string w = where + ".components." + name;
      const int i = component_index(name, where + ".components");
      reject_unknown(ctl, {"strain_rate", "stress"}, w);
      if (ctl.size() != 1) throw ConfigError(w + ": give exactly one of strain_rate, stress");
      if (ctl.contains("stress")) {
        seg.control[i] = AxisControl{ControlMode::Stress, number(ctl["stress"], w)};
      } else {
        seg.control[i] = AxisControl{ControlMode::StrainRate, number(ctl["strain_rate"], w)};
      }
    }
  }
  if (s.contains("temperature")) seg.temperature = parse_temperature(s["temperature"], where + ".temperature");
  if (s.contains("viscosity_override")) {
    seg.viscosity_override = number(s["viscosity_override"], where + ".viscosity_override");
  }
  if (s.contains("sintering_stress")) {
    if (!s["sintering_stress"].is_boolean()) {
      throw ConfigError(where + ".sintering_stress: expected true or false");
    }
    seg.sintering_stress = s["sintering_stress"].get<bool>();
  }
  seg.validate();
  return seg;
}

}  // namespace

LoadProgram parse_program(const std::string& json_text, const matmodel::MaterialParams& params) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("load program: ") + e.what());
  }
  reject_unknown(doc, {"initial", "segments"}, "load program");

  LoadProgram prog;
  prog.initial = matmodel::MaterialState::initial(params);
  if (doc.contains("initial")) {
    const json& init = doc["initial"];
    reject_unknown(init, {"T", "rho_hat"}, "load program.initial");
    if (init.contains("T")) prog.initial.T = number(init["T"], "load program.initial.T");
    if (init.contains("rho_hat")) {
      prog.initial.rho_hat = number(init["rho_hat"], "load program.initial.rho_hat");
      if (!(prog.initial.rho_hat > 0.0 && prog.initial.rho_hat < 1.0)) {
        throw ConfigError("load program.initial.rho_hat must lie in (0, 1)");
      }
    }
  }
  // stress-free at the initial temperature
  prog.initial.eps_e = tensorlab::SymTensor3::identity() *
                       (params.alpha0 / 3.0 * (prog.initial.T - params.T0));

  if (!doc.contains("segments") || !doc["segments"].is_array() || doc["segments"].empty()) {
    throw ConfigError("load program: 'segments' must be a non-empty array");
  }
  int k = 0;
  for (const json& s : doc["segments"]) {
    prog.segments.push_back(parse_segment(s, "load program.segments[" + std::to_string(k++) + "]"));
  }
  return prog;
}

LoadProgram load_program(const std::string& path, const matmodel::MaterialParams& params) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open load program '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str(), params);
}

}  // namespace sintermech::program_io
