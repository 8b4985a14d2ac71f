#pragma once

// Run configuration: flat `key = value` text, `#` starts a comment.  Keys
// are MaterialParams field names, integrator settings and driver inputs
// (prefixed curve_, surface_, dil_, press_, heat_).  Defaults are compiled
// in; a file and `--set` pairs only override.

#include <iosfwd>
#include <string>
#include <vector>

#include "sintermech/heat1d.hpp"
#include "sintermech/integrator.hpp"
#include "sintermech/params.hpp"

namespace sintermech::config {

struct CurveOptions {
  double rho_min = 0.40;
  double rho_max = 0.99;
  int points = 60;
};

struct SurfaceOptions {
  std::vector<double> densities{0.5, 0.7, 0.9};
  int points = 101;  ///< meridian samples per density
  double T_C = 20.0;
};

struct HeatOptions {
  heat1d::ColumnSpec column;
  std::string schedule;  ///< CSV path; empty uses a linear ramp
  double ramp_rate_C_per_min = 30.0;
  double T_max_C = 1200.0;
};

struct RunConfig {
  matmodel::MaterialParams params;
  integrator::IntegratorSettings settings;
  CurveOptions curve;
  SurfaceOptions surface;
  integrator::DilatometerOptions dil;
  integrator::PressOptions press;
  HeatOptions heat;
  std::string program;  ///< load-program JSON for point-run

  /// Throws ConfigError naming the offending key.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  void validate() const;
};

/// All recognized keys in dump order.
const std::vector<std::string>& known_keys();

/// Applies `key = value` lines; `source` prefixes error messages.
void apply_stream(RunConfig& cfg, std::istream& in, const std::string& source);
void apply_file(RunConfig& cfg, const std::string& path);
/// Applies one `key=value` pair.
void apply_assignment(RunConfig& cfg, const std::string& assignment);

/// Every key with its effective value; reloading it reproduces cfg.
std::string dump(const RunConfig& cfg);

}  // namespace sintermech::config
