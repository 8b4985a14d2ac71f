#pragma once

// Load programs for the generic material-point driver, stored as JSON:
//
//   {
//     "initial": {"T": 20, "rho_hat": 0.38},
//     "segments": [
//       {"name": "press", "duration": 60, "max_dt": 0.5,
//        "components": {"11": {"strain_rate": -0.01}, "22": {"stress": 0}},
//        "temperature": {"constant": 20},
//        "viscosity_override": 1e-12, "sintering_stress": false}
//     ]
//   }
//
// Components not listed are held at zero strain rate.  Temperature is one
// of {"constant": T}, {"ramp": °C/min, "start": T}, {"table": [[t, T], ...]};
// omitted, the current temperature is held.

#include <iosfwd>
#include <string>
#include <vector>

#include "sintermech/integrator.hpp"

namespace sintermech::program_io {

struct LoadProgram {
  matmodel::MaterialState initial;
  std::vector<integrator::LoadSegment> segments;
};

/// Throws ConfigError on malformed input or unknown keys.
LoadProgram parse_program(const std::string& json_text, const matmodel::MaterialParams& params);
LoadProgram load_program(const std::string& path, const matmodel::MaterialParams& params);

}  // namespace sintermech::program_io
