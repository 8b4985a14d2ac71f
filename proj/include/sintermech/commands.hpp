#pragma once

// CSV-producing commands behind the command-line front end.  Each reads a
// validated RunConfig and writes one CSV document.

#include <iosfwd>
#include <string>
#include <vector>

#include "sintermech/config.hpp"

namespace sintermech::commands {

struct CommandOutput {
  int skipped_points = 0;  ///< yield-surface samples with no boundary point
};

CommandOutput cmd_compaction_curve(const config::RunConfig& cfg, std::ostream& out);

/// Meridian boundary q(p) for each density on the compression meridian,
/// from ℱ = 0 solved for q: q = M p_c √G(Φ) / g.
CommandOutput cmd_yield_surface(const config::RunConfig& cfg, std::ostream& out);

CommandOutput cmd_dilatometer(const config::RunConfig& cfg, std::ostream& out);
CommandOutput cmd_press(const config::RunConfig& cfg, std::ostream& out);
CommandOutput cmd_heat1d(const config::RunConfig& cfg, std::ostream& out);
CommandOutput cmd_point_run(const config::RunConfig& cfg, std::ostream& out);

/// Dispatch by CLI name (compaction-curve, yield-surface, ...).  Throws
/// ConfigError for an unknown name.
CommandOutput run_command(const std::string& name, const config::RunConfig& cfg,
                          std::ostream& out);

const std::vector<std::string>& command_names();

}  // namespace sintermech::commands
