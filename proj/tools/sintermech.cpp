// sintermech: command-line front end.
//
//   sintermech <command> [--config PATH] [--set key=value]... [--out PATH]
//              [--dump-config PATH] [--sweep key=v1,v2,...]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.  On
// failure one line `sintermech: error kind=<kind> message="<text>"` goes to
// stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sintermech/commands.hpp"
#include "sintermech/config.hpp"
#include "sintermech/error.hpp"

namespace {

using sintermech::ConfigError;
using sintermech::config::RunConfig;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n' || c == '\r') {
      out += ' ';
      continue;
    }
    out += c;
  }
  return out;
}

int report(const char* kind, const std::string& message, int code) {
  std::fprintf(stderr, "sintermech: error kind=%s message=\"%s\"\n", kind, escape(message).c_str());
  return code;
}

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  std::string dump_path;
  std::string sweep;
};

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

RunConfig build_config(const Options& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) sintermech::config::apply_file(cfg, opt.config_path);
  for (const std::string& s : opt.sets) sintermech::config::apply_assignment(cfg, s);
  cfg.validate();
  return cfg;
}

std::string sweep_path(const std::string& out, const std::string& key, const std::string& value) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string stem = has_ext ? out.substr(0, dot) : out;
  const std::string ext = has_ext ? out.substr(dot) : ".csv";
  return stem + "_" + key + "=" + value + ext;
}

int run_sweep(const std::string& command, const RunConfig& base, const Options& opt) {
  const auto eq = opt.sweep.find('=');
  if (eq == std::string::npos) throw ConfigError("--sweep expects key=v1,v2,...");
  const std::string key = opt.sweep.substr(0, eq);
  std::vector<std::string> values;
  std::stringstream ss(opt.sweep.substr(eq + 1));
  for (std::string v; std::getline(ss, v, ',');) values.push_back(v);
  if (values.empty()) throw ConfigError("--sweep needs at least one value");
  if (opt.out.empty() || opt.out == "-") throw ConfigError("--sweep needs --out PATH");

  std::vector<RunConfig> configs;
  for (const std::string& v : values) {
    RunConfig cfg = base;
    cfg.set(key, v);
    cfg.validate();
    configs.push_back(cfg);
  }

  struct Outcome {
    std::string csv;
    std::string kind;
    std::string message;
    int code = 0;
  };
  std::vector<Outcome> outcomes(values.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < values.size(); ++i) {
    workers.emplace_back([&, i] {
      std::ostringstream os;
      try {
        sintermech::commands::run_command(command, configs[i], os);
        outcomes[i].csv = os.str();
      } catch (const ConfigError& e) {
        outcomes[i] = {{}, e.kind(), e.what(), kExitConfig};
      } catch (const sintermech::Error& e) {
        outcomes[i] = {{}, e.kind(), e.what(), kExitNumerical};
      }
    });
  }
  for (std::thread& t : workers) t.join();

  int code = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (outcomes[i].code == 0) {
      write_text(sweep_path(opt.out, key, values[i]), outcomes[i].csv);
    } else {
      report(outcomes[i].kind.c_str(), key + "=" + values[i] + ": " + outcomes[i].message,
             outcomes[i].code);
      code = std::max(code, outcomes[i].code);
    }
  }
  return code;
}

int run(const std::string& command, const Options& opt) {
  const RunConfig cfg = build_config(opt);
  if (!opt.dump_path.empty()) write_text(opt.dump_path, sintermech::config::dump(cfg));
  if (!opt.sweep.empty()) return run_sweep(command, cfg, opt);

  std::ostringstream os;
  const auto result = sintermech::commands::run_command(command, cfg, os);
  write_text(opt.out.empty() ? "-" : opt.out, os.str());
  if (result.skipped_points > 0) {
    std::fprintf(stderr, "sintermech: warning skipped_points=%d\n", result.skipped_points);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermo-mechanical model of ceramic powder pressing and sintering"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"compaction-curve", "Hydrostatic compaction pressure against relative density"},
      {"yield-surface", "Meridian sections of the yield surface"},
      {"dilatometer", "Free sintering under a constant heating rate"},
      {"press", "Oedometric die pressing and unloading"},
      {"heat1d", "Through-thickness conduction driving a column of material points"},
      {"point-run", "Material point under a load program (JSON)"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "Configuration file (key = value)");
    sub->add_option("--set", opt.sets, "Override one key (key=value); repeatable")
        ->allow_extra_args(false);
    sub->add_option("--out", opt.out, "Output CSV path (default stdout)");
    sub->add_option("--dump-config", opt.dump_path,
                    "Write the effective configuration to PATH ('-' for stdout)");
    sub->add_option("--sweep", opt.sweep,
                    "Run once per value in parallel: key=v1,v2,... (needs --out)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), kExitConfig);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const ConfigError& e) {
    return report(e.kind(), e.what(), kExitConfig);
  } catch (const sintermech::Error& e) {
    return report(e.kind(), e.what(), kExitNumerical);
  } catch (const std::exception& e) {
    return report("internal", e.what(), kExitNumerical);
  }
}
