#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bridgelab/harness.hpp"

namespace bridgelab::cli {

struct CliConfig {
  harness::StudyConfig study;
  std::string out_dir = ".";
  bool overwrite = false;
  std::size_t workers = 1;
  bool plot = false;
};

// Parses and validates the JSON study config (schema in the README); fills
// defaults. Throws ConfigError on any schema or semantic violation,
// including unknown keys. CLI-level fields keep their defaults here; the
// subcommand flags override them.
CliConfig parse_config(const std::string& path);

// The fully resolved study config as pretty JSON, echoed next to outputs.
std::string resolved_config_json(const harness::StudyConfig& config);

// Line plot of every *_median aggregate across the schedule.
std::string svg_median_plot(const harness::ConvergenceReport& report);

// Entry point behind main(): args without the program name. Returns the
// process exit code: 0 success, 1 runtime failure, 2 config/usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bridgelab::cli
