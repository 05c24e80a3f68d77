#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyperheat/experiments.hpp"

namespace hyperheat {

struct CliRequest {
  std::string experiment;
  Config config;
  std::filesystem::path out_dir;
  bool help = false;
};

/// Parses `<experiment> [--n LIST] [--t-list LIST] [--a A] [--r-max R]
/// [--nodes N] [--dt DT] [--set key=value]... [--config FILE] [--out DIR]`.
/// args excludes the program name. File entries are key=value lines with
/// '#' comments; flags override the file. Throws UsageError, and the
/// KernelSpec validation error for an invalid --n.
CliRequest parse_cli(const std::vector<std::string>& args);

std::string usage_text();

/// Full CLI: parse, run, write. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperheat
