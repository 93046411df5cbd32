#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resonance/cli/config.hpp"

namespace resonance::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitPartial = 3,
  kExitNumerical = 4,
};

enum class Command { Predict, Compute, Compare, Count, Gap, Oracle };

std::optional<Command> command_from_string(std::string_view name);
std::string_view to_string(Command command);

struct Overrides {
  std::vector<double> h;
  std::optional<double> M;
  std::optional<std::string> out;
};

/// Applies command-line overrides and re-validates (ConfigError on failure).
void apply(RunConfig& config, const Overrides& overrides);

/// Runs one command over config.h_list (per-h work in parallel), writes the
/// result files and manifest.json under config.output and returns the exit
/// code. Warnings and failures go to `log`.
int run(Command command, const RunConfig& config, std::ostream& log);

}  // namespace resonance::cli
