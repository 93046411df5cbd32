#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "resonance/asymptotic.hpp"
#include "resonance/potential.hpp"
#include "resonance/quadrature.hpp"

namespace resonance::cli {

/// Config problem, reported with file:line:column when known. Maps to exit
/// code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double shoot = 1e-14;     ///< Taylor tail per step, relative
  double residual = 1e-10;  ///< certified |R| / max(|u|, |v|)
  double flow = 1e-13;      ///< Hamilton-flow local error
};

struct RunConfig {
  std::filesystem::path source;
  std::string text;  ///< raw config bytes (hashed into the manifest)
  Potential potential = Potential::constant(0.0);
  Interval window;
  std::vector<double> h_list;  ///< strictly descending
  std::optional<double> M;
  Tier tier = Tier::ClosedForm;
  Tolerances tolerances;
  std::filesystem::path output = "results";
  /// Omit wall-clock times so repeated runs are byte-identical.
  bool deterministic = false;
};

/// Parses and validates a YAML run config. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::string& source_name = "<config>");

/// Re-validates after command-line overrides (h list order, a > sup V, ...).
void validate(RunConfig& config);

/// 64-bit FNV-1a of the config text, as 16 hex digits.
std::string config_hash(const std::string& text);

}  // namespace resonance::cli
