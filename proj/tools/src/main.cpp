#include <CLI11.hpp>

#include <iostream>

#include "resonance/cli/commands.hpp"
#include "resonance/cli/config.hpp"

using namespace resonance::cli;

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical resonance predictions and certified computations"};
  app.require_subcommand(1, 1);

  std::string config_path;
  Overrides overrides;
  std::optional<double> m;
  std::string out;

  for (const char* name : {"predict", "compute", "compare", "count", "gap", "oracle"}) {
    auto* sub = app.add_subcommand(name);
    sub->set_help_flag("--help", "print this help message and exit");
    sub->add_option("--config", config_path, "YAML run config")->required();
    sub->add_option("--h", overrides.h, "semiclassical parameter(s); replaces the config list")
        ->delimiter(',');
    sub->add_option("--M", m, "search depth multiplier");
    sub->add_option("--out", out, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const auto command = command_from_string(app.get_subcommands().front()->get_name());
  overrides.M = m;
  if (!out.empty()) overrides.out = out;

  try {
    RunConfig config = load_config(config_path);
    apply(config, overrides);
    return run(*command, config, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
