// Command-line entry point: one experiment per invocation.
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "fraclab/cli.hpp"
#include "fraclab/config.hpp"
#include "fraclab/core.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fraclab: fractional Sobolev and Assouad dimension laboratory"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Config file with [section] key = value lines");

  std::map<std::string, std::string> overrides;
  for (const auto& key : fraclab::config_keys()) {
    if (key.name == "command") continue;
    const std::string name(key.name);
    app.add_option_function<std::string>(
        "--" + name, [&overrides, name](const std::string& v) { overrides[name] = v; },
        "[" + std::string(key.section) + "] " + name);
  }
  for (std::string_view cmd : fraclab::kCommands) app.add_subcommand(std::string(cmd))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fraclab::kExitConfigError;
  }

  fraclab::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = fraclab::load_config_file(config_path);
    cfg.command = app.get_subcommands().front()->get_name();
    fraclab::apply_overrides(cfg, overrides);
  } catch (const fraclab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return fraclab::kExitConfigError;
  }
  return fraclab::run(cfg, std::cout, std::cerr);
}
