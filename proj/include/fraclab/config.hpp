#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fraclab {

inline constexpr std::string_view kCommands[] = {"dimension", "tube",      "seminorm", "hardy",   "density",
                                                  "cutoff",    "koch",      "reduction", "scaling", "validate"};

/// Everything one invocation needs. Sections of the config file group the
/// keys; every key is also a command-line flag of the same name.
struct RunConfig {
  // [run]
  std::string command = "validate";
  std::uint64_t seed = 1;
  std::uint64_t samples = 1u << 20;
  std::string output_dir = "fraclab_out";
  std::string method = "grid";
  double grid_h = 0.0;
  // [geometry]
  std::string domain = "disk";
  int level = 7;
  double radius = 1.0;
  double width = 1.0;
  double height = 1.0;
  int teeth = 4;
  // [sobolev]
  double s = 0.5;
  double p = 2.0;
  std::string field = "one";
  double field_a = 1.0;
  double field_b = 0.0;
  std::vector<int> n_grid{8, 16, 32, 64, 128, 256};
  // [tube]
  double r = 0.0;
  double r_min = 1e-3;
  double r_max = 1e-1;
  int scales = 9;
  // [dimension]
  int centers = 0;
  double kappa = 0.1;
  // [scaling]
  std::string phi = "power";
  double phi_exponent = 0.5;
  std::vector<double> phi_t;
  std::vector<double> phi_values;
  double eta = 0.5;
  double H = 1.0;
  double M = 0.0;
  double eta0 = 0.0;
  double dimA = 1.0;
  // [reduction]
  double R_loc = 2.0;

  bool operator==(const RunConfig&) const = default;
};

/// Section and name of every key, in serialization order.
struct ConfigKey {
  std::string_view section;
  std::string_view name;
};
const std::vector<ConfigKey>& config_keys();

/// Assigns `value` to key `name`; throws ConfigError on unknown keys or
/// malformed values.
void set_config_value(RunConfig& cfg, std::string_view name, std::string_view value);
std::string get_config_value(const RunConfig& cfg, std::string_view name);

/// Flat "key = value" text with [section] headers and '#' comments.
RunConfig parse_config(std::string_view text, RunConfig base = {});
std::string serialize_config(const RunConfig& cfg);
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Applies "name -> value" overrides (flags) on top of `cfg`.
void apply_overrides(RunConfig& cfg, const std::map<std::string, std::string>& overrides);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

}  // namespace fraclab
