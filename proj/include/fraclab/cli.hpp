#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fraclab/config.hpp"
#include "fraclab/domain.hpp"
#include "fraclab/scaling.hpp"
#include "fraclab/sobolev.hpp"

namespace fraclab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitEstimatorError = 2;
inline constexpr int kExitConfigError = 3;

/// Builders from the config; all throw ConfigError on bad values.
Domain build_domain(const RunConfig& cfg);
ScalarField build_field(const RunConfig& cfg);
ScalingFunction build_phi(const RunConfig& cfg);
Method parse_method(const std::string& name);
SampleConfig sample_config(const RunConfig& cfg);

/// Dry-run check of parameter ranges, domain and field buildability and
/// resolution rules. An empty list means the config is valid.
std::vector<std::string> validate_config(const RunConfig& cfg);

/// output_dir / "<command>_seed<seed>".
std::filesystem::path run_directory(const RunConfig& cfg);

/// Runs the configured command, writes its artifacts and returns the exit
/// status. Progress goes to `out`, error text to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace fraclab
