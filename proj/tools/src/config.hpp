#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ddecoh/comb.hpp"
#include "ddecoh/scenario.hpp"
#include "ddecoh/sweep.hpp"

namespace ddecoh::cli {

using json = nlohmann::ordered_json;

/// Everything a subcommand can read. Energies and times are in units of the
/// hopping scale v0 (hbar = 1).
struct RunConfig {
  Scenario scenario;
  std::string tabulated_file;  ///< set when the density came from a file
  CombOptions comb;
  std::size_t oracle_modes = 2000;
  int oracle_substeps = 1;
  Interval window{150.0, 200.0};
  bool convergence = false;
  double convergence_tol = 1e-2;
  std::string prefix = "ddecoh";
  bool svg = true;
  bool u0_overlay = false;
  std::size_t stride = 1;  ///< decimation of written traces
  std::vector<SweepAxis> sweep_axes;
  std::string sweep_output = "sweep.csv";
  unsigned threads = 0;
};

/// Builds a config from a JSON tree; missing keys keep their defaults.
/// Throws Error(Config) on unknown keys or bad values.
RunConfig parse_config(const json& j, const std::filesystem::path& base_dir = {});

json to_json(const RunConfig& c);

/// Applies `key.path=value`. The value is read as JSON when it parses,
/// otherwise as a bare string.
void apply_override(json& j, const std::string& assignment);

/// Reads `path` (if non-empty), applies the overrides, validates.
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides);

SweepSpec make_sweep_spec(const RunConfig& c);

}  // namespace ddecoh::cli
