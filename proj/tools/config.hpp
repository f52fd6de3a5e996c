#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "streetperc/montecarlo.hpp"

#include <nlohmann/json_fwd.hpp>

namespace streetperc::cli {

// Resolved run configuration. File keys, flag names and defaults are part of
// the documented external contract (see README).
struct RunConfig {
  double gamma = 20.0;
  double window_km = 0.0;  // 0 = default: 30, or 10 when sweeping U
  double margin_km = -1.0; // < 0 = default 3/sqrt(lambda_S)
  double p = 1.0;
  double U = 0.0;
  double H = 1.0;
  std::string mode = "canyon";
  bool site_perc = false;
  std::string axis;  // "p" | "U" | "H"; required for sweeps
  double grid_min = 0.0;
  double grid_max = 0.0;
  int grid_steps = 0;
  std::vector<double> grid_list;
  int n_reps = 100;
  std::uint64_t master_seed = 1;
  std::string out_dir = ".";
  int threads = 0;  // 0 = hardware concurrency

  // flag-only switches (not part of the file schema)
  bool coupled = false;

  // key -> default|file|flag|env
  std::map<std::string, std::string> provenance;
};

// Reads the flat key=value config file ('#' starts a comment). Unknown keys
// are a hard error listing every offender.
RunConfig parse_config_file(const std::string& path);

// Applies one override (same key names as the file). Used for flag and env
// overrides, which win over file values.
void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value, const std::string& source);

// STREETPERC_OUT_DIR overrides the output directory (and only that); flags
// still win over the environment.
void apply_env_overrides(RunConfig& config);

// Fills axis-dependent defaults and validates every invariant, reporting all
// violations at once. need_axis enforces a sweep axis + grid.
void resolve_and_validate(RunConfig& config, bool need_axis);

std::vector<double> resolve_grid(const RunConfig& config);

ParamPoint to_param_point(const RunConfig& config);

nlohmann::json config_to_json(const RunConfig& config);

}  // namespace streetperc::cli
