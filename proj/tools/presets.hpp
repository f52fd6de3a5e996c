#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streetperc/estimation.hpp"
#include "streetperc/montecarlo.hpp"

namespace streetperc::cli {

// One sweep-and-fit unit of a reproduction preset.
struct SweepSpec {
  std::string label;
  Axis axis = Axis::relay_p;
  std::vector<double> grid;
  ParamPoint fixed;
  bool site_perc = false;
  int n_reps = 100;
};

struct Target {
  SweepSpec sweep;
  double expected = 0.0;   // published reference value for the threshold
  double abs_tol = 0.0;    // exactly one of abs_tol / rel_tol is nonzero
  double rel_tol = 0.0;
  std::string reference;   // where the expected value comes from
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<Target> targets;
};

enum class Scale : std::uint8_t { full, desk };

Scale scale_from_name(const std::string& name);  // throws ParameterError

std::vector<std::string> preset_names();

// Canned reproduction runs. Desk scale shrinks windows and replication
// counts and widens tolerances for quick runs on a workstation.
Preset get_preset(const std::string& name, Scale scale);

// Reference (H, p_c(H)) pairs of the relay-limited regime; input to the
// quadratic interpolation and to the plot-data export.
const std::vector<std::pair<double, double>>& reference_pc_of_h_pairs();

// Deterministic per-target seed so reordering targets cannot change results.
std::uint64_t target_seed(std::uint64_t master_seed, const std::string& label);

struct TargetOutcome {
  Target target;
  SweepResult sweep;
  LogisticFit fit;
  double estimate = 0.0;
  double tolerance = 0.0;  // resolved absolute tolerance
  bool degenerate = false;
  bool pass = false;
};

TargetOutcome run_target(const Target& target, std::uint64_t master_seed,
                         const RunOptions& options);

}  // namespace streetperc::cli
