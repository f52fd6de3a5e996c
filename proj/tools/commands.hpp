#pragma once

#include <functional>
#include <string>

#include "config.hpp"
#include "presets.hpp"

namespace streetperc::cli {

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kParameter = 2,
  kGeometry = 3,
  kDegenerateFit = 4,
  kFailTarget = 5,
};

struct SimulateOptions {
  bool export_tess = false;
  bool export_agents = false;
  bool export_components = false;
};

struct FitOptions {
  bool irls = false;
  int bootstrap = 1000;
  std::uint64_t bootstrap_seed = 0x0b007u;
};

struct ReproduceOptions {
  std::uint64_t master_seed = 1;
  int threads = 0;
  std::string out_dir = ".";
  bool plot_data = false;
};

int cmd_simulate(RunConfig config, const SimulateOptions& options);
int cmd_sweep(RunConfig config);
int cmd_fit(const std::string& csv_path, const FitOptions& options);
int cmd_reproduce(const std::string& preset_name, const std::string& scale,
                  const ReproduceOptions& options);

// Maps an exception in a command body to its exit code and prints the
// diagnostic to stderr.
int run_guarded(const std::function<int()>& body);

}  // namespace streetperc::cli
