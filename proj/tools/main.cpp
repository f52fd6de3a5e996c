#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "presets.hpp"
#include "streetperc/text_io.hpp"

namespace {

using namespace streetperc;
using namespace streetperc::cli;

// Binds the config-file keys as flags on a subcommand; flags win over file
// values, which win over defaults. STREETPERC_OUT_DIR sits between file and
// flags.
struct ConfigFlags {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> overrides;

  void bind(CLI::App* cmd, bool with_grid) {
    cmd->add_option("--config", config_file,
                    "key=value config file (see README for the schema)");
    add(cmd, "--gamma", "gamma", "street density, km/km^2");
    add(cmd, "--window-km", "window_km", "simulation window side, km");
    add(cmd, "--margin-km", "margin_km", "seed guard margin override, km");
    add(cmd, "--p", "p", "relay fraction in [0,1]");
    add(cmd, "--U", "U", "mean users per typical edge");
    add(cmd, "--H", "H", "mean hops per typical edge");
    add(cmd, "--mode", "mode", "canyon|nosha");
    add(cmd, "--site-perc", "site_perc", "relay-only, unbounded radius (0|1)");
    add(cmd, "--n-reps", "n_reps", "replications per grid value");
    add(cmd, "--master-seed", "master_seed", "master RNG seed");
    add(cmd, "--out-dir", "out_dir", "output directory");
    add(cmd, "--threads", "threads", "worker threads (0 = all cores)");
    if (with_grid) {
      add(cmd, "--axis", "axis", "swept parameter: p|U|H");
      add(cmd, "--grid-min", "grid_min", "lowest grid value");
      add(cmd, "--grid-max", "grid_max", "highest grid value");
      add(cmd, "--grid-steps", "grid_steps", "number of grid points");
      add(cmd, "--grid-list", "grid_list", "explicit comma-separated grid");
    }
  }

  RunConfig resolve() const {
    RunConfig config = parse_config_file(config_file);
    apply_env_overrides(config);
    for (const auto& [key, value] : overrides) {
      apply_override(config, key, value, "flag");
    }
    return config;
  }

 private:
  void add(CLI::App* cmd, const std::string& flag, const std::string& key,
           const std::string& help) {
    cmd->add_option_function<std::string>(
        flag,
        [this, key](const std::string& value) {
          overrides.emplace_back(key, value);
        },
        help);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"percolation thresholds for relay-augmented D2D networks on "
               "random street systems"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "run one replication and print its summary");
  ConfigFlags sim_flags;
  sim_flags.bind(simulate, /*with_grid=*/false);
  SimulateOptions sim_options;
  simulate->add_flag("--export-tess", sim_options.export_tess,
                     "write tessellation.csv");
  simulate->add_flag("--export-agents", sim_options.export_agents,
                     "write agents.csv");
  simulate->add_flag("--export-components", sim_options.export_components,
                     "write components.csv");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "run a parameter sweep and write CSV + JSON sidecar");
  ConfigFlags sweep_flags;
  sweep_flags.bind(sweep, /*with_grid=*/true);
  bool coupled = false;
  sweep->add_flag("--coupled", coupled,
                  "share street system and relay draws across the p grid "
                  "within each replication");

  // fit
  auto* fit = app.add_subcommand(
      "fit", "fit the logistic threshold to a sweep CSV");
  std::string fit_csv;
  fit->add_option("csv", fit_csv, "sweep CSV produced by the sweep command")
      ->required();
  FitOptions fit_options;
  fit->add_flag("--irls", fit_options.irls,
                "maximum-likelihood fit instead of logit least squares");
  fit->add_option("--bootstrap", fit_options.bootstrap,
                  "bootstrap resamples for the threshold CI (0 disables)");
  fit->add_option("--bootstrap-seed", fit_options.bootstrap_seed,
                  "seed for the bootstrap resampler");

  // reproduce
  auto* reproduce = app.add_subcommand(
      "reproduce", "run a canned preset and compare against reference values");
  std::string preset_name;
  std::string scale = "full";
  ReproduceOptions rep_options;
  reproduce
      ->add_option("preset", preset_name,
                   "one of: pc_site, hc, pc_of_H, uc_of_H, uc_table2")
      ->required();
  reproduce->add_option("--scale", scale, "full|desk (desk is fast + loose)");
  reproduce->add_option("--master-seed", rep_options.master_seed,
                        "master RNG seed");
  reproduce->add_option("--threads", rep_options.threads,
                        "worker threads (0 = all cores)");
  reproduce->add_option("--out-dir", rep_options.out_dir, "output directory");
  reproduce->add_flag("--plot-data", rep_options.plot_data,
                      "also write plot-ready curve CSVs");

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    return run_guarded([&] {
      return cmd_simulate(sim_flags.resolve(), sim_options);
    });
  }
  if (sweep->parsed()) {
    return run_guarded([&] {
      RunConfig config = sweep_flags.resolve();
      config.coupled = coupled;
      return cmd_sweep(std::move(config));
    });
  }
  if (fit->parsed()) {
    return run_guarded([&] { return cmd_fit(fit_csv, fit_options); });
  }
  if (reproduce->parsed()) {
    if (const char* env = std::getenv("STREETPERC_OUT_DIR")) {
      if (reproduce->count("--out-dir") == 0) rep_options.out_dir = env;
    }
    return run_guarded([&] {
      return cmd_reproduce(preset_name, scale, rep_options);
    });
  }
  return kOther;
}
