#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "streetperc/errors.hpp"
#include "streetperc/text_io.hpp"

namespace streetperc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw ParameterError("cannot create output directory '" + dir +
                         "': " + ec.message());
  }
}

void warn_nosha_p(const RunConfig& config) {
  if (config.mode == "nosha" && config.p < 1.0) {
    std::cerr << "warning: nosha mode ignores relays; configured p = "
              << config.p << " has no effect\n";
  }
}

json sweep_sidecar(const RunConfig& config, const SweepResult& sweep,
                   double runtime_sec, const std::string& csv_name) {
  json j;
  j["tool"] = "streetperc";
  j["version"] = kVersion;
  j["master_seed"] = sweep.master_seed;
  j["axis"] = axis_name(sweep.axis);
  j["site_perc"] = sweep.site_perc;
  j["coupled"] = sweep.coupled;
  json grid = json::array();
  for (const SweepRow& row : sweep.rows) grid.push_back(row.value);
  j["grid"] = grid;
  j["n_reps"] = sweep.rows.empty() ? 0 : sweep.rows.front().n_reps;
  j["config"] = config_to_json(config);
  j["runtime_sec"] = runtime_sec;
  j["csv"] = csv_name;
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParameterError("cannot open for writing: " + path);
  }
  out << j.dump(2) << '\n';
}

json fit_to_json(const LogisticFit& fit) {
  json j;
  j["a"] = fit.slope;
  j["b"] = fit.intercept;
  j["threshold"] = fit.threshold;
  j["residual_deviance"] = fit.residual_deviance;
  j["n_points_used"] = fit.n_points_used;
  if (std::isfinite(fit.ci_low)) {
    j["ci_low"] = fit.ci_low;
    j["ci_high"] = fit.ci_high;
  }
  return j;
}

}  // namespace

int cmd_simulate(RunConfig config, const SimulateOptions& options) {
  resolve_and_validate(config, /*need_axis=*/false);
  warn_nosha_p(config);
  ensure_out_dir(config.out_dir);

  const ParamPoint point = to_param_point(config);
  RunOptions run_options;
  run_options.threads = config.threads;
  run_options.margin_km = config.margin_km;

  const ReplicationEnv env = build_replication_env(
      point, config.site_perc, config.master_seed, config.margin_km);
  const PhysicalParams phys = derive_physical(point);

  AgentSet agents;
  agents.users = env.users;
  Components comp(0);
  if (point.mode == ShadowingMode::nosha) {
    comp = build_components_nosha(agents, phys.radius_km);
  } else {
    agents.relays = relays_from_draws(env.tess, env.draws, point.relay_p);
    const EdgeOccupancy occ = index_agents(env.tess, agents);
    comp = build_components_canyon(
        occ, agents.size(),
        config.site_perc ? kInfiniteRadius : phys.radius_km);
  }
  const CrossingResult crossing =
      point.mode == ShadowingMode::canyon
          ? detect_crossing_street_contact(
                comp, agents, env.tess,
                config.site_perc ? kInfiniteRadius : phys.radius_km)
          : detect_crossing(comp, agents, point.window, phys.radius_km);
  const TessStats stats = tessellation_stats(env.tess);

  std::cout << "seed " << config.master_seed << ": " << env.tess.vertices.size()
            << " vertices, " << env.tess.edges.size() << " edges, gamma_emp "
            << stats.gamma_emp << "\n"
            << "agents: " << agents.users.size() << " users, "
            << agents.relays.size() << " relays, "
            << comp.component_count() << " components\n"
            << "crossing: left_right=" << crossing.left_right
            << " top_bottom=" << crossing.top_bottom
            << " percolates=" << crossing.percolates << "\n";

  if (options.export_tess) {
    write_tessellation_csv(env.tess, config.out_dir + "/tessellation.csv");
  }
  if (options.export_agents) {
    write_agents_csv(agents, config.out_dir + "/agents.csv");
  }
  if (options.export_components) {
    write_components_csv(comp, agents, config.out_dir + "/components.csv");
  }
  return kOk;
}

int cmd_sweep(RunConfig config) {
  resolve_and_validate(config, /*need_axis=*/true);
  warn_nosha_p(config);
  ensure_out_dir(config.out_dir);

  const std::vector<double> grid = resolve_grid(config);
  const ParamPoint fixed = to_param_point(config);
  RunOptions options;
  options.threads = config.threads;
  options.coupled = config.coupled;
  options.margin_km = config.margin_km;
  options.keep_records = false;

  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult sweep =
      run_sweep(axis_from_name(config.axis), grid, fixed, config.site_perc,
                config.n_reps, config.master_seed, options);
  const auto t1 = std::chrono::steady_clock::now();
  const double runtime_sec = std::chrono::duration<double>(t1 - t0).count();

  const std::string base = config.out_dir + "/sweep_" + config.axis;
  write_sweep_csv(sweep, base + ".csv");
  write_json(sweep_sidecar(config, sweep, runtime_sec, "sweep_" + config.axis +
                                                            ".csv"),
             base + ".json");
  std::cout << "wrote " << base << ".csv (" << sweep.rows.size()
            << " rows, n_reps " << config.n_reps << ", " << runtime_sec
            << " s)\n";
  return kOk;
}

int cmd_fit(const std::string& csv_path, const FitOptions& options) {
  const std::vector<SweepCsvRow> rows = read_sweep_csv(csv_path);
  const std::vector<BinomialPoint> points = to_points(rows);

  BootstrapOptions bootstrap;
  bootstrap.resamples = options.bootstrap;
  bootstrap.seed = options.bootstrap_seed;
  LogisticFit fit = options.irls ? logit_fit_irls(points)
                                 : logit_fit_with_ci(points, bootstrap);

  // Sweeps in p and U rise with the parameter, sweeps in H fall; a fit
  // against that direction is a diagnostics failure, not an estimate.
  const TrendDirection direction = threshold_direction(points);
  const std::string axis = rows.front().axis;
  const TrendDirection expected = axis == "H" ? TrendDirection::decreasing
                                              : TrendDirection::increasing;
  if (direction != expected) {
    throw DegenerateFitError("fitted slope direction contradicts axis " +
                             axis + "; sweep data looks unusable");
  }

  const fs::path csv(csv_path);
  fs::path sidecar = csv;
  sidecar.replace_extension(".json");
  json j;
  if (fs::exists(sidecar)) {
    std::ifstream in(sidecar);
    try {
      in >> j;
    } catch (const json::exception&) {
      j = json::object();
    }
  }
  j["fit"] = fit_to_json(fit);
  j["fit"]["estimator"] = options.irls ? "irls" : "logit_ols";
  write_json(j, sidecar.string());

  fs::path curve = csv;
  curve.replace_extension();
  curve += "_curve.csv";
  write_fit_curve_csv(points, fit, curve.string());

  std::cout << "threshold " << format_double(fit.threshold);
  if (std::isfinite(fit.ci_low)) {
    std::cout << " (95% CI " << format_double(fit.ci_low) << " .. "
              << format_double(fit.ci_high) << ")";
  }
  std::cout << "  slope " << format_double(fit.slope) << "  intercept "
            << format_double(fit.intercept) << "\n"
            << "wrote " << sidecar.string() << " and " << curve.string()
            << "\n";
  return kOk;
}

int cmd_reproduce(const std::string& preset_name, const std::string& scale,
                  const ReproduceOptions& options) {
  const Preset preset = get_preset(preset_name, scale_from_name(scale));
  ensure_out_dir(options.out_dir);

  RunOptions run_options;
  run_options.threads = options.threads;
  run_options.keep_records = false;

  json report;
  report["tool"] = "streetperc";
  report["version"] = kVersion;
  report["preset"] = preset.name;
  report["scale"] = scale;
  report["master_seed"] = options.master_seed;
  report["targets"] = json::array();

  std::ofstream text(options.out_dir + "/" + preset.name + "_report.txt");
  bool all_pass = true;
  const auto t0 = std::chrono::steady_clock::now();
  for (const Target& target : preset.targets) {
    const TargetOutcome outcome =
        run_target(target, options.master_seed, run_options);
    const std::string base =
        options.out_dir + "/" + preset.name + "_" + target.sweep.label;
    write_sweep_csv(outcome.sweep, base + ".csv");

    json tj;
    tj["label"] = target.sweep.label;
    tj["expected"] = target.expected;
    tj["tolerance"] = outcome.tolerance;
    tj["reference"] = target.reference;
    tj["n_reps"] = target.sweep.n_reps;
    tj["window_km"] = target.sweep.fixed.window.side_km;
    if (outcome.degenerate) {
      tj["degenerate"] = true;
    } else {
      tj["estimate"] = outcome.estimate;
      tj["fit"] = fit_to_json(outcome.fit);
      if (options.plot_data) {
        write_fit_curve_csv(to_points(outcome.sweep), outcome.fit,
                            base + "_curve.csv");
      }
    }
    tj["pass"] = outcome.pass;
    report["targets"].push_back(tj);
    all_pass = all_pass && outcome.pass;

    std::ostringstream line;
    line << (outcome.pass ? "[PASS] " : "[FAIL] ") << preset.name << '/'
         << target.sweep.label << ": estimate ";
    if (outcome.degenerate) {
      line << "degenerate";
    } else {
      line << format_double(outcome.estimate);
    }
    line << " reference " << format_double(target.expected) << " tolerance +-"
         << format_double(outcome.tolerance);
    std::cout << line.str() << '\n';
    text << line.str() << '\n';
  }
  const auto t1 = std::chrono::steady_clock::now();
  report["runtime_sec"] = std::chrono::duration<double>(t1 - t0).count();
  report["pass"] = all_pass;
  write_json(report, options.out_dir + "/" + preset.name + "_report.json");

  if (options.plot_data && preset.name == "pc_of_H") {
    // reference thresholds with the quadratic interpolation on top
    const auto& pairs = reference_pc_of_h_pairs();
    const QuadraticFit qfit = quadratic_fit(pairs);
    std::ofstream out(options.out_dir + "/pc_of_H_reference_quadratic.csv",
                      std::ios::binary);
    out << "H,pc_reference,pc_fit\n";
    for (const auto& [h, pc] : pairs) {
      out << format_double(h) << ',' << format_double(pc) << ','
          << format_double(qfit.a2 * h * h + qfit.b1 * h + qfit.c0) << '\n';
    }
  }
  return all_pass ? kOk : kFailTarget;
}

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParameterError& err) {
    std::cerr << "parameter error: " << err.what() << '\n';
    return kParameter;
  } catch (const GeometryError& err) {
    std::cerr << "geometry error: " << err.what() << '\n';
    return kGeometry;
  } catch (const DegenerateFitError& err) {
    std::cerr << "degenerate fit: " << err.what() << '\n';
    return kDegenerateFit;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kOther;
  }
}

}  // namespace streetperc::cli
