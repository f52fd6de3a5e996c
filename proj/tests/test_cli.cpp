#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "presets.hpp"
#include "streetperc/errors.hpp"
#include "streetperc/text_io.hpp"

using namespace streetperc;
using namespace streetperc::cli;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("streetperc_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("minimal config resolves with defaults filled") {
  const fs::path dir = make_temp_dir("cfg");
  const std::string file = write_file(dir / "run.cfg",
                                      "# comment\n"
                                      "gamma = 20\n"
                                      "window_km = 30\n");
  RunConfig config = parse_config_file(file);
  apply_override(config, "axis", "p", "flag");
  apply_override(config, "grid_min", "0.6", "flag");
  apply_override(config, "grid_max", "0.8", "flag");
  apply_override(config, "grid_steps", "3", "flag");
  resolve_and_validate(config, /*need_axis=*/true);
  CHECK(config.n_reps == 100);
  CHECK(config.mode == "canyon");
  CHECK(config.window_km == 30.0);
  CHECK(config.provenance.at("gamma") == "file");
  CHECK(config.provenance.at("axis") == "flag");
  const auto grid = resolve_grid(config);
  REQUIRE(grid.size() == 3);
  CHECK(grid.front() == 0.6);
  CHECK(grid.back() == 0.8);
}

TEST_CASE("unknown keys and bad values are hard errors") {
  const fs::path dir = make_temp_dir("cfg_bad");
  const std::string bad_key =
      write_file(dir / "bad_key.cfg", "gamma = 20\nwindowkm = 30\n");
  CHECK_THROWS_WITH_AS(parse_config_file(bad_key),
                       doctest::Contains("windowkm"), ParameterError);

  const std::string bad_p = write_file(dir / "bad_p.cfg", "p = 1.3\n");
  RunConfig config = parse_config_file(bad_p);
  CHECK_THROWS_WITH_AS(resolve_and_validate(config, false),
                       doctest::Contains("p must"), ParameterError);
}

TEST_CASE("flags win over file values and provenance records it") {
  const fs::path dir = make_temp_dir("cfg_prec");
  const std::string file = write_file(dir / "run.cfg", "n_reps = 10\np=0.5\n");
  RunConfig config = parse_config_file(file);
  apply_override(config, "n_reps", "25", "flag");
  resolve_and_validate(config, false);
  CHECK(config.n_reps == 25);
  CHECK(config.p == 0.5);
  CHECK(config.provenance.at("n_reps") == "flag");
  CHECK(config.provenance.at("p") == "file");
}

TEST_CASE("environment override touches only the output directory") {
  RunConfig config;
  setenv("STREETPERC_OUT_DIR", "/tmp/env_dir", 1);
  apply_env_overrides(config);
  unsetenv("STREETPERC_OUT_DIR");
  CHECK(config.out_dir == "/tmp/env_dir");
  CHECK(config.provenance.at("out_dir") == "env");
}

TEST_CASE("window defaults depend on the swept axis") {
  RunConfig u_axis;
  u_axis.axis = "U";
  u_axis.grid_min = 0.0;
  u_axis.grid_max = 1.0;
  u_axis.grid_steps = 3;
  resolve_and_validate(u_axis, true);
  CHECK(u_axis.window_km == 10.0);

  RunConfig p_axis;
  p_axis.axis = "p";
  p_axis.grid_min = 0.6;
  p_axis.grid_max = 0.8;
  p_axis.grid_steps = 3;
  resolve_and_validate(p_axis, true);
  CHECK(p_axis.window_km == 30.0);
}

TEST_CASE("grid specs are validated") {
  RunConfig config;
  config.axis = "p";
  config.grid_list = {0.6, 0.7, 0.8};
  config.grid_steps = 5;
  CHECK_THROWS_AS(resolve_grid(config), ParameterError);

  config.grid_steps = 0;
  const auto grid = resolve_grid(config);
  CHECK(grid.size() == 3);

  config.grid_list = {0.8, 0.6};
  CHECK_THROWS_AS(resolve_grid(config), ParameterError);

  config.grid_list.clear();
  CHECK_THROWS_AS(resolve_grid(config), ParameterError);
}

TEST_CASE("sweep command writes reproducible files") {
  const fs::path dir1 = make_temp_dir("sweep1");
  const fs::path dir2 = make_temp_dir("sweep2");

  const auto run = [&](const fs::path& dir, int threads) {
    RunConfig config;
    config.axis = "p";
    config.grid_min = 0.6;
    config.grid_max = 0.8;
    config.grid_steps = 3;
    config.site_perc = true;
    config.window_km = 5.0;
    config.n_reps = 2;
    config.master_seed = 11;
    config.threads = threads;
    config.out_dir = dir.string();
    return cmd_sweep(std::move(config));
  };

  const auto t0 = std::chrono::steady_clock::now();
  CHECK(run(dir1, 1) == kOk);
  const auto t1 = std::chrono::steady_clock::now();
  CHECK(std::chrono::duration<double>(t1 - t0).count() < 10.0);  // smoke budget
  CHECK(run(dir2, 2) == kOk);
  const std::string csv1 = slurp(dir1 / "sweep_p.csv");
  const std::string csv2 = slurp(dir2 / "sweep_p.csv");
  CHECK(!csv1.empty());
  CHECK(csv1 == csv2);  // byte-identical at different thread counts

  // sidecar carries the resolved config and seed
  nlohmann::json sidecar;
  std::ifstream in(dir1 / "sweep_p.json");
  in >> sidecar;
  CHECK(sidecar["master_seed"] == 11);
  CHECK(sidecar["config"]["window_km"] == 5.0);
  CHECK(sidecar["csv"] == "sweep_p.csv");
}

TEST_CASE("fit command round-trips a sweep CSV") {
  const fs::path dir = make_temp_dir("fit");
  RunConfig config;
  config.axis = "p";
  config.grid_list = {0.55, 0.65, 0.75, 0.85};
  config.site_perc = true;
  config.window_km = 6.0;
  config.n_reps = 20;
  config.master_seed = 5;
  config.out_dir = dir.string();
  REQUIRE(cmd_sweep(std::move(config)) == kOk);

  FitOptions options;
  options.bootstrap = 100;
  CHECK(cmd_fit((dir / "sweep_p.csv").string(), options) == kOk);

  nlohmann::json sidecar;
  std::ifstream in(dir / "sweep_p.json");
  in >> sidecar;
  REQUIRE(sidecar.contains("fit"));
  CHECK(sidecar["fit"].contains("threshold"));
  CHECK(sidecar["fit"].contains("ci_low"));
  CHECK(fs::exists(dir / "sweep_p_curve.csv"));

  // malformed CSV -> schema error; saturated sweep -> degenerate fit
  const fs::path broken = dir / "broken.csv";
  write_file(broken, "not,a,sweep\n1,2,3\n");
  CHECK(run_guarded([&] { return cmd_fit(broken.string(), options); }) ==
        kParameter);

  const fs::path saturated = dir / "saturated.csv";
  write_file(saturated,
             "axis,value,p,U,H,gamma,window_km,mode,site_perc,n_reps,"
             "n_percolating,proportion\n"
             "p,0.6,0.6,0,1,20,5,canyon,1,10,10,1\n"
             "p,0.7,0.7,0,1,20,5,canyon,1,10,10,1\n"
             "p,0.8,0.8,0,1,20,5,canyon,1,10,10,1\n");
  CHECK(run_guarded([&] { return cmd_fit(saturated.string(), options); }) ==
        kDegenerateFit);
}

TEST_CASE("presets are defined for both scales") {
  for (const std::string& name : preset_names()) {
    for (const Scale scale : {Scale::full, Scale::desk}) {
      const Preset preset = get_preset(name, scale);
      CHECK(!preset.targets.empty());
      for (const Target& target : preset.targets) {
        CHECK(!target.sweep.grid.empty());
        CHECK(target.expected >= 0.0);
        CHECK((target.abs_tol > 0.0 || target.rel_tol > 0.0));
        CHECK(!target.reference.empty());
        target.sweep.fixed.validate();
      }
    }
  }
  CHECK_THROWS_AS(get_preset("nope", Scale::full), ParameterError);
  CHECK_THROWS_AS(scale_from_name("huge"), ParameterError);
  // label-keyed seeds do not depend on target order
  CHECK(target_seed(1, "pc_site") == target_seed(1, "pc_site"));
  CHECK(target_seed(1, "pc_site") != target_seed(1, "hc"));
}

TEST_CASE("reference thresholds follow the published quadratic shape") {
  const QuadraticFit fit = quadratic_fit(reference_pc_of_h_pairs());
  CHECK(std::abs(fit.a2 - 1.45) <= 0.15);
  CHECK(std::abs(fit.b1 + 0.84) <= 0.15);
  CHECK(std::abs(fit.c0 - 0.83) <= 0.10);
  CHECK(fit.r_squared >= 0.99);
}

TEST_SUITE_END();
