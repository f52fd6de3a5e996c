#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "streetperc/errors.hpp"

namespace streetperc::cli {

namespace {

const std::set<std::string> kKnownKeys = {
    "gamma",      "window_km", "margin_km", "p",
    "U",          "H",         "mode",      "site_perc",
    "axis",       "grid_min",  "grid_max",  "grid_steps",
    "grid_list",  "n_reps",    "master_seed", "out_dir",
    "threads"};

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "' expects a number, got '" +
                         value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long parsed = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "' expects an integer, got '" +
                         value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw ParameterError("config key '" + key + "' expects a boolean, got '" +
                       value + "'");
}

std::vector<double> parse_list(const std::string& key,
                               const std::string& value) {
  std::vector<double> values;
  std::istringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    values.push_back(parse_double(key, item));
  }
  return values;
}

}  // namespace

void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value, const std::string& source) {
  if (kKnownKeys.count(key) == 0) {
    throw ParameterError("unknown config key '" + key + "'");
  }
  if (key == "gamma") {
    config.gamma = parse_double(key, value);
  } else if (key == "window_km") {
    config.window_km = parse_double(key, value);
  } else if (key == "margin_km") {
    config.margin_km = parse_double(key, value);
  } else if (key == "p") {
    config.p = parse_double(key, value);
  } else if (key == "U") {
    config.U = parse_double(key, value);
  } else if (key == "H") {
    config.H = parse_double(key, value);
  } else if (key == "mode") {
    config.mode = value;
  } else if (key == "site_perc") {
    config.site_perc = parse_bool(key, value);
  } else if (key == "axis") {
    config.axis = value;
  } else if (key == "grid_min") {
    config.grid_min = parse_double(key, value);
  } else if (key == "grid_max") {
    config.grid_max = parse_double(key, value);
  } else if (key == "grid_steps") {
    config.grid_steps = static_cast<int>(parse_int(key, value));
  } else if (key == "grid_list") {
    config.grid_list = parse_list(key, value);
  } else if (key == "n_reps") {
    config.n_reps = static_cast<int>(parse_int(key, value));
  } else if (key == "master_seed") {
    config.master_seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "out_dir") {
    config.out_dir = value;
  } else if (key == "threads") {
    config.threads = static_cast<int>(parse_int(key, value));
  }
  config.provenance[key] = source;
}

void apply_env_overrides(RunConfig& config) {
  if (const char* env = std::getenv("STREETPERC_OUT_DIR")) {
    apply_override(config, "out_dir", env, "env");
  }
}

RunConfig parse_config_file(const std::string& path) {
  RunConfig config;
  if (path.empty()) return config;

  std::ifstream in(path);
  if (!in) {
    throw ParameterError("cannot open config file: " + path);
  }
  std::vector<std::string> unknown;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(line_no) +
                           " is not key=value: '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (kKnownKeys.count(key) == 0) {
      unknown.push_back(key);
      continue;
    }
    apply_override(config, key, value, "file");
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const std::string& key : unknown) msg += " '" + key + "'";
    throw ParameterError(msg);
  }
  return config;
}

void resolve_and_validate(RunConfig& config, bool need_axis) {
  if (config.window_km == 0.0) {
    // The U_c studies run on 10x10 km windows; everything else on 30x30.
    config.window_km = (config.axis == "U") ? 10.0 : 30.0;
    config.provenance.emplace("window_km", "default");
  }

  std::vector<std::string> problems;
  const auto bad = [&](const std::string& msg) { problems.push_back(msg); };

  if (!(config.gamma > 0.0) || !std::isfinite(config.gamma)) {
    bad("gamma must be positive and finite");
  }
  if (!(config.window_km > 0.0) || !std::isfinite(config.window_km)) {
    bad("window_km must be positive and finite");
  }
  if (config.margin_km >= 0.0 && !std::isfinite(config.margin_km)) {
    bad("margin_km must be finite");
  }
  if (!(config.p >= 0.0 && config.p <= 1.0)) {
    bad("p must lie in [0,1]");
  }
  if (!(config.U >= 0.0) || !std::isfinite(config.U)) {
    bad("U must be nonnegative and finite");
  }
  if (!(config.H > 0.0) || !std::isfinite(config.H)) {
    bad("H must be positive and finite");
  }
  if (config.mode != "canyon" && config.mode != "nosha") {
    bad("mode must be canyon or nosha");
  }
  if (config.site_perc && config.U != 0.0) {
    bad("site_perc requires U = 0");
  }
  if (config.site_perc && config.mode != "canyon") {
    bad("site_perc requires mode = canyon");
  }
  if (config.n_reps < 1) {
    bad("n_reps must be at least 1");
  }
  if (config.threads < 0) {
    bad("threads must be nonnegative");
  }
  if (need_axis) {
    if (config.axis != "p" && config.axis != "U" && config.axis != "H") {
      bad("axis must be one of p|U|H");
    } else {
      try {
        const std::vector<double> grid = resolve_grid(config);
        ParamPoint probe = to_param_point(config);
        for (double value : grid) {
          if (config.axis == "p") probe.relay_p = value;
          if (config.axis == "U") probe.users_per_edge = value;
          if (config.axis == "H") probe.hops_per_edge = value;
          probe.validate();
        }
        if (config.coupled && config.axis != "p") {
          bad("coupled sweeps are only defined for axis p");
        }
        if (config.site_perc && config.axis == "U") {
          bad("site_perc cannot sweep U");
        }
      } catch (const ParameterError& err) {
        bad(err.what());
      }
    }
  } else if (!config.axis.empty() && config.axis != "p" &&
             config.axis != "U" && config.axis != "H") {
    bad("axis must be one of p|U|H");
  }

  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw ParameterError(msg);
  }
}

std::vector<double> resolve_grid(const RunConfig& config) {
  std::vector<double> grid;
  if (!config.grid_list.empty()) {
    if (config.grid_steps != 0) {
      throw ParameterError("give either grid_list or grid_min/max/steps");
    }
    grid = config.grid_list;
  } else {
    if (config.grid_steps < 1) {
      throw ParameterError("grid_steps must be at least 1");
    }
    if (config.grid_steps == 1) {
      grid.push_back(config.grid_min);
    } else {
      if (!(config.grid_max > config.grid_min)) {
        throw ParameterError("grid_max must exceed grid_min");
      }
      const double step = (config.grid_max - config.grid_min) /
                          static_cast<double>(config.grid_steps - 1);
      for (int i = 0; i < config.grid_steps; ++i) {
        grid.push_back(config.grid_min + step * static_cast<double>(i));
      }
      grid.back() = config.grid_max;  // avoid accumulated rounding at the top
    }
  }
  if (grid.empty()) {
    throw ParameterError("sweep grid is empty");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ParameterError("sweep grid must be strictly increasing");
    }
  }
  return grid;
}

ParamPoint to_param_point(const RunConfig& config) {
  ParamPoint point;
  point.relay_p = config.p;
  point.users_per_edge = config.U;
  point.hops_per_edge = config.H;
  point.gamma = config.gamma;
  point.window.side_km = config.window_km;
  point.mode = mode_from_name(config.mode);
  return point;
}

nlohmann::json config_to_json(const RunConfig& config) {
  nlohmann::json j;
  j["gamma"] = config.gamma;
  j["window_km"] = config.window_km;
  j["margin_km"] = config.margin_km;
  j["p"] = config.p;
  j["U"] = config.U;
  j["H"] = config.H;
  j["mode"] = config.mode;
  j["site_perc"] = config.site_perc;
  j["axis"] = config.axis;
  j["grid_min"] = config.grid_min;
  j["grid_max"] = config.grid_max;
  j["grid_steps"] = config.grid_steps;
  j["grid_list"] = config.grid_list;
  j["n_reps"] = config.n_reps;
  j["master_seed"] = config.master_seed;
  j["out_dir"] = config.out_dir;
  j["threads"] = config.threads;
  j["coupled"] = config.coupled;
  j["provenance"] = config.provenance;
  return j;
}

}  // namespace streetperc::cli
