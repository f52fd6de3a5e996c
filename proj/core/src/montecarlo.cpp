#include "streetperc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "streetperc/errors.hpp"

namespace streetperc {

namespace {

// Runs fn(0..n) on up to `threads` workers. Task order is irrelevant to the
// result: every task writes only its own slot.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  std::size_t n_workers = threads > 0 ? static_cast<std::size_t>(threads) : hw;
  n_workers = std::min(n_workers, n);
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}


void check_site_perc(const ParamPoint& point, bool site_perc) {
  if (site_perc && point.users_per_edge != 0.0) {
    throw ParameterError("site percolation mode requires U = 0");
  }
  if (site_perc && point.mode != ShadowingMode::canyon) {
    throw ParameterError("site percolation mode requires canyon shadowing");
  }
}

}  // namespace

const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::relay_p:
      return "p";
    case Axis::users_per_edge:
      return "U";
    case Axis::hops_per_edge:
      return "H";
  }
  return "?";
}

Axis axis_from_name(const std::string& name) {
  if (name == "p") return Axis::relay_p;
  if (name == "U") return Axis::users_per_edge;
  if (name == "H") return Axis::hops_per_edge;
  throw ParameterError("unknown axis '" + name + "' (expected p|U|H)");
}

ReplicationEnv build_replication_env(const ParamPoint& point, bool site_perc,
                                     std::uint64_t seed, double margin_km) {
  check_site_perc(point, site_perc);
  const PhysicalParams phys = derive_physical(point);
  Rng rng = make_rng(seed);
  ReplicationEnv env;
  env.tess = make_tessellation(phys.lambda_s, point.window, rng, margin_km);
  env.draws = sample_relay_draws(env.tess, rng);
  env.users = sample_users(env.tess, phys.lambda, rng);
  return env;
}

EvalOutcome evaluate_env(const ReplicationEnv& env, const ParamPoint& point,
                         bool site_perc, double strip_km) {
  check_site_perc(point, site_perc);
  const PhysicalParams phys = derive_physical(point);
  const double strip = strip_km > 0.0 ? strip_km : phys.radius_km;

  AgentSet agents;
  Components comp(0);
  if (point.mode == ShadowingMode::nosha) {
    agents.users = env.users;
    comp = build_components_nosha(agents, phys.radius_km);
  } else {
    agents.users = env.users;
    agents.relays = relays_from_draws(env.tess, env.draws, point.relay_p);
    const EdgeOccupancy occ = index_agents(env.tess, agents);
    const double radius = site_perc ? kInfiniteRadius : phys.radius_km;
    comp = build_components_canyon(occ, agents.size(), radius);
  }

  EvalOutcome outcome;
  if (point.mode == ShadowingMode::canyon && strip_km <= 0.0) {
    // canyon shadowing admits no path to the boundary except along a street
    const double reach = site_perc ? kInfiniteRadius : phys.radius_km;
    outcome.crossing =
        detect_crossing_street_contact(comp, agents, env.tess, reach);
  } else {
    outcome.crossing = detect_crossing(comp, agents, point.window, strip);
  }
  outcome.n_users = static_cast<std::int64_t>(agents.users.size());
  outcome.n_relays = static_cast<std::int64_t>(agents.relays.size());
  outcome.n_components = static_cast<std::int64_t>(comp.component_count());
  return outcome;
}

ReplicationRecord run_replication(const ParamPoint& point, bool site_perc,
                                  std::uint64_t seed,
                                  const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const ReplicationEnv env =
      build_replication_env(point, site_perc, seed, options.margin_km);
  const EvalOutcome outcome =
      evaluate_env(env, point, site_perc, options.strip_km);
  const auto t1 = std::chrono::steady_clock::now();

  ReplicationRecord record;
  record.seed = seed;
  record.crossing = outcome.crossing;
  record.percolates = outcome.crossing.percolates;
  record.n_users = outcome.n_users;
  record.n_relays = outcome.n_relays;
  record.n_components = outcome.n_components;
  record.wall_time_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  return record;
}

namespace {

SweepRow make_row(Axis axis, double value, const ParamPoint& point,
                  bool site_perc, std::vector<ReplicationRecord> records,
                  bool keep_records) {
  SweepRow row;
  row.axis = axis;
  row.value = value;
  row.point = point;
  row.site_perc = site_perc;
  row.n_reps = static_cast<std::int32_t>(records.size());
  row.n_percolating = 0;
  for (const ReplicationRecord& r : records) {
    if (r.percolates) ++row.n_percolating;
  }
  row.proportion = row.n_reps > 0 ? static_cast<double>(row.n_percolating) /
                                        static_cast<double>(row.n_reps)
                                  : 0.0;
  if (keep_records) row.records = std::move(records);
  return row;
}

ParamPoint point_at(const ParamPoint& fixed, Axis axis, double value) {
  ParamPoint point = fixed;
  switch (axis) {
    case Axis::relay_p:
      point.relay_p = value;
      break;
    case Axis::users_per_edge:
      point.users_per_edge = value;
      break;
    case Axis::hops_per_edge:
      point.hops_per_edge = value;
      break;
  }
  return point;
}

}  // namespace

SweepRow estimate_proportion(const ParamPoint& point, bool site_perc,
                             int n_reps, std::uint64_t master_seed,
                             std::uint64_t value_index,
                             const RunOptions& options) {
  if (n_reps < 1) {
    throw ParameterError("n_reps must be at least 1");
  }
  check_site_perc(point, site_perc);
  point.validate();
  std::vector<ReplicationRecord> records(static_cast<std::size_t>(n_reps));
  parallel_for(static_cast<std::size_t>(n_reps), options.threads,
               [&](std::size_t i) {
                 const std::uint64_t seed =
                     child_seed(master_seed, value_index, i);
                 records[i] = run_replication(point, site_perc, seed, options);
                 records[i].rep_index = static_cast<std::int32_t>(i);
               });
  // axis is unknown for a standalone row; report the swept field as p
  return make_row(Axis::relay_p, point.relay_p, point, site_perc,
                  std::move(records), options.keep_records);
}

SweepResult run_sweep(Axis axis, const std::vector<double>& grid,
                      const ParamPoint& fixed, bool site_perc, int n_reps,
                      std::uint64_t master_seed, const RunOptions& options) {
  if (grid.empty()) {
    throw ParameterError("sweep grid must be nonempty");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ParameterError("sweep grid must be strictly increasing");
    }
  }
  if (n_reps < 1) {
    throw ParameterError("n_reps must be at least 1");
  }
  for (double value : grid) {
    point_at(fixed, axis, value).validate();  // reject bad grid values early
  }
  if (options.coupled && axis != Axis::relay_p) {
    throw ParameterError("coupled sweeps are only defined for axis p");
  }
  check_site_perc(point_at(fixed, axis, grid.front()), site_perc);

  SweepResult result;
  result.axis = axis;
  result.master_seed = master_seed;
  result.site_perc = site_perc;
  result.coupled = options.coupled;

  const std::size_t n_values = grid.size();
  const std::size_t reps = static_cast<std::size_t>(n_reps);
  std::vector<std::vector<ReplicationRecord>> records(n_values);
  for (auto& column : records) column.resize(reps);

  if (options.coupled) {
    // One street system and one set of vertex draws per replication index,
    // shared across the whole p grid.
    parallel_for(reps, options.threads, [&](std::size_t i) {
      const std::uint64_t seed = child_seed(master_seed, 0, i);
      const ParamPoint base = point_at(fixed, axis, grid.front());
      const ReplicationEnv env =
          build_replication_env(base, site_perc, seed, options.margin_km);
      for (std::size_t v = 0; v < n_values; ++v) {
        const ParamPoint point = point_at(fixed, axis, grid[v]);
        const auto t0 = std::chrono::steady_clock::now();
        const EvalOutcome outcome =
            evaluate_env(env, point, site_perc, options.strip_km);
        const auto t1 = std::chrono::steady_clock::now();
        ReplicationRecord& record = records[v][i];
        record.rep_index = static_cast<std::int32_t>(i);
        record.seed = seed;
        record.crossing = outcome.crossing;
        record.percolates = outcome.crossing.percolates;
        record.n_users = outcome.n_users;
        record.n_relays = outcome.n_relays;
        record.n_components = outcome.n_components;
        record.wall_time_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
    });
  } else {
    parallel_for(n_values * reps, options.threads, [&](std::size_t task) {
      const std::size_t v = task / reps;
      const std::size_t i = task % reps;
      const std::uint64_t seed = child_seed(master_seed, v, i);
      const ParamPoint point = point_at(fixed, axis, grid[v]);
      ReplicationRecord record =
          run_replication(point, site_perc, seed, options);
      record.rep_index = static_cast<std::int32_t>(i);
      records[v][i] = std::move(record);
    });
  }

  result.rows.reserve(n_values);
  for (std::size_t v = 0; v < n_values; ++v) {
    result.rows.push_back(make_row(axis, grid[v], point_at(fixed, axis, grid[v]),
                                   site_perc, std::move(records[v]),
                                   options.keep_records));
  }
  return result;
}

}  // namespace streetperc
