#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streetperc/connectivity.hpp"
#include "streetperc/pointprocess.hpp"

namespace streetperc {

enum class Axis : std::uint8_t { relay_p, users_per_edge, hops_per_edge };

const char* axis_name(Axis axis);                 // "p" | "U" | "H"
Axis axis_from_name(const std::string& name);     // throws ParameterError

struct ReplicationRecord {
  std::int32_t rep_index = 0;
  std::uint64_t seed = 0;
  bool percolates = false;
  CrossingResult crossing;
  std::int64_t n_users = 0;
  std::int64_t n_relays = 0;
  std::int64_t n_components = 0;
  double wall_time_ms = 0.0;
};

struct SweepRow {
  Axis axis = Axis::relay_p;
  double value = 0.0;
  ParamPoint point;  // effective parameters at this row
  bool site_perc = false;
  std::int32_t n_reps = 0;
  std::int32_t n_percolating = 0;
  double proportion = 0.0;
  std::vector<ReplicationRecord> records;
};

struct SweepResult {
  Axis axis = Axis::relay_p;
  std::vector<SweepRow> rows;
  std::uint64_t master_seed = 0;
  bool site_perc = false;
  bool coupled = false;
};

struct RunOptions {
  int threads = 0;             // 0 = hardware concurrency
  bool coupled = false;        // share tessellation+draws across the p grid
  double margin_km = -1.0;     // < 0 = default 3/sqrt(lambda_S)
  double strip_km = -1.0;      // < 0 = default: strip r, or street contact
                               // with unbounded radius
  bool keep_records = true;
  // Share one street system across all replications of a row, redrawing
  // only the agents. Variance reduction for fast property tests; reported
  // runs resimulate everything per replication.
  bool reuse_tessellation = false;
};

// Everything random about one replication: the street system, the per-vertex
// relay draws and the user positions. Draw order is fixed (seeds, relay
// draws, users) so a seed fully determines the realization.
struct ReplicationEnv {
  std::shared_ptr<const Tessellation> tess;
  RelayDraws draws;
  std::vector<User> users;
};

struct EvalOutcome {
  CrossingResult crossing;
  std::int64_t n_users = 0;
  std::int64_t n_relays = 0;
  std::int64_t n_components = 0;
};

ReplicationEnv build_replication_env(const ParamPoint& point, bool site_perc,
                                     std::uint64_t seed,
                                     double margin_km = -1.0);

// Keeps the env immutable, so one env can be evaluated at several relay
// fractions (coupled sweeps, monotonicity checks).
EvalOutcome evaluate_env(const ReplicationEnv& env, const ParamPoint& point,
                         bool site_perc, double strip_km = -1.0);

// Full pipeline for one seed. site_perc realizes Bernoulli site percolation:
// relay-only with unbounded radius on edges, which coincides with vertex
// adjacency because adjacent open vertices always share an edge.
ReplicationRecord run_replication(const ParamPoint& point, bool site_perc,
                                  std::uint64_t seed,
                                  const RunOptions& options = {});

// n_reps replications at one parameter point; replication i is seeded by
// child_seed(master_seed, value_index, i).
SweepRow estimate_proportion(const ParamPoint& point, bool site_perc,
                             int n_reps, std::uint64_t master_seed,
                             std::uint64_t value_index = 0,
                             const RunOptions& options = {});

// One SweepRow per grid value. Grid must be nonempty and strictly
// increasing. With options.coupled (axis p only), each replication index
// reuses one tessellation and one set of vertex draws across the whole grid,
// making the percolation indicator exactly nondecreasing in p per
// replication.
SweepResult run_sweep(Axis axis, const std::vector<double>& grid,
                      const ParamPoint& fixed, bool site_perc, int n_reps,
                      std::uint64_t master_seed,
                      const RunOptions& options = {});

}  // namespace streetperc
