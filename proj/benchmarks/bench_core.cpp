#include <benchmark/benchmark.h>

#include "streetperc/connectivity.hpp"
#include "streetperc/geometry.hpp"
#include "streetperc/montecarlo.hpp"

using namespace streetperc;

namespace {

ParamPoint urban_point(double window_km) {
  ParamPoint point;
  point.relay_p = 0.8;
  point.users_per_edge = 1.0;
  point.hops_per_edge = 0.89;
  point.gamma = 20.0;
  point.window.side_km = window_km;
  return point;
}

void BM_BuildTessellation(benchmark::State& state) {
  Window window{static_cast<double>(state.range(0))};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng = make_rng(++seed);
    Tessellation tess = make_tessellation(100.0, window, rng);
    benchmark::DoNotOptimize(tess.edges.data());
  }
}
BENCHMARK(BM_BuildTessellation)->Arg(5)->Arg(10)->Arg(30)
    ->Unit(benchmark::kMillisecond);

void BM_CanyonComponents(benchmark::State& state) {
  const ParamPoint point = urban_point(static_cast<double>(state.range(0)));
  const ReplicationEnv env = build_replication_env(point, false, 7);
  const PhysicalParams phys = derive_physical(point);
  AgentSet agents;
  agents.users = env.users;
  agents.relays = relays_from_draws(env.tess, env.draws, point.relay_p);
  for (auto _ : state) {
    const EdgeOccupancy occ = index_agents(env.tess, agents);
    Components comp =
        build_components_canyon(occ, agents.size(), phys.radius_km);
    benchmark::DoNotOptimize(comp.component_count());
  }
}
BENCHMARK(BM_CanyonComponents)->Arg(10)->Arg(30)
    ->Unit(benchmark::kMillisecond);

void BM_GilbertComponents(benchmark::State& state) {
  ParamPoint point = urban_point(static_cast<double>(state.range(0)));
  point.mode = ShadowingMode::nosha;
  point.users_per_edge = 2.0;
  const ReplicationEnv env = build_replication_env(point, false, 7);
  const PhysicalParams phys = derive_physical(point);
  AgentSet agents;
  agents.users = env.users;
  for (auto _ : state) {
    Components comp = build_components_nosha(agents, phys.radius_km);
    benchmark::DoNotOptimize(comp.component_count());
  }
}
BENCHMARK(BM_GilbertComponents)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_SiteReplication(benchmark::State& state) {
  ParamPoint point = urban_point(static_cast<double>(state.range(0)));
  point.relay_p = 0.71;
  point.users_per_edge = 0.0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const ReplicationRecord record = run_replication(point, true, ++seed);
    benchmark::DoNotOptimize(record.percolates);
  }
}
BENCHMARK(BM_SiteReplication)->Arg(10)->Arg(30)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
