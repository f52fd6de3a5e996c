#include <doctest.h>

#include <cmath>

#include "streetperc/connectivity.hpp"
#include "streetperc/errors.hpp"
#include "test_support.hpp"

using namespace streetperc;
using namespace streetperc::testing;

namespace {

AgentSet users_on_edge(const std::vector<double>& ts, const Tessellation& tess,
                       std::int32_t edge = 0) {
  AgentSet agents;
  const Edge& e = tess.edges[edge];
  for (double t : ts) {
    const double frac = t / e.length_km;
    agents.users.push_back({edge, t, e.a.x + frac * (e.b.x - e.a.x),
                            e.a.y + frac * (e.b.y - e.a.y)});
  }
  return agents;
}

}  // namespace

TEST_SUITE_BEGIN("connectivity");

TEST_CASE("agents are indexed onto their streets") {
  const Tessellation star = star_tessellation(3, 1.0, 4.0);
  AgentSet agents;
  agents.users.push_back({1, 0.5, 0, 0});  // one user on arm 1
  agents.relays.push_back({0, star.vertices[0].x, star.vertices[0].y});

  const EdgeOccupancy occ = index_agents(star, agents);
  REQUIRE(occ.offsets.size() == 4);
  // the relay shows up on all 3 arms, the user once
  CHECK(occ.entries.size() == 4);
  int relay_entries = 0;
  for (const OccEntry& entry : occ.entries) {
    if (entry.agent == 1) ++relay_entries;
  }
  CHECK(relay_entries == 3);
  // user entry carries its arclength
  CHECK(occ.entries[occ.offsets[1]].t == 0.0);       // relay at the vertex
  CHECK(occ.entries[occ.offsets[1] + 1].t == 0.5);   // then the user
}

TEST_CASE("entry count equals users plus relay degrees") {
  Window window{5.0};
  Rng rng = make_rng(8);
  const Tessellation tess = make_tessellation(64.0, window, rng);
  AgentSet agents;
  agents.users = sample_users(tess, 10.0, rng);
  agents.relays = sample_relays(tess, 0.5, rng);

  const EdgeOccupancy occ = index_agents(tess, agents);
  std::size_t expected = agents.users.size();
  for (const Relay& r : agents.relays) {
    expected += tess.incidence[r.vertex].size();
  }
  CHECK(occ.entries.size() == expected);

  AgentSet broken;
  broken.users.push_back({static_cast<std::int32_t>(tess.edges.size()), 0.0,
                          0.0, 0.0});
  CHECK_THROWS_AS(index_agents(tess, broken), IntegrityError);
}

TEST_CASE("line-of-sight chaining on one street") {
  const Tessellation tess = single_edge_tessellation(2.0, 4.0);
  const double r = 0.25;

  AgentSet close = users_on_edge({0.5, 0.5 + 0.9 * r}, tess);
  const EdgeOccupancy occ = index_agents(tess, close);
  Components comp = build_components_canyon(occ, close.size(), r);
  CHECK(comp.same(0, 1));

  AgentSet apart = users_on_edge({0.5, 0.5 + 1.1 * r}, tess);
  Components comp2 =
      build_components_canyon(index_agents(tess, apart), apart.size(), r);
  CHECK(!comp2.same(0, 1));
}

TEST_CASE("proximity without a shared street is not a link") {
  // two parallel streets 0.01 km apart, users face each other
  Tessellation tess;
  tess.window.side_km = 4.0;
  for (double y : {2.0, 2.01}) {
    Edge e;
    e.a = Endpoint{EndpointKind::boundary, -1, 1.0, y};
    e.b = Endpoint{EndpointKind::boundary, -1, 3.0, y};
    e.length_km = 2.0;
    tess.edges.push_back(e);
  }
  AgentSet agents;
  agents.users.push_back({0, 1.0, 2.0, 2.0});
  agents.users.push_back({1, 1.0, 2.0, 2.01});
  const double r = 0.1;  // 10x their Euclidean distance
  Components comp =
      build_components_canyon(index_agents(tess, agents), agents.size(), r);
  CHECK(!comp.same(0, 1));
}

TEST_CASE("a relay bridges agents across adjacent streets") {
  const Tessellation star = star_tessellation(3, 1.0, 4.0);
  const Vec2 center = star.vertices[0];
  const double r = 0.2;

  AgentSet agents;
  // one user per arm, each within r of the crossroad but far from the others
  for (std::int32_t arm = 0; arm < 2; ++arm) {
    const Edge& e = star.edges[arm];
    const double t = 0.15;
    const double frac = t / e.length_km;
    agents.users.push_back({arm, t, e.a.x + frac * (e.b.x - e.a.x),
                            e.a.y + frac * (e.b.y - e.a.y)});
  }
  CHECK(distance(agents.position(0), agents.position(1)) > r);

  Components no_relay =
      build_components_canyon(index_agents(star, agents), agents.size(), r);
  CHECK(!no_relay.same(0, 1));

  agents.relays.push_back({0, center.x, center.y});
  Components with_relay =
      build_components_canyon(index_agents(star, agents), agents.size(), r);
  CHECK(with_relay.same(0, 1));
  CHECK(with_relay.same(0, 2));
}

TEST_CASE("star instances match the pairwise oracle") {
  Rng rng = make_rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    const Tessellation star = star_tessellation(5, 1.0, 4.0);
    AgentSet agents;
    const int n_users = 200;
    for (int i = 0; i < n_users; ++i) {
      const std::int32_t arm = static_cast<std::int32_t>(rng() % 5);
      const Edge& e = star.edges[arm];
      const double t = uniform01(rng) * e.length_km;
      const double frac = t / e.length_km;
      agents.users.push_back({arm, t, e.a.x + frac * (e.b.x - e.a.x),
                              e.a.y + frac * (e.b.y - e.a.y)});
    }
    if (trial % 2 == 0) {
      agents.relays.push_back(
          {0, star.vertices[0].x, star.vertices[0].y});
    }
    const double r = 0.02 + 0.08 * uniform01(rng);
    Components comp =
        build_components_canyon(index_agents(star, agents), agents.size(), r);
    CHECK(same_partition(components_to_labels(comp),
                         brute_force_canyon_components(star, agents, r)));
  }
}

TEST_CASE("chaining consecutive occupants equals the all-pairs rule") {
  // on one street the in-between agent is never farther than the endpoints
  Rng rng = make_rng(777);
  const Tessellation tess = single_edge_tessellation(3.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 1000);
    std::vector<double> ts;
    for (int i = 0; i < n; ++i) ts.push_back(uniform01(rng) * 3.0);
    AgentSet agents = users_on_edge(ts, tess);
    const double r = 0.001 + 0.02 * uniform01(rng);
    Components comp =
        build_components_canyon(index_agents(tess, agents), agents.size(), r);
    CHECK(same_partition(components_to_labels(comp),
                         brute_force_canyon_components(tess, agents, r)));
  }
}

TEST_CASE("components are monotone in the radius") {
  Window window{4.0};
  Rng rng = make_rng(55);
  const Tessellation tess = make_tessellation(49.0, window, rng);
  AgentSet agents;
  agents.users = sample_users(tess, 6.0, rng);
  agents.relays = sample_relays(tess, 0.6, rng);
  const EdgeOccupancy occ = index_agents(tess, agents);

  const double r1 = 0.03, r2 = 0.08;
  Components c1 = build_components_canyon(occ, agents.size(), r1);
  Components c2 = build_components_canyon(occ, agents.size(), r2);
  for (std::size_t i = 0; i < agents.size(); i += 7) {
    for (std::size_t j = i + 1; j < agents.size(); j += 13) {
      if (c1.same(static_cast<std::int32_t>(i), static_cast<std::int32_t>(j))) {
        CHECK(c2.same(static_cast<std::int32_t>(i),
                      static_cast<std::int32_t>(j)));
      }
    }
  }
}

TEST_CASE("adding relays never disconnects users") {
  Window window{4.0};
  Rng rng = make_rng(66);
  const Tessellation tess = make_tessellation(49.0, window, rng);
  AgentSet base;
  base.users = sample_users(tess, 8.0, rng);
  const RelayDraws draws = sample_relay_draws(tess, rng);
  const double r = 0.06;

  AgentSet lo = base, hi = base;
  lo.relays = relays_from_draws(tess, draws, 0.4);
  hi.relays = relays_from_draws(tess, draws, 0.8);
  Components comp_lo =
      build_components_canyon(index_agents(tess, lo), lo.size(), r);
  Components comp_hi =
      build_components_canyon(index_agents(tess, hi), hi.size(), r);

  const std::size_t n_users = base.users.size();
  for (std::size_t i = 0; i < n_users; i += 5) {
    for (std::size_t j = i + 1; j < n_users; j += 11) {
      if (comp_lo.same(static_cast<std::int32_t>(i),
                       static_cast<std::int32_t>(j))) {
        CHECK(comp_hi.same(static_cast<std::int32_t>(i),
                           static_cast<std::int32_t>(j)));
      }
    }
  }
}

TEST_CASE("gilbert components match the pairwise oracle") {
  Rng rng = make_rng(999);
  Window window{2.0};
  for (int trial = 0; trial < 20; ++trial) {
    AgentSet agents;
    const int n = 50 + static_cast<int>(rng() % 450);
    for (int i = 0; i < n; ++i) {
      agents.users.push_back({0, 0.0, uniform01(rng) * 2.0,
                              uniform01(rng) * 2.0});
    }
    const double r = 0.02 + 0.1 * uniform01(rng);
    Components comp = build_components_nosha(agents, r);
    CHECK(same_partition(components_to_labels(comp),
                         brute_force_gilbert_components(agents, r)));
  }
}

TEST_CASE("gilbert rule links across streets and isolates far users") {
  AgentSet agents;
  agents.users.push_back({0, 0.0, 1.000, 1.0});
  agents.users.push_back({1, 0.0, 1.099, 1.0});  // 0.99 r away
  agents.users.push_back({2, 0.0, 1.9, 1.9});    // isolated
  Components comp = build_components_nosha(agents, 0.1);
  CHECK(comp.same(0, 1));
  CHECK(!comp.same(0, 2));
  CHECK(comp.component_count() == 2);
}

TEST_CASE("union-find agrees with traversal on the explicit link list") {
  Rng rng = make_rng(31337);
  Window window{3.0};
  const Tessellation tess = make_tessellation(49.0, window, rng);
  AgentSet agents;
  agents.users = sample_users(tess, 5.0, rng);
  agents.relays = sample_relays(tess, 0.7, rng);
  if (agents.size() > 1000) {
    agents.users.resize(500);
  }
  const double r = 0.05;
  Components comp =
      build_components_canyon(index_agents(tess, agents), agents.size(), r);
  CHECK(same_partition(components_to_labels(comp),
                       brute_force_canyon_components(tess, agents, r)));
  // find is idempotent and unite joins
  UnionFind uf(4);
  CHECK(uf.component_count() == 4);
  CHECK(uf.find(2) == uf.find(uf.find(2)));
  CHECK(uf.unite(0, 1));
  CHECK(!uf.unite(1, 0));
  CHECK(uf.same(0, 1));
  CHECK(uf.component_count() == 3);
}

TEST_CASE("window crossing detection") {
  Window window{4.0};
  AgentSet none;
  Components empty(0);
  const CrossingResult nothing = detect_crossing(empty, none, window, 0.05);
  CHECK(!nothing.left_right);
  CHECK(!nothing.top_bottom);
  CHECK(!nothing.percolates);

  // one component with agents near both vertical sides
  AgentSet span;
  span.users.push_back({0, 0.0, 0.01, 2.0});
  span.users.push_back({0, 0.0, 3.99, 2.0});
  UnionFind merged(2);
  merged.unite(0, 1);
  const CrossingResult lr = detect_crossing(merged, span, window, 0.05);
  CHECK(lr.left_right);
  CHECK(!lr.top_bottom);
  CHECK(lr.percolates);

  // three components that only jointly span: no percolation
  AgentSet parts;
  parts.users.push_back({0, 0.0, 0.01, 2.0});
  parts.users.push_back({0, 0.0, 2.00, 2.0});
  parts.users.push_back({0, 0.0, 3.99, 2.0});
  UnionFind separate(3);
  const CrossingResult no = detect_crossing(separate, parts, window, 0.05);
  CHECK(!no.percolates);

  CHECK_THROWS_AS(detect_crossing(separate, parts, window, 0.0),
                  ParameterError);
}

TEST_SUITE_END();
