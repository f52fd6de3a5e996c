#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "streetperc/pointprocess.hpp"

namespace streetperc {

// Agents arranged by street segment: entries for edge e live in
// entries[offsets[e] .. offsets[e+1]), sorted by (t, agent id). A relay
// appears once per incident edge, at arclength 0 or the edge length.
struct OccEntry {
  double t = 0.0;
  std::int32_t agent = -1;
};

struct EdgeOccupancy {
  std::vector<std::int32_t> offsets;  // size edges+1
  std::vector<OccEntry> entries;
};

EdgeOccupancy index_agents(const Tessellation& tess, const AgentSet& agents);

// Disjoint sets over agent ids with union by size and path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n);

  std::int32_t find(std::int32_t a) const;
  bool unite(std::int32_t a, std::int32_t b);  // true if two sets merged
  bool same(std::int32_t a, std::int32_t b) const { return find(a) == find(b); }
  std::size_t size() const { return parent_.size(); }
  std::size_t component_count() const { return components_; }

 private:
  mutable std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> rank_;
  std::size_t components_ = 0;
};

using Components = UnionFind;

inline constexpr double kInfiniteRadius =
    std::numeric_limits<double>::infinity();

// Line-of-sight rule: two agents link iff they share a street segment and
// their distance is at most radius. Chaining consecutive occupants of each
// edge yields the same components as the full pairwise rule. Pass
// kInfiniteRadius for the relay-only site-percolation regime.
Components build_components_canyon(const EdgeOccupancy& occ,
                                   std::size_t n_agents, double radius_km);

// No-shadowing baseline: Gilbert graph on users only (distance <= radius,
// streets ignored), via a uniform grid hash with cell size radius.
Components build_components_nosha(const AgentSet& agents, double radius_km);

struct CrossingResult {
  bool left_right = false;
  bool top_bottom = false;
  bool percolates = false;
};

// A component crosses left-right if it holds an agent with x <= strip and one
// with x >= side - strip; top-bottom analogously in y.
CrossingResult detect_crossing(const Components& comp, const AgentSet& agents,
                               const Window& window, double strip_km);

// Line-of-sight crossing rule: an agent reaches a window side when it stands
// on a street clipped at that side, within radius along the street (canyon
// shadowing admits no other path to the boundary). A component touches a
// side iff it holds such an agent. Pass kInfiniteRadius for the
// site-percolation regime.
CrossingResult detect_crossing_street_contact(const Components& comp,
                                              const AgentSet& agents,
                                              const Tessellation& tess,
                                              double radius_km);

// Debug export: agent_id,component_id
void write_components_csv(const Components& comp, const AgentSet& agents,
                          const std::string& path);

}  // namespace streetperc
