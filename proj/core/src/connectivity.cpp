#include "streetperc/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "streetperc/errors.hpp"

namespace streetperc {

EdgeOccupancy index_agents(const Tessellation& tess, const AgentSet& agents) {
  const std::size_t n_edges = tess.edges.size();
  std::vector<std::int32_t> counts(n_edges, 0);

  for (const User& u : agents.users) {
    if (u.edge < 0 || static_cast<std::size_t>(u.edge) >= n_edges) {
      throw IntegrityError("user references unknown edge");
    }
    ++counts[u.edge];
  }
  for (const Relay& r : agents.relays) {
    if (r.vertex < 0 ||
        static_cast<std::size_t>(r.vertex) >= tess.incidence.size()) {
      throw IntegrityError("relay references unknown vertex");
    }
    for (std::int32_t e : tess.incidence[r.vertex]) ++counts[e];
  }

  EdgeOccupancy occ;
  occ.offsets.resize(n_edges + 1, 0);
  for (std::size_t e = 0; e < n_edges; ++e) {
    occ.offsets[e + 1] = occ.offsets[e] + counts[e];
  }
  occ.entries.resize(static_cast<std::size_t>(occ.offsets[n_edges]));

  std::vector<std::int32_t> cursor(occ.offsets.begin(), occ.offsets.end() - 1);
  std::int32_t agent_id = 0;
  for (const User& u : agents.users) {
    occ.entries[cursor[u.edge]++] = {u.t, agent_id};
    ++agent_id;
  }
  for (const Relay& r : agents.relays) {
    for (std::int32_t e : tess.incidence[r.vertex]) {
      const Edge& edge = tess.edges[e];
      double t;
      if (edge.a.is_vertex() && edge.a.vertex == r.vertex) {
        t = 0.0;
      } else if (edge.b.is_vertex() && edge.b.vertex == r.vertex) {
        t = edge.length_km;
      } else {
        throw IntegrityError("incidence list names edge not touching vertex");
      }
      occ.entries[cursor[e]++] = {t, agent_id};
    }
    ++agent_id;
  }

  for (std::size_t e = 0; e < n_edges; ++e) {
    std::sort(occ.entries.begin() + occ.offsets[e],
              occ.entries.begin() + occ.offsets[e + 1],
              [](const OccEntry& lhs, const OccEntry& rhs) {
                return lhs.t != rhs.t ? lhs.t < rhs.t : lhs.agent < rhs.agent;
              });
  }
  return occ;
}

UnionFind::UnionFind(std::size_t n)
    : parent_(n), rank_(n, 0), components_(n) {
  for (std::size_t i = 0; i < n; ++i) {
    parent_[i] = static_cast<std::int32_t>(i);
  }
}

std::int32_t UnionFind::find(std::int32_t a) const {
  while (parent_[a] != a) {
    parent_[a] = parent_[parent_[a]];  // path halving
    a = parent_[a];
  }
  return a;
}

bool UnionFind::unite(std::int32_t a, std::int32_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  --components_;
  return true;
}

Components build_components_canyon(const EdgeOccupancy& occ,
                                   std::size_t n_agents, double radius_km) {
  if (!(radius_km > 0.0)) {
    throw ParameterError("communication radius must be positive");
  }
  UnionFind uf(n_agents);
  const std::size_t n_edges = occ.offsets.size() - 1;
  for (std::size_t e = 0; e < n_edges; ++e) {
    for (std::int32_t i = occ.offsets[e] + 1; i < occ.offsets[e + 1]; ++i) {
      const OccEntry& prev = occ.entries[i - 1];
      const OccEntry& cur = occ.entries[i];
      // straight segments: arclength gap equals Euclidean distance
      if (cur.t - prev.t <= radius_km) {
        uf.unite(prev.agent, cur.agent);
      }
    }
  }
  return uf;
}

Components build_components_nosha(const AgentSet& agents, double radius_km) {
  if (!(radius_km > 0.0) || !std::isfinite(radius_km)) {
    throw ParameterError("communication radius must be positive and finite");
  }
  const std::vector<User>& users = agents.users;
  UnionFind uf(users.size());
  if (users.empty()) return uf;

  const auto cell_key = [&](double x, double y) -> std::uint64_t {
    const auto ix = static_cast<std::int64_t>(std::floor(x / radius_km));
    const auto iy = static_cast<std::int64_t>(std::floor(y / radius_km));
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint32_t>(iy);
  };

  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> grid;
  grid.reserve(users.size() * 2);
  for (std::size_t i = 0; i < users.size(); ++i) {
    grid[cell_key(users[i].x, users[i].y)].push_back(
        static_cast<std::int32_t>(i));
  }

  const double r2 = radius_km * radius_km;
  for (std::size_t i = 0; i < users.size(); ++i) {
    const double x = users[i].x;
    const double y = users[i].y;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        const auto it =
            grid.find(cell_key(x + dx * radius_km, y + dy * radius_km));
        if (it == grid.end()) continue;
        for (std::int32_t j : it->second) {
          if (j <= static_cast<std::int32_t>(i)) continue;
          const double ddx = users[j].x - x;
          const double ddy = users[j].y - y;
          if (ddx * ddx + ddy * ddy <= r2) {
            uf.unite(static_cast<std::int32_t>(i), j);
          }
        }
      }
    }
  }
  return uf;
}

CrossingResult detect_crossing(const Components& comp, const AgentSet& agents,
                               const Window& window, double strip_km) {
  if (!(strip_km > 0.0)) {
    throw ParameterError("crossing strip width must be positive");
  }
  CrossingResult result;
  const std::size_t n = agents.size();
  if (n == 0) return result;
  if (comp.size() != n) {
    throw IntegrityError("components do not cover the agent set");
  }

  struct Box {
    double min_x = 1e300, max_x = -1e300, min_y = 1e300, max_y = -1e300;
  };
  std::unordered_map<std::int32_t, Box> boxes;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 pos = agents.position(i);
    Box& box = boxes[comp.find(static_cast<std::int32_t>(i))];
    box.min_x = std::min(box.min_x, pos.x);
    box.max_x = std::max(box.max_x, pos.x);
    box.min_y = std::min(box.min_y, pos.y);
    box.max_y = std::max(box.max_y, pos.y);
  }
  const double side = window.side_km;
  for (const auto& [root, box] : boxes) {
    if (box.min_x <= strip_km && box.max_x >= side - strip_km) {
      result.left_right = true;
    }
    if (box.min_y <= strip_km && box.max_y >= side - strip_km) {
      result.top_bottom = true;
    }
    if (result.left_right && result.top_bottom) break;
  }
  result.percolates = result.left_right || result.top_bottom;
  return result;
}

CrossingResult detect_crossing_street_contact(const Components& comp,
                                              const AgentSet& agents,
                                              const Tessellation& tess,
                                              double radius_km) {
  if (!(radius_km > 0.0)) {
    throw ParameterError("communication radius must be positive");
  }
  CrossingResult result;
  const std::size_t n = agents.size();
  if (n == 0) return result;
  if (comp.size() != n) {
    throw IntegrityError("components do not cover the agent set");
  }
  const double side = tess.window.side_km;

  // side bitmask per boundary endpoint: 1 left, 2 right, 4 bottom, 8 top
  const auto side_mask = [&](const Endpoint& ep) -> std::uint8_t {
    if (ep.is_vertex()) return 0;
    std::uint8_t mask = 0;
    if (ep.x == 0.0) mask |= 1;
    if (ep.x == side) mask |= 2;
    if (ep.y == 0.0) mask |= 4;
    if (ep.y == side) mask |= 8;
    return mask;
  };
  std::vector<std::uint8_t> mask_a(tess.edges.size()), mask_b(tess.edges.size());
  for (std::size_t e = 0; e < tess.edges.size(); ++e) {
    mask_a[e] = side_mask(tess.edges[e].a);
    mask_b[e] = side_mask(tess.edges[e].b);
  }

  // contact of an agent at arclength t on edge e, within radius along the street
  const auto contact = [&](std::int32_t e, double t) -> std::uint8_t {
    std::uint8_t mask = 0;
    if (mask_a[e] != 0 && t <= radius_km) mask |= mask_a[e];
    if (mask_b[e] != 0 && tess.edges[e].length_km - t <= radius_km) {
      mask |= mask_b[e];
    }
    return mask;
  };

  std::unordered_map<std::int32_t, std::uint8_t> component_sides;
  std::int32_t agent_id = 0;
  for (const User& u : agents.users) {
    const std::uint8_t mask = contact(u.edge, u.t);
    if (mask != 0) component_sides[comp.find(agent_id)] |= mask;
    ++agent_id;
  }
  for (const Relay& r : agents.relays) {
    std::uint8_t sides = 0;
    for (std::int32_t e : tess.incidence[r.vertex]) {
      const Edge& edge = tess.edges[e];
      const double t =
          (edge.a.is_vertex() && edge.a.vertex == r.vertex) ? 0.0
                                                            : edge.length_km;
      sides |= contact(e, t);
    }
    if (sides != 0) component_sides[comp.find(agent_id)] |= sides;
    ++agent_id;
  }

  for (const auto& [root, sides] : component_sides) {
    if ((sides & 1) && (sides & 2)) result.left_right = true;
    if ((sides & 4) && (sides & 8)) result.top_bottom = true;
    if (result.left_right && result.top_bottom) break;
  }
  result.percolates = result.left_right || result.top_bottom;
  return result;
}

void write_components_csv(const Components& comp, const AgentSet& agents,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParameterError("cannot open for writing: " + path);
  }
  out << "agent_id,component_id\n";
  for (std::size_t i = 0; i < agents.size(); ++i) {
    out << i << ',' << comp.find(static_cast<std::int32_t>(i)) << '\n';
  }
}

}  // namespace streetperc
