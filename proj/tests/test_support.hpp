#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "streetperc/connectivity.hpp"
#include "streetperc/geometry.hpp"
#include "streetperc/pointprocess.hpp"

namespace streetperc::testing {

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> values;
  for (int i = 0; i < n; ++i) {
    values.push_back(lo + (hi - lo) * i / static_cast<double>(n - 1));
  }
  values.back() = hi;
  return values;
}

// Edge ids each agent stands on: one for a user, the incident list for a
// relay.
inline std::vector<std::vector<std::int32_t>> agent_edges(
    const Tessellation& tess, const AgentSet& agents) {
  std::vector<std::vector<std::int32_t>> result;
  result.reserve(agents.size());
  for (const User& u : agents.users) result.push_back({u.edge});
  for (const Relay& r : agents.relays) result.push_back(tess.incidence[r.vertex]);
  return result;
}

// O(n^2) oracle for the line-of-sight rule: link agents that share a street
// and sit within the radius, then take connected components by traversal.
// Intentionally independent of EdgeOccupancy and UnionFind.
inline std::vector<std::int32_t> brute_force_canyon_components(
    const Tessellation& tess, const AgentSet& agents, double radius_km) {
  const std::size_t n = agents.size();
  const auto edges = agent_edges(tess, agents);
  std::vector<std::vector<std::int32_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool share = false;
      for (std::int32_t e : edges[i]) {
        for (std::int32_t f : edges[j]) {
          if (e == f) share = true;
        }
      }
      if (!share) continue;
      const Vec2 a = agents.position(i);
      const Vec2 b = agents.position(j);
      if (distance(a, b) <= radius_km) {
        adj[i].push_back(static_cast<std::int32_t>(j));
        adj[j].push_back(static_cast<std::int32_t>(i));
      }
    }
  }
  std::vector<std::int32_t> label(n, -1);
  std::int32_t next = 0;
  std::vector<std::int32_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(static_cast<std::int32_t>(s));
    while (!stack.empty()) {
      const std::int32_t v = stack.back();
      stack.pop_back();
      for (std::int32_t w : adj[v]) {
        if (label[w] < 0) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

// O(n^2) oracle for the Gilbert rule on users only.
inline std::vector<std::int32_t> brute_force_gilbert_components(
    const AgentSet& agents, double radius_km) {
  const std::size_t n = agents.users.size();
  std::vector<std::int32_t> label(n, -1);
  std::int32_t next = 0;
  std::vector<std::int32_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(static_cast<std::int32_t>(s));
    while (!stack.empty()) {
      const std::size_t v = static_cast<std::size_t>(stack.back());
      stack.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        if (label[w] >= 0) continue;
        const double dx = agents.users[v].x - agents.users[w].x;
        const double dy = agents.users[v].y - agents.users[w].y;
        if (dx * dx + dy * dy <= radius_km * radius_km) {
          label[w] = next;
          stack.push_back(static_cast<std::int32_t>(w));
        }
      }
    }
    ++next;
  }
  return label;
}

// Two labelings describe the same partition iff they induce the same blocks.
inline bool same_partition(const std::vector<std::int32_t>& lhs,
                           const std::vector<std::int32_t>& rhs) {
  if (lhs.size() != rhs.size()) return false;
  std::map<std::int32_t, std::int32_t> fwd, bwd;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const auto f = fwd.emplace(lhs[i], rhs[i]);
    if (!f.second && f.first->second != rhs[i]) return false;
    const auto b = bwd.emplace(rhs[i], lhs[i]);
    if (!b.second && b.first->second != lhs[i]) return false;
  }
  return true;
}

inline std::vector<std::int32_t> components_to_labels(const Components& comp) {
  std::vector<std::int32_t> labels(comp.size());
  for (std::size_t i = 0; i < comp.size(); ++i) {
    labels[i] = comp.find(static_cast<std::int32_t>(i));
  }
  return labels;
}

// Kolmogorov-Smirnov distance against the uniform CDF on [0,1].
inline double ks_uniform_statistic(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = samples[i];
    d = std::max(d, std::abs((i + 1) / n - cdf));
    d = std::max(d, std::abs(cdf - i / n));
  }
  return d;
}

// Hand-built star tessellation: one center vertex with `arms` edges of the
// given length radiating outward (boundary far ends). Useful for exercising
// relay bridging without a full Voronoi build.
inline Tessellation star_tessellation(int arms, double arm_length,
                                      double window_side) {
  Tessellation tess;
  tess.window.side_km = window_side;
  const double cx = window_side / 2.0;
  const double cy = window_side / 2.0;
  tess.vertices.push_back({cx, cy});
  tess.incidence.resize(1);
  for (int k = 0; k < arms; ++k) {
    const double angle = 2.0 * M_PI * k / arms;
    Edge edge;
    edge.a = Endpoint{EndpointKind::vertex, 0, cx, cy};
    edge.b = Endpoint{EndpointKind::boundary, -1,
                      cx + arm_length * std::cos(angle),
                      cy + arm_length * std::sin(angle)};
    edge.length_km = arm_length;
    tess.edges.push_back(edge);
    tess.incidence[0].push_back(k);
  }
  return tess;
}

// Single free-standing street of the given length (no vertices).
inline Tessellation single_edge_tessellation(double length, double window_side) {
  Tessellation tess;
  tess.window.side_km = window_side;
  Edge edge;
  edge.a = Endpoint{EndpointKind::boundary, -1, 0.0, window_side / 2.0};
  edge.b = Endpoint{EndpointKind::boundary, -1, length, window_side / 2.0};
  edge.length_km = length;
  tess.edges.push_back(edge);
  return tess;
}

}  // namespace streetperc::testing
