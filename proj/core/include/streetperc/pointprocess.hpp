#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streetperc/geometry.hpp"
#include "streetperc/rng.hpp"

namespace streetperc {

enum class ShadowingMode : std::uint8_t { canyon, nosha };

const char* mode_name(ShadowingMode mode);
ShadowingMode mode_from_name(const std::string& name);  // throws ParameterError

// Dimensionless network parameters plus the street density and window that
// anchor them to physical units.
struct ParamPoint {
  double relay_p = 1.0;        // fraction of crossroads equipped with a relay
  double users_per_edge = 0.0; // mean users per typical street segment (U)
  double hops_per_edge = 1.0;  // mean hops to span a typical segment (H)
  double gamma = 20.0;         // street length per unit area, km/km^2
  Window window;
  ShadowingMode mode = ShadowingMode::canyon;

  void validate() const;  // throws ParameterError listing all violations
};

struct PhysicalParams {
  double lambda_s = 0.0;   // tessellation seed intensity, km^-2
  double lambda = 0.0;     // linear user intensity, km^-1
  double radius_km = 0.0;  // communication radius
};

// Inverts U = (4/3) lambda/gamma, H = (4/3)/(r gamma), gamma = 2 sqrt(lambda_S).
PhysicalParams derive_physical(const ParamPoint& point);

struct User {
  std::int32_t edge = -1;
  double t = 0.0;  // arclength from endpoint a, in [0, edge length]
  double x = 0.0;
  double y = 0.0;
};

struct Relay {
  std::int32_t vertex = -1;
  double x = 0.0;
  double y = 0.0;
};

// Users and relays of one realization. Agent ids are implicit and global:
// user k has id k, relay k has id users.size() + k.
struct AgentSet {
  std::vector<User> users;
  std::vector<Relay> relays;

  std::size_t size() const { return users.size() + relays.size(); }
  Vec2 position(std::size_t agent_id) const {
    if (agent_id < users.size()) {
      return {users[agent_id].x, users[agent_id].y};
    }
    const Relay& r = relays[agent_id - users.size()];
    return {r.x, r.y};
  }
};

// Cox sampling: per edge an independent Poisson(lambda * length) count with
// positions uniform in arclength.
std::vector<User> sample_users(const Tessellation& tess, double lambda,
                               Rng& rng);

// One uniform draw per vertex, kept so that relay sets taken at different p
// from the same draws are inclusion-monotone within a replication.
struct RelayDraws {
  std::vector<double> u;  // indexed by vertex id
};

RelayDraws sample_relay_draws(const Tessellation& tess, Rng& rng);

std::vector<Relay> relays_from_draws(const Tessellation& tess,
                                     const RelayDraws& draws, double p);

std::vector<Relay> sample_relays(const Tessellation& tess, double p, Rng& rng,
                                 RelayDraws* draws_out = nullptr);

// Debug export: agent_id,kind,edge_or_vertex_id,x,y
void write_agents_csv(const AgentSet& agents, const std::string& path);

}  // namespace streetperc
