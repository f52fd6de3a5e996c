#include "streetperc/pointprocess.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "streetperc/errors.hpp"

namespace streetperc {

const char* mode_name(ShadowingMode mode) {
  return mode == ShadowingMode::canyon ? "canyon" : "nosha";
}

ShadowingMode mode_from_name(const std::string& name) {
  if (name == "canyon") return ShadowingMode::canyon;
  if (name == "nosha") return ShadowingMode::nosha;
  throw ParameterError("unknown mode '" + name + "' (expected canyon|nosha)");
}

void ParamPoint::validate() const {
  std::ostringstream problems;
  const auto bad = [&](const std::string& msg) { problems << "  " << msg << '\n'; };
  if (!(relay_p >= 0.0 && relay_p <= 1.0) || !std::isfinite(relay_p)) {
    bad("p must lie in [0,1]");
  }
  if (!(users_per_edge >= 0.0) || !std::isfinite(users_per_edge)) {
    bad("U must be nonnegative and finite");
  }
  if (!(hops_per_edge > 0.0) || !std::isfinite(hops_per_edge)) {
    bad("H must be positive and finite");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    bad("gamma must be positive and finite");
  }
  if (!(window.side_km > 0.0) || !std::isfinite(window.side_km)) {
    bad("window side_km must be positive and finite");
  }
  const std::string text = problems.str();
  if (!text.empty()) {
    throw ParameterError("invalid parameter point:\n" + text);
  }
}

PhysicalParams derive_physical(const ParamPoint& point) {
  point.validate();
  PhysicalParams phys;
  phys.lambda_s = (point.gamma / 2.0) * (point.gamma / 2.0);
  phys.lambda = 0.75 * point.users_per_edge * point.gamma;
  phys.radius_km = 4.0 / (3.0 * point.hops_per_edge * point.gamma);
  return phys;
}

std::vector<User> sample_users(const Tessellation& tess, double lambda,
                               Rng& rng) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("lambda must be nonnegative and finite");
  }
  std::vector<User> users;
  if (lambda == 0.0) return users;
  for (std::size_t e = 0; e < tess.edges.size(); ++e) {
    const Edge& edge = tess.edges[e];
    const std::int64_t count = sample_poisson(rng, lambda * edge.length_km);
    for (std::int64_t i = 0; i < count; ++i) {
      const double t = uniform01(rng) * edge.length_km;
      const double frac = t / edge.length_km;
      User u;
      u.edge = static_cast<std::int32_t>(e);
      u.t = t;
      u.x = edge.a.x + frac * (edge.b.x - edge.a.x);
      u.y = edge.a.y + frac * (edge.b.y - edge.a.y);
      users.push_back(u);
    }
  }
  return users;
}

RelayDraws sample_relay_draws(const Tessellation& tess, Rng& rng) {
  RelayDraws draws;
  draws.u.resize(tess.vertices.size());
  for (double& u : draws.u) u = uniform01(rng);
  return draws;
}

std::vector<Relay> relays_from_draws(const Tessellation& tess,
                                     const RelayDraws& draws, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("relay probability p must lie in [0,1]");
  }
  if (draws.u.size() != tess.vertices.size()) {
    throw IntegrityError("relay draws do not match tessellation vertices");
  }
  std::vector<Relay> relays;
  for (std::size_t v = 0; v < draws.u.size(); ++v) {
    if (draws.u[v] < p) {
      relays.push_back({static_cast<std::int32_t>(v), tess.vertices[v].x,
                        tess.vertices[v].y});
    }
  }
  return relays;
}

std::vector<Relay> sample_relays(const Tessellation& tess, double p, Rng& rng,
                                 RelayDraws* draws_out) {
  RelayDraws draws = sample_relay_draws(tess, rng);
  std::vector<Relay> relays = relays_from_draws(tess, draws, p);
  if (draws_out != nullptr) *draws_out = std::move(draws);
  return relays;
}

void write_agents_csv(const AgentSet& agents, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParameterError("cannot open for writing: " + path);
  }
  out << "agent_id,kind,edge_or_vertex_id,x,y\n";
  std::size_t id = 0;
  for (const User& u : agents.users) {
    out << id++ << ",user," << u.edge << ',' << u.x << ',' << u.y << '\n';
  }
  for (const Relay& r : agents.relays) {
    out << id++ << ",relay," << r.vertex << ',' << r.x << ',' << r.y << '\n';
  }
}

}  // namespace streetperc
