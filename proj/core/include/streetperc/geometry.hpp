#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "streetperc/rng.hpp"

namespace streetperc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Square observation window with origin (0,0) and corner (side_km, side_km).
struct Window {
  double side_km = 0.0;

  void validate() const;  // throws ParameterError
  bool contains(const Vec2& p) const {
    return p.x >= 0.0 && p.x <= side_km && p.y >= 0.0 && p.y <= side_km;
  }
};

// Voronoi diagram of the seed points, before window clipping. A -1 endpoint
// marks an unbounded edge end; site_a/site_b are the generating sites on
// either side of the edge and define the direction of unbounded ends.
struct RawEdge {
  std::int32_t v0 = -1;
  std::int32_t v1 = -1;
  std::int32_t site_a = 0;
  std::int32_t site_b = 0;
};

struct VoronoiDiagram {
  std::vector<Vec2> sites;     // quantized input seeds, km
  std::vector<Vec2> vertices;  // km
  std::vector<RawEdge> edges;
  // Per site, the ccw vertex loop of its cell; empty for unbounded cells.
  // Only filled when build_voronoi(..., keep_cells = true).
  std::vector<std::vector<std::int32_t>> cell_vertices;
};

enum class EndpointKind : std::uint8_t { vertex, boundary };

struct Endpoint {
  EndpointKind kind = EndpointKind::boundary;
  std::int32_t vertex = -1;  // valid iff kind == vertex
  double x = 0.0;
  double y = 0.0;

  Vec2 pos() const { return {x, y}; }
  bool is_vertex() const { return kind == EndpointKind::vertex; }
};

struct Edge {
  Endpoint a;
  Endpoint b;
  double length_km = 0.0;
};

// Clipped planar tessellation. Vertices are the in-window crossroads; edge
// endpoints clipped at the window boundary carry no vertex id and are not
// relay-eligible.
struct Tessellation {
  Window window;
  std::vector<Vec2> vertices;
  std::vector<Edge> edges;
  std::vector<std::vector<std::int32_t>> incidence;  // per vertex, edge ids

  double total_edge_length_km() const;
};

struct TessStats {
  double gamma_emp = 0.0;           // total clipped length / window area
  double mean_edge_length_km = 0.0; // interior (unclipped) edges only
  double vertex_density = 0.0;      // interior vertices per km^2
  double edge_density = 0.0;        // interior edges per km^2
};

// Guard margin added around the window before seeding, about three typical
// inter-seed spacings; wide enough that the in-window tessellation no longer
// depends on seeds beyond it.
double default_margin_km(double lambda_s);

// Homogeneous Poisson seeds of intensity lambda_s on the margin-extended
// square [-margin, side+margin]^2.
std::vector<Vec2> generate_seeds(double lambda_s, const Window& window,
                                 double margin_km, Rng& rng);

VoronoiDiagram build_voronoi(const std::vector<Vec2>& seeds,
                             bool keep_cells = false);

Tessellation clip_to_window(const VoronoiDiagram& diagram,
                            const Window& window);

TessStats tessellation_stats(const Tessellation& tess);

// generate_seeds -> build_voronoi -> clip_to_window with the default margin
// (or margin_km >= 0 to override).
Tessellation make_tessellation(double lambda_s, const Window& window,
                               Rng& rng, double margin_km = -1.0);

// Debug export: edge_id,x1,y1,x2,y2,length,boundary_flag_a,boundary_flag_b
void write_tessellation_csv(const Tessellation& tess, const std::string& path);

}  // namespace streetperc
