#include "streetperc/geometry.hpp"

#include <boost/polygon/voronoi.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <unordered_set>
#include <utility>

#include "streetperc/errors.hpp"

namespace streetperc {

namespace {

// Seeds are snapped to a 1e-7 km (0.1 um) integer grid for the exact
// sweepline construction. Vertex pairs closer than the merge tolerance are
// numerical duplicates of one circumcenter and collapse into one vertex;
// genuine short edges from near-cocircular seed quadruples stay, keeping
// every interior vertex at degree 3.
constexpr double kQuantScale = 1e7;
constexpr double kVertexMergeTol = 1e-12;    // km
constexpr double kDegenerateEdgeTol = 1e-12; // km
constexpr double kMaxAbsCoordKm = 200.0;     // int32 headroom at kQuantScale

struct IntPoint {
  std::int32_t x = 0;
  std::int32_t y = 0;
};

// Minimal disjoint-set used for vertex merging during diagram conversion.
class MergeSets {
 public:
  explicit MergeSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::int32_t find(std::int32_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      // keep the smaller index as representative for stable renumbering
      if (a < b) {
        parent_[b] = a;
      } else {
        parent_[a] = b;
      }
    }
  }

 private:
  std::vector<std::int32_t> parent_;
};

// Liang-Barsky clip of the parametric segment p0 + t (p1 - p0), t in [0,1],
// against [0,side]^2. Returns false if the intersection is empty.
bool clip_segment(const Vec2& p0, const Vec2& p1, double side, double& t0,
                  double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  const double dx = p1.x - p0.x;
  const double dy = p1.y - p0.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {p0.x - 0.0, side - p0.x, p0.y - 0.0, side - p0.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;  // parallel and outside
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) return false;
      if (r > t0) t0 = r;
    } else {
      if (r < t0) return false;
      if (r < t1) t1 = r;
    }
  }
  return t0 <= t1;
}

}  // namespace

void Window::validate() const {
  if (!(side_km > 0.0) || !std::isfinite(side_km)) {
    throw ParameterError("window side_km must be positive and finite");
  }
}

double Tessellation::total_edge_length_km() const {
  double total = 0.0;
  for (const Edge& e : edges) total += e.length_km;
  return total;
}

double default_margin_km(double lambda_s) {
  return 3.0 / std::sqrt(lambda_s);
}

std::vector<Vec2> generate_seeds(double lambda_s, const Window& window,
                                 double margin_km, Rng& rng) {
  if (!(lambda_s > 0.0) || !std::isfinite(lambda_s)) {
    throw ParameterError("lambda_S must be positive and finite");
  }
  window.validate();
  if (!(margin_km >= 0.0) || !std::isfinite(margin_km)) {
    throw ParameterError("margin_km must be nonnegative and finite");
  }
  const double lo = -margin_km;
  const double hi = window.side_km + margin_km;
  const double extent = hi - lo;
  const std::int64_t count = sample_poisson(rng, lambda_s * extent * extent);
  std::vector<Vec2> seeds;
  seeds.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const double x = lo + extent * uniform01(rng);
    const double y = lo + extent * uniform01(rng);
    seeds.push_back({x, y});
  }
  return seeds;
}

VoronoiDiagram build_voronoi(const std::vector<Vec2>& seeds, bool keep_cells) {
  if (seeds.size() < 3) {
    throw GeometryError("Voronoi construction needs at least 3 seeds");
  }
  {
    std::vector<std::pair<double, double>> sorted;
    sorted.reserve(seeds.size());
    for (const Vec2& s : seeds) sorted.emplace_back(s.x, s.y);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw GeometryError("duplicate seed points");
    }
  }

  // Quantize, dropping collisions on the integer grid (distinct doubles that
  // snap to the same cell; vanishingly rare at this resolution).
  std::vector<IntPoint> sites_q;
  sites_q.reserve(seeds.size());
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(seeds.size() * 2);
  for (const Vec2& s : seeds) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y) ||
        std::abs(s.x) > kMaxAbsCoordKm || std::abs(s.y) > kMaxAbsCoordKm) {
      throw GeometryError("seed coordinate outside supported range");
    }
    IntPoint q{static_cast<std::int32_t>(std::llround(s.x * kQuantScale)),
               static_cast<std::int32_t>(std::llround(s.y * kQuantScale))};
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(q.x)) << 32) |
        static_cast<std::uint32_t>(q.y);
    if (seen.insert(key).second) {
      sites_q.push_back(q);
    }
  }
  if (sites_q.size() < 3) {
    throw GeometryError("fewer than 3 distinct seeds after quantization");
  }

  boost::polygon::voronoi_builder<std::int32_t> builder;
  for (const IntPoint& q : sites_q) {
    builder.insert_point(q.x, q.y);
  }
  boost::polygon::voronoi_diagram<double> vd;
  builder.construct(&vd);

  if (vd.vertices().empty()) {
    throw GeometryError("degenerate seed configuration (collinear seeds)");
  }

  VoronoiDiagram out;
  out.sites.reserve(sites_q.size());
  for (const IntPoint& q : sites_q) {
    out.sites.push_back({q.x / kQuantScale, q.y / kQuantScale});
  }

  const auto& bverts = vd.vertices();
  out.vertices.reserve(bverts.size());
  for (const auto& v : bverts) {
    out.vertices.push_back({v.x() / kQuantScale, v.y() / kQuantScale});
  }
  const auto vertex_index = [&](const auto* v) -> std::int32_t {
    return v == nullptr
               ? -1
               : static_cast<std::int32_t>(v - bverts.data());
  };

  // Each Voronoi edge appears as a twin pair; keep the lower-address half.
  const auto& bedges = vd.edges();
  out.edges.reserve(bedges.size() / 2);
  for (const auto& e : bedges) {
    if (&e > e.twin()) continue;
    RawEdge re;
    re.v0 = vertex_index(e.vertex0());
    re.v1 = vertex_index(e.vertex1());
    re.site_a = static_cast<std::int32_t>(e.cell()->source_index());
    re.site_b = static_cast<std::int32_t>(e.twin()->cell()->source_index());
    out.edges.push_back(re);
  }

  if (keep_cells) {
    out.cell_vertices.resize(out.sites.size());
    for (const auto& cell : vd.cells()) {
      const auto* start = cell.incident_edge();
      if (start == nullptr) continue;
      std::vector<std::int32_t> loop;
      bool bounded = true;
      const auto* e = start;
      do {
        if (!e->is_finite()) {
          bounded = false;
          break;
        }
        loop.push_back(vertex_index(e->vertex0()));
        e = e->next();
      } while (e != start);
      if (bounded) {
        out.cell_vertices[cell.source_index()] = std::move(loop);
      }
    }
  }

  // Collapse vertex pairs joined by an edge shorter than the merge
  // tolerance (near-cocircular events), then drop the collapsed edges.
  MergeSets merge(out.vertices.size());
  bool merged_any = false;
  for (const RawEdge& re : out.edges) {
    if (re.v0 >= 0 && re.v1 >= 0 &&
        distance(out.vertices[re.v0], out.vertices[re.v1]) < kVertexMergeTol) {
      merge.unite(re.v0, re.v1);
      merged_any = true;
    }
  }
  if (merged_any) {
    std::vector<std::int32_t> remap(out.vertices.size(), -1);
    std::vector<Vec2> compact;
    compact.reserve(out.vertices.size());
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(out.vertices.size());
         ++i) {
      const std::int32_t root = merge.find(i);
      if (remap[root] < 0) {
        remap[root] = static_cast<std::int32_t>(compact.size());
        compact.push_back(out.vertices[root]);
      }
      remap[i] = remap[root];
    }
    out.vertices = std::move(compact);
    std::vector<RawEdge> kept;
    kept.reserve(out.edges.size());
    for (RawEdge re : out.edges) {
      if (re.v0 >= 0) re.v0 = remap[re.v0];
      if (re.v1 >= 0) re.v1 = remap[re.v1];
      if (re.v0 >= 0 && re.v0 == re.v1) continue;  // collapsed edge
      kept.push_back(re);
    }
    out.edges = std::move(kept);
    for (auto& loop : out.cell_vertices) {
      for (auto& v : loop) v = remap[v];
      loop.erase(std::unique(loop.begin(), loop.end()), loop.end());
      if (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    }
  }

  return out;
}

Tessellation clip_to_window(const VoronoiDiagram& diagram,
                            const Window& window) {
  window.validate();
  const double side = window.side_km;

  // Vertices inside the window survive; everything else becomes a boundary
  // endpoint on its clipped edges.
  std::vector<std::int32_t> vertex_id(diagram.vertices.size(), -1);
  Tessellation tess;
  tess.window = window;
  for (std::size_t i = 0; i < diagram.vertices.size(); ++i) {
    if (window.contains(diagram.vertices[i])) {
      vertex_id[i] = static_cast<std::int32_t>(tess.vertices.size());
      tess.vertices.push_back(diagram.vertices[i]);
    }
  }

  const Vec2 center{side / 2.0, side / 2.0};
  for (const RawEdge& re : diagram.edges) {
    Vec2 p0, p1;
    bool v0_finite = re.v0 >= 0;
    bool v1_finite = re.v1 >= 0;
    if (v0_finite && v1_finite) {
      p0 = diagram.vertices[re.v0];
      p1 = diagram.vertices[re.v1];
    } else {
      // Unbounded edge: extend along the bisector of its two sites. The
      // direction below points from the vertex0 end toward the vertex1 end.
      const Vec2 sa = diagram.sites[re.site_a];
      const Vec2 sb = diagram.sites[re.site_b];
      Vec2 dir{sa.y - sb.y, sb.x - sa.x};
      const double norm = std::hypot(dir.x, dir.y);
      if (norm == 0.0) continue;
      dir.x /= norm;
      dir.y /= norm;
      const Vec2 origin = v0_finite ? diagram.vertices[re.v0]
                         : v1_finite
                             ? diagram.vertices[re.v1]
                             : Vec2{(sa.x + sb.x) / 2.0, (sa.y + sb.y) / 2.0};
      const double reach =
          2.0 * (std::hypot(origin.x - center.x, origin.y - center.y) +
                 side * 1.5 + 1.0);
      p0 = v0_finite ? origin
                     : Vec2{origin.x - dir.x * reach, origin.y - dir.y * reach};
      p1 = v1_finite ? origin
                     : Vec2{origin.x + dir.x * reach, origin.y + dir.y * reach};
    }

    double t0 = 0.0, t1 = 1.0;
    if (!clip_segment(p0, p1, side, t0, t1)) continue;

    const auto snap = [&](double c) {
      if (std::abs(c) < 1e-9) return 0.0;
      if (std::abs(c - side) < 1e-9) return side;
      return std::clamp(c, 0.0, side);
    };
    const auto lerp = [&](double t) -> Vec2 {
      return {snap(p0.x + t * (p1.x - p0.x)), snap(p0.y + t * (p1.y - p0.y))};
    };

    Edge edge;
    if (v0_finite && vertex_id[re.v0] >= 0 && t0 == 0.0) {
      edge.a = Endpoint{EndpointKind::vertex, vertex_id[re.v0],
                        diagram.vertices[re.v0].x, diagram.vertices[re.v0].y};
    } else {
      const Vec2 c = lerp(t0);
      edge.a = Endpoint{EndpointKind::boundary, -1, c.x, c.y};
    }
    if (v1_finite && vertex_id[re.v1] >= 0 && t1 == 1.0) {
      edge.b = Endpoint{EndpointKind::vertex, vertex_id[re.v1],
                        diagram.vertices[re.v1].x, diagram.vertices[re.v1].y};
    } else {
      const Vec2 c = lerp(t1);
      edge.b = Endpoint{EndpointKind::boundary, -1, c.x, c.y};
    }
    edge.length_km = distance(edge.a.pos(), edge.b.pos());
    if (edge.length_km < kDegenerateEdgeTol) continue;
    tess.edges.push_back(edge);
  }

  tess.incidence.assign(tess.vertices.size(), {});
  for (std::size_t e = 0; e < tess.edges.size(); ++e) {
    const Edge& edge = tess.edges[e];
    if (edge.a.is_vertex()) {
      tess.incidence[edge.a.vertex].push_back(static_cast<std::int32_t>(e));
    }
    if (edge.b.is_vertex()) {
      tess.incidence[edge.b.vertex].push_back(static_cast<std::int32_t>(e));
    }
  }
  return tess;
}

TessStats tessellation_stats(const Tessellation& tess) {
  TessStats stats;
  const double area = tess.window.side_km * tess.window.side_km;
  double total = 0.0;
  double interior_total = 0.0;
  std::size_t interior_edges = 0;
  for (const Edge& e : tess.edges) {
    total += e.length_km;
    if (e.a.is_vertex() && e.b.is_vertex()) {
      interior_total += e.length_km;
      ++interior_edges;
    }
  }
  stats.gamma_emp = total / area;
  stats.mean_edge_length_km =
      interior_edges > 0 ? interior_total / static_cast<double>(interior_edges)
                         : 0.0;
  stats.vertex_density = static_cast<double>(tess.vertices.size()) / area;
  stats.edge_density = static_cast<double>(interior_edges) / area;
  return stats;
}

Tessellation make_tessellation(double lambda_s, const Window& window, Rng& rng,
                               double margin_km) {
  const double margin =
      margin_km >= 0.0 ? margin_km : default_margin_km(lambda_s);
  const std::vector<Vec2> seeds =
      generate_seeds(lambda_s, window, margin, rng);
  return clip_to_window(build_voronoi(seeds), window);
}

void write_tessellation_csv(const Tessellation& tess,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParameterError("cannot open for writing: " + path);
  }
  out << "edge_id,x1,y1,x2,y2,length,boundary_flag_a,boundary_flag_b\n";
  for (std::size_t e = 0; e < tess.edges.size(); ++e) {
    const Edge& edge = tess.edges[e];
    out << e << ',' << edge.a.x << ',' << edge.a.y << ',' << edge.b.x << ','
        << edge.b.y << ',' << edge.length_km << ','
        << (edge.a.is_vertex() ? 0 : 1) << ',' << (edge.b.is_vertex() ? 0 : 1)
        << '\n';
  }
}

}  // namespace streetperc
