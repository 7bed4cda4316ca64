#include "mapalign/types.hpp"

#include <algorithm>
#include <cmath>

namespace mapalign {
namespace {

double sq_dist(const Point& a, const Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

bool finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Signed shoelace area of an open ring.
double signed_ring_area(std::span<const Point> ring) {
  double acc = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % n];
    acc += p.x * q.y - q.x * p.y;
  }
  return 0.5 * acc;
}

int orient(const Point& a, const Point& b, const Point& c, double eps) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (v > eps) return 1;
  if (v < -eps) return -1;
  return 0;
}

bool on_segment_collinear(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection test, used only for the simplicity check.
bool segments_touch(const Point& a, const Point& b, const Point& c, const Point& d, double eps) {
  const int o1 = orient(a, b, c, eps);
  const int o2 = orient(a, b, d, eps);
  const int o3 = orient(c, d, a, eps);
  const int o4 = orient(c, d, b, eps);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_collinear(a, b, c)) return true;
  if (o2 == 0 && on_segment_collinear(a, b, d)) return true;
  if (o3 == 0 && on_segment_collinear(c, d, a)) return true;
  if (o4 == 0 && on_segment_collinear(c, d, b)) return true;
  return false;
}

}  // namespace

std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::point: return "point";
    case GeometryKind::polyline: return "polyline";
    case GeometryKind::polygon: return "polygon";
  }
  return "?";
}

GeometryKind geometry_kind_from_string(std::string_view name) {
  if (name == "point") return GeometryKind::point;
  if (name == "polyline") return GeometryKind::polyline;
  if (name == "polygon") return GeometryKind::polygon;
  throw ParseError("unknown geometry kind: " + std::string(name));
}

Geometry make_point(double x, double y) {
  return Geometry{GeometryKind::point, {Point{x, y}}};
}

Geometry make_polyline(std::vector<Point> vertices) {
  return Geometry{GeometryKind::polyline, std::move(vertices)};
}

Geometry make_polygon(std::vector<Point> ring) {
  return Geometry{GeometryKind::polygon, std::move(ring)};
}

bool polygon_is_simple(std::span<const Point> ring, double eps) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  // Cross-product tolerance scales with coordinate magnitude squared.
  double scale = 1.0;
  for (const Point& p : ring) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
  const double area_eps = eps * scale * scale;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const Point& c = ring[j];
      const Point& d = ring[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges share exactly one endpoint; they must not fold back
        // onto each other (collinear overlap beyond the shared vertex).
        const Point& shared = (j == i + 1) ? b : a;
        const Point& tip1 = (j == i + 1) ? a : b;
        const Point& tip2 = (j == i + 1) ? d : c;
        if (orient(tip1, shared, tip2, area_eps) == 0 &&
            ((tip1.x - shared.x) * (tip2.x - shared.x) +
             (tip1.y - shared.y) * (tip2.y - shared.y)) > 0) {
          return false;
        }
        continue;
      }
      if (segments_touch(a, b, c, d, area_eps)) return false;
    }
  }
  return true;
}

void validate_geometry(const Geometry& g, double eps) {
  for (const Point& p : g.vertices) {
    if (!finite(p)) throw ValidationError("geometry has non-finite coordinates");
  }
  switch (g.kind) {
    case GeometryKind::point:
      if (g.vertices.size() != 1) {
        throw ValidationError("point geometry must have exactly one vertex");
      }
      return;
    case GeometryKind::polyline: {
      if (g.vertices.size() < 2) {
        throw ValidationError("polyline must have at least 2 vertices");
      }
      for (std::size_t i = 0; i + 1 < g.vertices.size(); ++i) {
        if (sq_dist(g.vertices[i], g.vertices[i + 1]) <= eps * eps) {
          throw ValidationError("polyline has coincident consecutive vertices");
        }
      }
      return;
    }
    case GeometryKind::polygon: {
      const auto& ring = g.vertices;
      if (ring.size() < 3) {
        throw ValidationError("polygon ring must have at least 3 vertices");
      }
      const std::size_t n = ring.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (sq_dist(ring[i], ring[(i + 1) % n]) <= eps * eps) {
          throw ValidationError("polygon ring has coincident consecutive vertices");
        }
      }
      if (std::abs(signed_ring_area(ring)) <= eps * eps) {
        throw ValidationError("polygon ring has zero area");
      }
      if (!polygon_is_simple(ring, eps)) {
        throw ValidationError("polygon ring is self-intersecting");
      }
      return;
    }
  }
  throw ValidationError("unknown geometry kind");
}

MapLayer::MapLayer(std::string map_id, int year, bool georeferenced,
                   std::vector<Entity> entities, double eps)
    : map_id_(std::move(map_id)),
      year_(year),
      georeferenced_(georeferenced),
      entities_(std::move(entities)) {
  if (year_ <= 0) throw ValidationError("map year must be positive");
  by_id_.reserve(entities_.size());
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    const Entity& e = entities_[i];
    if (e.id.empty()) throw ValidationError("entity id must be nonempty");
    if (!by_id_.emplace(e.id, i).second) {
      throw ValidationError("duplicate entity id \"" + e.id + "\" in layer " + map_id_);
    }
    if (e.name) {
      const auto& s = *e.name;
      if (s.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw ValidationError("entity \"" + e.id + "\" has a blank label");
      }
    }
    validate_geometry(e.geometry, eps);
  }
}

const Entity* MapLayer::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &entities_[it->second];
}

const Entity& MapLayer::at(std::string_view id) const {
  const Entity* e = find(id);
  if (!e) {
    throw ValidationError("entity id \"" + std::string(id) + "\" not in layer " + map_id_);
  }
  return *e;
}

std::size_t MapLayer::index_of(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) {
    throw ValidationError("entity id \"" + std::string(id) + "\" not in layer " + map_id_);
  }
  return it->second;
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::text: return "text";
    case Provenance::topo: return "topo";
    case Provenance::dist: return "dist";
    case Provenance::approx: return "approx";
    case Provenance::refined: return "refined";
  }
  return "?";
}

Provenance provenance_from_string(std::string_view name) {
  if (name == "text") return Provenance::text;
  if (name == "topo") return Provenance::topo;
  if (name == "dist") return Provenance::dist;
  if (name == "approx") return Provenance::approx;
  if (name == "refined") return Provenance::refined;
  throw ParseError("unknown provenance: " + std::string(name));
}

std::pair<std::string, std::optional<double>> primary_score(const AlignmentPair& p) {
  if (p.scores.distance) return {p.scores.metric, p.scores.distance};
  if (p.scores.overlap_ratio) return {"overlap_ratio", p.scores.overlap_ratio};
  if (p.scores.inn_jaccard) return {"inn_jaccard", p.scores.inn_jaccard};
  return {"", std::nullopt};
}

bool operator==(const AlignmentPair& a, const AlignmentPair& b) {
  return a.id_a == b.id_a && a.id_b == b.id_b && a.provenance == b.provenance &&
         primary_score(a) == primary_score(b);
}

AlignmentResult AlignmentResult::from_pairs(std::vector<AlignmentPair> pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const AlignmentPair& x, const AlignmentPair& y) {
    return x.id_a != y.id_a ? x.id_a < y.id_a : x.id_b < y.id_b;
  });
  AlignmentResult r;
  r.a_to_b_.reserve(pairs.size());
  r.b_to_a_.reserve(pairs.size());
  for (const AlignmentPair& p : pairs) {
    if (!r.a_to_b_.emplace(p.id_a, p.id_b).second) {
      throw OneToOneViolation("entity \"" + p.id_a + "\" aligned more than once (side A)");
    }
    if (!r.b_to_a_.emplace(p.id_b, p.id_a).second) {
      throw OneToOneViolation("entity \"" + p.id_b + "\" aligned more than once (side B)");
    }
  }
  r.pairs_ = std::move(pairs);
  return r;
}

const std::string* AlignmentResult::b_for_a(std::string_view id) const {
  auto it = a_to_b_.find(std::string(id));
  return it == a_to_b_.end() ? nullptr : &it->second;
}

const std::string* AlignmentResult::a_for_b(std::string_view id) const {
  auto it = b_to_a_.find(std::string(id));
  return it == b_to_a_.end() ? nullptr : &it->second;
}

GroundTruth GroundTruth::from_pairs(std::vector<std::pair<std::string, std::string>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  GroundTruth t;
  std::unordered_map<std::string, std::string> b_seen;
  for (const auto& [a, b] : pairs) {
    if (!t.a_to_b_.emplace(a, b).second) {
      throw ValidationError("ground truth lists \"" + a + "\" more than once (side A)");
    }
    if (!b_seen.emplace(b, a).second) {
      throw ValidationError("ground truth lists \"" + b + "\" more than once (side B)");
    }
  }
  t.pairs_ = std::move(pairs);
  return t;
}

bool GroundTruth::contains(std::string_view id_a, std::string_view id_b) const {
  auto it = a_to_b_.find(std::string(id_a));
  return it != a_to_b_.end() && it->second == id_b;
}

}  // namespace mapalign
