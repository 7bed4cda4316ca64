#include "mapalign/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/linestring.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace bg = boost::geometry;

namespace mapalign::geom {
namespace {

using BPoint = bg::model::d2::point_xy<double>;
using BLine = bg::model::linestring<BPoint>;
using BPolygon = bg::model::polygon<BPoint>;
using BMulti = bg::model::multi_polygon<BPolygon>;

constexpr double kInf = std::numeric_limits<double>::infinity();

Point lerp(const Point& a, const Point& b, double t) {
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

// Segments of a geometry: none for a point, open chain for a polyline,
// closed ring for a polygon.
struct SegmentRange {
  const std::vector<Point>* v;
  bool closed;
  std::size_t count() const {
    if (v->size() < 2) return 0;
    return closed ? v->size() : v->size() - 1;
  }
  std::pair<Point, Point> operator[](std::size_t i) const {
    return {(*v)[i], (*v)[(i + 1) % v->size()]};
  }
};

SegmentRange segments_of(const Geometry& g) {
  return {&g.vertices, g.kind == GeometryKind::polygon};
}

// Intersection of closed segments ab and cd as a parameter interval on ab.
// Returns false when disjoint; point contact yields t_lo == t_hi.
bool segment_overlap_params(const Point& a, const Point& b, const Point& c, const Point& d,
                            double& t_lo, double& t_hi, Point& p_lo, Point& p_hi) {
  const double rx = b.x - a.x, ry = b.y - a.y;
  const double sx = d.x - c.x, sy = d.y - c.y;
  const double denom = rx * sy - ry * sx;
  const double qpx = c.x - a.x, qpy = c.y - a.y;
  if (denom != 0.0) {
    const double t = (qpx * sy - qpy * sx) / denom;
    const double u = (qpx * ry - qpy * rx) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return false;
    t_lo = t_hi = t;
    p_lo = p_hi = lerp(a, b, t);
    return true;
  }
  if (qpx * ry - qpy * rx != 0.0) return false;  // parallel, not collinear
  const double rr = rx * rx + ry * ry;
  if (rr == 0.0) {
    // ab degenerate; contact iff a lies on cd.
    if (point_segment_distance(a, c, d) > 0.0) return false;
    t_lo = t_hi = 0.0;
    p_lo = p_hi = a;
    return true;
  }
  double t0 = ((c.x - a.x) * rx + (c.y - a.y) * ry) / rr;
  double t1 = ((d.x - a.x) * rx + (d.y - a.y) * ry) / rr;
  if (t0 > t1) std::swap(t0, t1);
  t_lo = std::max(0.0, t0);
  t_hi = std::min(1.0, t1);
  if (t_lo > t_hi) return false;
  p_lo = lerp(a, b, t_lo);
  p_hi = lerp(a, b, t_hi);
  return true;
}

// Candidate (pa, pb) realizing the closest approach of two closed segments.
void segment_segment_nearest(const Point& a, const Point& b, const Point& c, const Point& d,
                             double& best, Point& pa, Point& pb) {
  double t_lo, t_hi;
  Point p_lo, p_hi;
  if (segment_overlap_params(a, b, c, d, t_lo, t_hi, p_lo, p_hi)) {
    best = 0.0;
    pa = pb = std::min(p_lo, p_hi);
    return;
  }
  // Disjoint segments attain their minimum at an endpoint of one of them.
  best = kInf;
  auto consider = [&](const Point& x, const Point& y, double dxy) {
    if (dxy < best || (dxy == best && std::make_pair(x, y) < std::make_pair(pa, pb))) {
      best = dxy;
      pa = x;
      pb = y;
    }
  };
  Point f = closest_point_on_segment(c, a, b);
  consider(f, c, point_distance(f, c));
  f = closest_point_on_segment(d, a, b);
  consider(f, d, point_distance(f, d));
  f = closest_point_on_segment(a, c, d);
  consider(a, f, point_distance(a, f));
  f = closest_point_on_segment(b, c, d);
  consider(b, f, point_distance(b, f));
}

bool is_point_geom(const Geometry& g) { return g.kind == GeometryKind::point; }

// Shared points of two intersecting geometries (polygons filled). Nonempty
// whenever geometries_intersect(a, b) holds.
std::vector<Point> shared_points(const Geometry& a, const Geometry& b) {
  std::vector<Point> out;
  const SegmentRange sa = segments_of(a), sb = segments_of(b);
  for (std::size_t i = 0; i < sa.count(); ++i) {
    const auto [p1, p2] = sa[i];
    for (std::size_t j = 0; j < sb.count(); ++j) {
      const auto [p3, p4] = sb[j];
      double t0, t1;
      Point q0, q1;
      if (segment_overlap_params(p1, p2, p3, p4, t0, t1, q0, q1)) {
        out.push_back(q0);
        if (!(q1 == q0)) out.push_back(q1);
      }
    }
  }
  if (b.kind == GeometryKind::polygon) {
    for (const Point& v : a.vertices) {
      if (point_in_polygon(v, b.vertices)) out.push_back(v);
    }
  }
  if (a.kind == GeometryKind::polygon) {
    for (const Point& v : b.vertices) {
      if (point_in_polygon(v, a.vertices)) out.push_back(v);
    }
  }
  if (is_point_geom(a) || is_point_geom(b)) {
    const Geometry& pt = is_point_geom(a) ? a : b;
    const Geometry& other = is_point_geom(a) ? b : a;
    const Point& v = pt.vertices[0];
    if (is_point_geom(other)) {
      if (v == other.vertices[0]) out.push_back(v);
    } else {
      const SegmentRange so = segments_of(other);
      for (std::size_t j = 0; j < so.count(); ++j) {
        const auto [p3, p4] = so[j];
        if (point_segment_distance(v, p3, p4) == 0.0) out.push_back(v);
      }
    }
  }
  return out;
}

BPolygon to_boost_polygon(const Geometry& g) {
  BPolygon poly;
  for (const Point& p : g.vertices) bg::append(poly.outer(), BPoint(p.x, p.y));
  if (!g.vertices.empty()) {
    bg::append(poly.outer(), BPoint(g.vertices.front().x, g.vertices.front().y));
  }
  bg::correct(poly);
  return poly;
}

Geometry from_boost_ring(const BPolygon::ring_type& ring) {
  std::vector<Point> out;
  out.reserve(ring.size());
  for (const BPoint& p : ring) out.push_back({bg::get<0>(p), bg::get<1>(p)});
  if (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return make_polygon(std::move(out));
}

}  // namespace

std::string_view to_string(DistanceMetric m) {
  switch (m) {
    case DistanceMetric::edc: return "EDC";
    case DistanceMetric::edv: return "EDV";
    case DistanceMetric::hdv: return "HDV";
    case DistanceMetric::ednp: return "EDNP";
  }
  return "?";
}

DistanceMetric metric_from_string(std::string_view name) {
  if (name == "EDC") return DistanceMetric::edc;
  if (name == "EDV") return DistanceMetric::edv;
  if (name == "HDV") return DistanceMetric::hdv;
  if (name == "EDNP") return DistanceMetric::ednp;
  throw ParseError("unknown distance metric: " + std::string(name));
}

Rect bounding_box(const Geometry& g) {
  Rect r{kInf, kInf, -kInf, -kInf};
  for (const Point& p : g.vertices) {
    r.min_x = std::min(r.min_x, p.x);
    r.min_y = std::min(r.min_y, p.y);
    r.max_x = std::max(r.max_x, p.x);
    r.max_y = std::max(r.max_y, p.y);
  }
  return r;
}

Rect bounding_box(const MapLayer& layer) {
  Rect r{kInf, kInf, -kInf, -kInf};
  for (const Entity& e : layer.entities()) {
    const Rect b = bounding_box(e.geometry);
    r.min_x = std::min(r.min_x, b.min_x);
    r.min_y = std::min(r.min_y, b.min_y);
    r.max_x = std::max(r.max_x, b.max_x);
    r.max_y = std::max(r.max_y, b.max_y);
  }
  return r;
}

Rect intersect(const Rect& a, const Rect& b) {
  return {std::max(a.min_x, b.min_x), std::max(a.min_y, b.min_y),
          std::min(a.max_x, b.max_x), std::min(a.max_y, b.max_y)};
}

double rect_distance(const Rect& r, const Point& p) {
  const double dx = std::max({r.min_x - p.x, 0.0, p.x - r.max_x});
  const double dy = std::max({r.min_y - p.y, 0.0, p.y - r.max_y});
  return std::hypot(dx, dy);
}

double point_distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Point closest_point_on_segment(const Point& p, const Point& a, const Point& b) {
  const double abx = b.x - a.x, aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  if (len2 == 0.0) return a;
  double t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return lerp(a, b, t);
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  return point_distance(p, closest_point_on_segment(p, a, b));
}

double segment_segment_distance(const Point& a, const Point& b, const Point& c, const Point& d) {
  double best;
  Point pa, pb;
  segment_segment_nearest(a, b, c, d, best, pa, pb);
  return best;
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  double t0, t1;
  Point q0, q1;
  return segment_overlap_params(a, b, c, d, t0, t1, q0, q1);
}

std::optional<std::pair<Point, Point>> segment_intersection(const Point& a, const Point& b,
                                                            const Point& c, const Point& d) {
  double t0, t1;
  Point q0, q1;
  if (!segment_overlap_params(a, b, c, d, t0, t1, q0, q1)) return std::nullopt;
  return std::make_pair(q0, q1);
}

bool point_in_polygon(const Point& p, std::span<const Point> ring) {
  const std::size_t n = ring.size();
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ring[i];
    const Point& b = ring[(i + 1) % n];
    if (point_segment_distance(p, a, b) == 0.0) return true;  // boundary
    const bool crosses = (a.y > p.y) != (b.y > p.y);
    if (crosses) {
      const double x_at = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (x_at > p.x) inside = !inside;
    }
  }
  return inside;
}

bool geometries_intersect(const Geometry& a, const Geometry& b) {
  const SegmentRange sa = segments_of(a), sb = segments_of(b);
  for (std::size_t i = 0; i < sa.count(); ++i) {
    const auto [p1, p2] = sa[i];
    for (std::size_t j = 0; j < sb.count(); ++j) {
      const auto [p3, p4] = sb[j];
      if (segments_intersect(p1, p2, p3, p4)) return true;
    }
  }
  if (b.kind == GeometryKind::polygon) {
    for (const Point& v : a.vertices) {
      if (point_in_polygon(v, b.vertices)) return true;
    }
  }
  if (a.kind == GeometryKind::polygon) {
    for (const Point& v : b.vertices) {
      if (point_in_polygon(v, a.vertices)) return true;
    }
  }
  if (is_point_geom(a) || is_point_geom(b)) {
    const Geometry& pt = is_point_geom(a) ? a : b;
    const Geometry& other = is_point_geom(a) ? b : a;
    const Point& v = pt.vertices[0];
    if (is_point_geom(other)) return v == other.vertices[0];
    const SegmentRange so = segments_of(other);
    for (std::size_t j = 0; j < so.count(); ++j) {
      const auto [p3, p4] = so[j];
      if (point_segment_distance(v, p3, p4) == 0.0) return true;
    }
  }
  return false;
}

bool geometry_intersects_rect(const Geometry& g, const Rect& r) {
  if (r.min_x > r.max_x || r.min_y > r.max_y) return false;
  for (const Point& v : g.vertices) {
    if (r.contains(v)) return true;
  }
  const Point c1{r.min_x, r.min_y}, c2{r.max_x, r.min_y};
  const Point c3{r.max_x, r.max_y}, c4{r.min_x, r.max_y};
  const SegmentRange sg = segments_of(g);
  for (std::size_t i = 0; i < sg.count(); ++i) {
    const auto [a, b] = sg[i];
    if (segments_intersect(a, b, c1, c2) || segments_intersect(a, b, c2, c3) ||
        segments_intersect(a, b, c3, c4) || segments_intersect(a, b, c4, c1)) {
      return true;
    }
  }
  // Rect fully inside a polygon leaves no vertex or edge contact.
  if (g.kind == GeometryKind::polygon && point_in_polygon(c1, g.vertices)) return true;
  return false;
}

Point centroid(const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::point:
      return g.vertices[0];
    case GeometryKind::polyline: {
      double len_sum = 0.0, cx = 0.0, cy = 0.0;
      for (std::size_t i = 0; i + 1 < g.vertices.size(); ++i) {
        const Point& a = g.vertices[i];
        const Point& b = g.vertices[i + 1];
        const double len = point_distance(a, b);
        len_sum += len;
        cx += len * 0.5 * (a.x + b.x);
        cy += len * 0.5 * (a.y + b.y);
      }
      return {cx / len_sum, cy / len_sum};
    }
    case GeometryKind::polygon: {
      const auto& v = g.vertices;
      const std::size_t n = v.size();
      double a2 = 0.0, cx = 0.0, cy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Point& p = v[i];
        const Point& q = v[(i + 1) % n];
        const double w = p.x * q.y - q.x * p.y;
        a2 += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
      }
      return {cx / (3.0 * a2), cy / (3.0 * a2)};
    }
  }
  return {};
}

namespace {

double min_vertex_distance(const Geometry& a, const Geometry& b) {
  double best = kInf;
  for (const Point& p : a.vertices) {
    for (const Point& q : b.vertices) {
      best = std::min(best, point_distance(p, q));
    }
  }
  return best;
}

double directed_hausdorff(const Geometry& a, const Geometry& b) {
  double worst = 0.0;
  for (const Point& p : a.vertices) {
    double nearest = kInf;
    for (const Point& q : b.vertices) {
      nearest = std::min(nearest, point_distance(p, q));
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

double nearest_point_distance(const Geometry& a, const Geometry& b) {
  if (geometries_intersect(a, b)) return 0.0;
  double best = kInf;
  if (is_point_geom(a) && is_point_geom(b)) {
    return point_distance(a.vertices[0], b.vertices[0]);
  }
  const SegmentRange sa = segments_of(a), sb = segments_of(b);
  if (is_point_geom(a) || is_point_geom(b)) {
    const Point& v = (is_point_geom(a) ? a : b).vertices[0];
    const SegmentRange so = is_point_geom(a) ? sb : sa;
    for (std::size_t j = 0; j < so.count(); ++j) {
      const auto [p, q] = so[j];
      best = std::min(best, point_segment_distance(v, p, q));
    }
    return best;
  }
  for (std::size_t i = 0; i < sa.count(); ++i) {
    const auto [p1, p2] = sa[i];
    for (std::size_t j = 0; j < sb.count(); ++j) {
      const auto [p3, p4] = sb[j];
      best = std::min(best, segment_segment_distance(p1, p2, p3, p4));
    }
  }
  return best;
}

}  // namespace

double distance(DistanceMetric metric, const Geometry& a, const Geometry& b) {
  switch (metric) {
    case DistanceMetric::edc:
      return point_distance(centroid(a), centroid(b));
    case DistanceMetric::edv:
      return min_vertex_distance(a, b);
    case DistanceMetric::hdv:
      return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
    case DistanceMetric::ednp:
      return nearest_point_distance(a, b);
  }
  return 0.0;
}

std::pair<Point, Point> nearest_points(const Geometry& a, const Geometry& b) {
  if (geometries_intersect(a, b)) {
    const std::vector<Point> pts = shared_points(a, b);
    const Point p = *std::min_element(pts.begin(), pts.end());
    return {p, p};
  }
  double best = kInf;
  Point pa{}, pb{};
  auto consider = [&](const Point& x, const Point& y) {
    const double d = point_distance(x, y);
    if (d < best || (d == best && std::make_pair(x, y) < std::make_pair(pa, pb))) {
      best = d;
      pa = x;
      pb = y;
    }
  };
  if (is_point_geom(a) && is_point_geom(b)) {
    return {a.vertices[0], b.vertices[0]};
  }
  const SegmentRange sa = segments_of(a), sb = segments_of(b);
  if (is_point_geom(a)) {
    const Point& v = a.vertices[0];
    for (std::size_t j = 0; j < sb.count(); ++j) {
      const auto [p, q] = sb[j];
      consider(v, closest_point_on_segment(v, p, q));
    }
    return {pa, pb};
  }
  if (is_point_geom(b)) {
    const Point& v = b.vertices[0];
    for (std::size_t i = 0; i < sa.count(); ++i) {
      const auto [p, q] = sa[i];
      consider(closest_point_on_segment(v, p, q), v);
    }
    return {pa, pb};
  }
  for (std::size_t i = 0; i < sa.count(); ++i) {
    const auto [p1, p2] = sa[i];
    for (std::size_t j = 0; j < sb.count(); ++j) {
      const auto [p3, p4] = sb[j];
      double d;
      Point x, y;
      segment_segment_nearest(p1, p2, p3, p4, d, x, y);
      consider(x, y);
    }
  }
  return {pa, pb};
}

namespace {

// First principal axis of the centered vertex set, as a unit vector.
// Returns false when the axis is not well defined.
bool principal_axis(const Geometry& g, double& ux, double& uy) {
  const auto& v = g.vertices;
  const double n = static_cast<double>(v.size());
  double mx = 0.0, my = 0.0;
  for (const Point& p : v) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const Point& p : v) {
    const double dx = p.x - mx, dy = p.y - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double tr = sxx + syy;
  const double det = sxx * syy - sxy * sxy;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  const double l_max = 0.5 * (tr + disc);
  const double l_min = 0.5 * (tr - disc);
  if (!(l_max > 0.0) || (l_max - l_min) <= 1e-12 * l_max) return false;
  // Eigenvector of the larger eigenvalue: both rows of (C - l_max I) give a
  // normal; take the better-conditioned one.
  double ex = sxy, ey = l_max - sxx;
  const double ex2 = l_max - syy, ey2 = sxy;
  if (ex2 * ex2 + ey2 * ey2 > ex * ex + ey * ey) {
    ex = ex2;
    ey = ey2;
  }
  const double len = std::hypot(ex, ey);
  if (len == 0.0) return false;
  ux = ex / len;
  uy = ey / len;
  return true;
}

void direction_of(const Geometry& g, double& ux, double& uy) {
  if (principal_axis(g, ux, uy)) return;
  // Chord fallback, then first segment when the chord collapses.
  const Point& first = g.vertices.front();
  const Point& last = g.vertices.back();
  double dx = last.x - first.x, dy = last.y - first.y;
  if (dx == 0.0 && dy == 0.0 && g.vertices.size() >= 2) {
    dx = g.vertices[1].x - first.x;
    dy = g.vertices[1].y - first.y;
  }
  const double len = std::hypot(dx, dy);
  ux = len == 0.0 ? 1.0 : dx / len;
  uy = len == 0.0 ? 0.0 : dy / len;
}

}  // namespace

double principal_angle(const Geometry& a, const Geometry& b) {
  if (a.kind != GeometryKind::polyline || b.kind != GeometryKind::polyline) {
    throw ValidationError("principal_angle requires two polylines");
  }
  double ax, ay, bx, by;
  direction_of(a, ax, ay);
  direction_of(b, bx, by);
  const double c = std::clamp(std::abs(ax * bx + ay * by), 0.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi_v<double>;
}

Geometry buffer(const Geometry& g, double d) {
  if (!(d > 0.0)) throw ValidationError("buffer distance must be positive");
  const bg::strategy::buffer::distance_symmetric<double> dist(d);
  const bg::strategy::buffer::side_straight side;
  const bg::strategy::buffer::join_round join(32);
  const bg::strategy::buffer::end_round end(32);
  const bg::strategy::buffer::point_circle circle(32);
  BMulti out;
  switch (g.kind) {
    case GeometryKind::point: {
      const BPoint p(g.vertices[0].x, g.vertices[0].y);
      bg::buffer(p, out, dist, side, join, end, circle);
      break;
    }
    case GeometryKind::polyline: {
      BLine line;
      for (const Point& p : g.vertices) bg::append(line, BPoint(p.x, p.y));
      bg::buffer(line, out, dist, side, join, end, circle);
      break;
    }
    case GeometryKind::polygon: {
      bg::buffer(to_boost_polygon(g), out, dist, side, join, end, circle);
      break;
    }
  }
  if (out.empty()) throw ValidationError("buffer produced no output");
  // A connected input buffers to one region; keep the largest if the
  // backend ever splits it.
  const BPolygon* biggest = &out.front();
  double biggest_area = bg::area(*biggest);
  for (const BPolygon& poly : out) {
    const double a = bg::area(poly);
    if (a > biggest_area) {
      biggest_area = a;
      biggest = &poly;
    }
  }
  return from_boost_ring(biggest->outer());
}

double area(const Geometry& polygon) {
  if (polygon.kind != GeometryKind::polygon) {
    throw ValidationError("area requires a polygon");
  }
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % n];
    acc += p.x * q.y - q.x * p.y;
  }
  return std::abs(0.5 * acc);
}

double intersection_area(const Geometry& p, const Geometry& q) {
  if (p.kind != GeometryKind::polygon || q.kind != GeometryKind::polygon) {
    throw ValidationError("intersection_area requires polygons");
  }
  // Canonical argument order keeps the result bit-exactly symmetric.
  const Geometry* lo = &p;
  const Geometry* hi = &q;
  if (std::lexicographical_compare(hi->vertices.begin(), hi->vertices.end(),
                                   lo->vertices.begin(), lo->vertices.end())) {
    std::swap(lo, hi);
  }
  BMulti out;
  bg::intersection(to_boost_polygon(*lo), to_boost_polygon(*hi), out);
  double acc = 0.0;
  for (const BPolygon& poly : out) {
    assert(poly.inners().empty());  // simple inputs cannot produce holes
    acc += bg::area(poly);
  }
  return std::max(0.0, acc);
}

namespace {

// Does the point set of one segment [a,b] meet the part of segment [p,q]
// farther than eps from both p and q?
bool segment_hits_open(const Point& p, const Point& q, const Point& a, const Point& b,
                       double eps) {
  double t0, t1;
  Point q0, q1;
  if (!segment_overlap_params(p, q, a, b, t0, t1, q0, q1)) return false;
  const double len = point_distance(p, q);
  const double t_eps = eps / len;
  return t1 >= t_eps && t0 <= 1.0 - t_eps;
}

}  // namespace

bool segment_blocked_by(const Point& p, const Point& q, const Geometry& g) {
  if (point_distance(p, q) <= kEps) return false;
  if (g.kind == GeometryKind::point) {
    const Point& v = g.vertices[0];
    return point_segment_distance(v, p, q) <= kEps && point_distance(v, p) > kEps &&
           point_distance(v, q) > kEps;
  }
  const SegmentRange sg = segments_of(g);
  for (std::size_t i = 0; i < sg.count(); ++i) {
    const auto [a, b] = sg[i];
    if (segment_hits_open(p, q, a, b, kEps)) return true;
  }
  if (g.kind == GeometryKind::polygon) {
    // No boundary contact on the open part: the segment lies fully inside
    // or fully outside, decided by the midpoint.
    const Point mid{0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
    return point_in_polygon(mid, g.vertices);
  }
  return false;
}

bool segment_blocked(const Point& p, const Point& q, const MapLayer& layer,
                     std::pair<std::string_view, std::string_view> exclude) {
  if (point_distance(p, q) <= kEps) return false;
  for (const Entity& e : layer.entities()) {
    if (e.id == exclude.first || e.id == exclude.second) continue;
    if (segment_blocked_by(p, q, e.geometry)) return true;
  }
  return false;
}

}  // namespace mapalign::geom
