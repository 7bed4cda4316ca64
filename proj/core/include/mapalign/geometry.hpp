#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "mapalign/types.hpp"

namespace mapalign::geom {

// The four spatial distance measures: centroid distance, minimum vertex
// distance, discrete Hausdorff over the vertex sets, and nearest-point
// distance between the geometries as continuous point sets.
enum class DistanceMetric { edc, edv, hdv, ednp };

std::string_view to_string(DistanceMetric m);
DistanceMetric metric_from_string(std::string_view name);

struct Rect {
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;

  bool contains(const Point& p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  bool intersects(const Rect& o) const {
    return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
  }
  Rect inflated(double d) const { return {min_x - d, min_y - d, max_x + d, max_y + d}; }
  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
};

Rect bounding_box(const Geometry& g);
Rect bounding_box(const MapLayer& layer);
// Intersection of two boxes; empty (max < min) when disjoint.
Rect intersect(const Rect& a, const Rect& b);
// Shortest distance from the point set of g to the (filled) rectangle.
double rect_distance(const Rect& r, const Point& p);

// Low-level primitives, shared with the test oracles.
double point_distance(const Point& a, const Point& b);
double point_segment_distance(const Point& p, const Point& a, const Point& b);
Point closest_point_on_segment(const Point& p, const Point& a, const Point& b);
double segment_segment_distance(const Point& a, const Point& b, const Point& c, const Point& d);
// True iff closed segments ab and cd share at least one point.
bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d);
// Intersection of closed segments as at most two points: a crossing or
// touch yields one point twice, a collinear overlap yields its endpoints.
std::optional<std::pair<Point, Point>> segment_intersection(const Point& a, const Point& b,
                                                            const Point& c, const Point& d);
// Point-in-polygon with boundary counted as inside. Ring is implicitly closed.
bool point_in_polygon(const Point& p, std::span<const Point> ring);
// True iff the point sets of the two geometries (polygons filled) share a point.
bool geometries_intersect(const Geometry& a, const Geometry& b);
// True iff the geometry's point set meets the (filled) rectangle.
bool geometry_intersects_rect(const Geometry& g, const Rect& r);

// Point centroid for points, length-weighted centroid for polylines,
// area centroid for polygons.
Point centroid(const Geometry& g);

double distance(DistanceMetric metric, const Geometry& a, const Geometry& b);

// The pair of points, one on each geometry, realizing the EDNP distance.
// Intersecting inputs yield one shared point twice. Ties resolve to the
// lexicographically smallest (x, y) candidate pair.
std::pair<Point, Point> nearest_points(const Geometry& a, const Geometry& b);

// Acute angle in degrees [0, 90] between the dominant directions of two
// polylines (first principal axis of the centered vertex sets; chord
// fallback when the axes degenerate).
double principal_angle(const Geometry& a, const Geometry& b);

// Simple polygon approximating all points within distance d of g, with
// round joins/caps at 8 segments per quarter circle. If the true offset
// region has interior holes, the outer boundary is returned.
Geometry buffer(const Geometry& g, double d);

// Shoelace area of a simple polygon.
double area(const Geometry& polygon);
// Area of the intersection of two simple polygons (convex or not).
double intersection_area(const Geometry& p, const Geometry& q);

// True iff the open segment pq meets the point set of any entity in the
// layer other than the two excluded ids. Contact exactly at p or q does not
// count; p == q yields false.
bool segment_blocked(const Point& p, const Point& q, const MapLayer& layer,
                     std::pair<std::string_view, std::string_view> exclude);

// Same predicate against one entity's geometry, for index-driven scans.
bool segment_blocked_by(const Point& p, const Point& q, const Geometry& g);

}  // namespace mapalign::geom
