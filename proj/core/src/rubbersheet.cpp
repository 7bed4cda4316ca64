#include "mapalign/rubbersheet.hpp"

#include <algorithm>
#include <cmath>

#include "mapalign/geometry.hpp"

namespace mapalign::rubbersheet {
namespace {

// Distinct intersection points of two polylines, or nullopt when any
// segment pair overlaps collinearly (no single well-defined point).
std::optional<std::vector<Point>> polyline_intersections(const Geometry& a, const Geometry& b) {
  std::vector<Point> points;
  for (std::size_t i = 0; i + 1 < a.vertices.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.vertices.size(); ++j) {
      const auto hit = geom::segment_intersection(a.vertices[i], a.vertices[i + 1],
                                                  b.vertices[j], b.vertices[j + 1]);
      if (!hit) continue;
      if (geom::point_distance(hit->first, hit->second) > kEps) return std::nullopt;
      const Point p = hit->first;
      const bool seen = std::any_of(points.begin(), points.end(), [&](const Point& q) {
        return geom::point_distance(p, q) <= kEps;
      });
      if (!seen) points.push_back(p);
    }
  }
  return points;
}

struct Stats {
  double sxx = 0, sxy = 0, syy = 0;
  double sxu = 0, syu = 0, sxv = 0, syv = 0;
};

}  // namespace

std::string_view to_string(RubberSheetFailure f) {
  switch (f) {
    case RubberSheetFailure::insufficient_control_points:
      return "insufficient_control_points";
    case RubberSheetFailure::degenerate_configuration:
      return "degenerate_configuration";
  }
  return "?";
}

std::vector<ControlPointPair> extract_control_points(const AlignmentResult& seed,
                                                     const MapLayer& a, const MapLayer& b) {
  std::vector<ControlPointPair> out;
  std::vector<const AlignmentPair*> line_pairs;
  for (const AlignmentPair& p : seed.pairs()) {
    const Entity& ea = a.at(p.id_a);
    const Entity& eb = b.at(p.id_b);
    if (ea.geometry.kind == GeometryKind::polyline) {
      line_pairs.push_back(&p);
    } else if (ea.geometry.kind == GeometryKind::point) {
      out.push_back({ea.geometry.vertices[0], eb.geometry.vertices[0],
                     ControlPointOrigin::point_feature, {p.id_a, p.id_b}, true});
    }
  }
  for (std::size_t i = 0; i < line_pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < line_pairs.size(); ++j) {
      const AlignmentPair& p1 = *line_pairs[i];
      const AlignmentPair& p2 = *line_pairs[j];
      const auto pts_a =
          polyline_intersections(a.at(p1.id_a).geometry, a.at(p2.id_a).geometry);
      if (!pts_a || pts_a->size() != 1) continue;
      const auto pts_b =
          polyline_intersections(b.at(p1.id_b).geometry, b.at(p2.id_b).geometry);
      if (!pts_b || pts_b->size() != 1) continue;
      out.push_back({pts_a->front(), pts_b->front(), ControlPointOrigin::line_intersection,
                     {p1.id_a, p2.id_a, p1.id_b, p2.id_b}, true});
    }
  }
  std::sort(out.begin(), out.end(), [](const ControlPointPair& x, const ControlPointPair& y) {
    return x.source_entities < y.source_entities;
  });
  return out;
}

AffineTransform fit_affine(std::span<const ControlPointPair> cps, bool accepted_only) {
  std::vector<const ControlPointPair*> used;
  for (const ControlPointPair& cp : cps) {
    if (!accepted_only || cp.accepted) used.push_back(&cp);
  }
  if (used.size() < 3) {
    throw InsufficientControlPoints("affine fit needs at least 3 control points, got " +
                                    std::to_string(used.size()));
  }
  const double n = static_cast<double>(used.size());
  double mx = 0, my = 0, mu = 0, mv = 0;
  for (const ControlPointPair* cp : used) {
    mx += cp->src.x;
    my += cp->src.y;
    mu += cp->dst.x;
    mv += cp->dst.y;
  }
  mx /= n;
  my /= n;
  mu /= n;
  mv /= n;
  // Centered normal equations; centering keeps the 2x2 system well scaled.
  Stats s;
  for (const ControlPointPair* cp : used) {
    const double x = cp->src.x - mx, y = cp->src.y - my;
    const double u = cp->dst.x - mu, v = cp->dst.y - mv;
    s.sxx += x * x;
    s.sxy += x * y;
    s.syy += y * y;
    s.sxu += x * u;
    s.syu += y * u;
    s.sxv += x * v;
    s.syv += y * v;
  }
  const double det = s.sxx * s.syy - s.sxy * s.sxy;
  const double tr = s.sxx + s.syy;
  const double l_min = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
  if (!(l_min > std::max(kEps * kEps, 1e-14 * tr))) {
    throw DegenerateConfiguration("control points are collinear");
  }
  AffineTransform t;
  t.a = (s.syy * s.sxu - s.sxy * s.syu) / det;
  t.b = (s.sxx * s.syu - s.sxy * s.sxu) / det;
  t.d = (s.syy * s.sxv - s.sxy * s.syv) / det;
  t.e = (s.sxx * s.syv - s.sxy * s.sxv) / det;
  t.c = mu - t.a * mx - t.b * my;
  t.f = mv - t.d * mx - t.e * my;
  return t;
}

std::vector<ControlPointPair> filter_control_points(std::vector<ControlPointPair> cps,
                                                    const AffineTransform& t) {
  if (cps.empty()) return cps;
  std::vector<double> residuals;
  residuals.reserve(cps.size());
  for (const ControlPointPair& cp : cps) {
    residuals.push_back(geom::point_distance(t.apply(cp.src), cp.dst));
  }
  const double n = static_cast<double>(residuals.size());
  double mean = 0;
  for (const double r : residuals) mean += r;
  mean /= n;
  double var = 0;
  for (const double r : residuals) var += (r - mean) * (r - mean);
  const double sigma = std::sqrt(var / n);  // population
  // The eps slack keeps exactly-consistent points from being rejected on
  // floating-point noise alone.
  for (std::size_t i = 0; i < cps.size(); ++i) {
    cps[i].accepted = residuals[i] <= mean + 2.0 * sigma + kEps;
  }
  return cps;
}

MapLayer apply_transform(const MapLayer& layer, const AffineTransform& t) {
  std::vector<Entity> entities = layer.entities();
  for (Entity& e : entities) {
    for (Point& p : e.geometry.vertices) p = t.apply(p);
  }
  return MapLayer(layer.map_id(), layer.year(), layer.georeferenced(), std::move(entities));
}

RubberSheetOutcome rubber_sheet(const MapLayer& a, const MapLayer& b,
                                const AlignmentResult& seed) {
  RubberSheetOutcome out;
  std::vector<ControlPointPair> cps = extract_control_points(seed, a, b);
  out.extracted_count = cps.size();
  if (cps.size() < 3) {
    out.failure = RubberSheetFailure::insufficient_control_points;
    out.control_points = std::move(cps);
    return out;
  }
  AffineTransform initial;
  try {
    initial = fit_affine(cps, false);
  } catch (const DegenerateConfiguration&) {
    out.failure = RubberSheetFailure::degenerate_configuration;
    out.control_points = std::move(cps);
    return out;
  }
  cps = filter_control_points(std::move(cps), initial);
  out.accepted_count = static_cast<std::size_t>(
      std::count_if(cps.begin(), cps.end(), [](const auto& cp) { return cp.accepted; }));
  out.control_points = cps;
  if (out.accepted_count < 3) {
    out.failure = RubberSheetFailure::insufficient_control_points;
    return out;
  }
  try {
    out.transform = fit_affine(cps, true);
  } catch (const DegenerateConfiguration&) {
    out.failure = RubberSheetFailure::degenerate_configuration;
    return out;
  }
  out.transformed_a = apply_transform(a, out.transform);
  out.ok = true;
  return out;
}

}  // namespace mapalign::rubbersheet
