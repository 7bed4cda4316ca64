#include "mapalign/topology.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mapalign/geometry.hpp"
#include "mapalign/parallel.hpp"
#include "mapalign/spatial_index.hpp"

namespace mapalign::topo {

const std::set<std::string>& InnSets::of(const std::string& id) const {
  static const std::set<std::string> empty;
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? empty : it->second;
}

void validate(const ApproxParams& params) {
  if (!(params.quantile > 0.0 && params.quantile < 1.0)) {
    throw ValidationError("quantile must lie in (0, 1)");
  }
  if (!(params.within_ratio_threshold > 0.0 && params.within_ratio_threshold <= 1.0)) {
    throw ValidationError("within_ratio_threshold must lie in (0, 1]");
  }
  if (params.buffer_distance < 0.0) {
    throw ValidationError("buffer_distance must be non-negative");
  }
}

InnSets compute_inn_sets(const MapLayer& layer) {
  const auto& entities = layer.entities();
  const std::size_t n = entities.size();
  InnSets::Map by_id;
  for (const Entity& e : entities) by_id[e.id];
  if (n < 2) return InnSets(std::move(by_id));

  const geom::SpatialIndex index(layer);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<char> is_inn(pairs.size(), 0);
  detail::parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const Entity& a = entities[i];
    const Entity& b = entities[j];
    const auto [pa, pb] = geom::nearest_points(a.geometry, b.geometry);
    bool blocked = false;
    for (const std::size_t c : index.candidates_near_segment(pa, pb, kEps)) {
      if (c == i || c == j) continue;
      if (geom::segment_blocked_by(pa, pb, entities[c].geometry)) {
        blocked = true;
        break;
      }
    }
    is_inn[k] = blocked ? 0 : 1;
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (!is_inn[k]) continue;
    const auto [i, j] = pairs[k];
    by_id[entities[i].id].insert(entities[j].id);
    by_id[entities[j].id].insert(entities[i].id);
  }
  return InnSets(std::move(by_id));
}

double inn_jaccard(const std::set<std::string>& inn_a, const std::set<std::string>& inn_b,
                   const AlignmentResult& aligned) {
  const std::size_t total = inn_a.size() + inn_b.size();
  if (total == 0) return 0.0;
  std::size_t matched = 0;
  for (const std::string& x : inn_a) {
    const std::string* y = aligned.b_for_a(x);
    if (y && inn_b.count(*y)) ++matched;
  }
  return 2.0 * static_cast<double>(matched) / static_cast<double>(total);
}

namespace {

// Median bounding-box diagonal over the non-degenerate entities of both
// layers; 0 when only point features exist.
double median_entity_diameter(const MapLayer& a, const MapLayer& b) {
  std::vector<double> diags;
  auto collect = [&](const MapLayer& layer) {
    for (const Entity& e : layer.entities()) {
      const geom::Rect box = geom::bounding_box(e.geometry);
      const double d = std::hypot(box.width(), box.height());
      if (d > 0.0) diags.push_back(d);
    }
  };
  collect(a);
  collect(b);
  if (diags.empty()) return 0.0;
  std::nth_element(diags.begin(), diags.begin() + diags.size() / 2, diags.end());
  return diags[diags.size() / 2];
}

}  // namespace

double broad_buffer_distance(const MapLayer& a, const MapLayer& b, double quantile) {
  if (!(quantile > 0.0 && quantile < 1.0)) {
    throw ValidationError("quantile must lie in (0, 1)");
  }
  std::vector<double> distances;
  distances.reserve(a.size() * b.size());
  for (const Entity& ea : a.entities()) {
    for (const Entity& eb : b.entities()) {
      if (ea.geometry.kind != eb.geometry.kind) continue;
      distances.push_back(geom::distance(geom::DistanceMetric::ednp, ea.geometry, eb.geometry));
    }
  }
  if (distances.empty()) {
    throw ValidationError("no same-kind cross-layer pairs to take a distance quantile over");
  }
  std::sort(distances.begin(), distances.end());
  auto interp = [quantile](std::span<const double> sorted) {
    const double pos = quantile * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
  };
  const double feature_floor = 1e-3 * median_entity_diameter(a, b);
  double q = interp(distances);
  if (q < feature_floor) {
    // The quantile fell into the zero mass of intersecting pairs (crossing
    // roads, coincident features). Those pairs carry no scale information;
    // re-take the quantile over the separated pairs.
    const auto first_positive =
        std::upper_bound(distances.begin(), distances.end(), 0.0);
    if (first_positive != distances.end()) {
      q = interp(std::span<const double>(&*first_positive,
                                         distances.end() - first_positive));
    }
  }
  // A broad boundary thinner than the features is numerically meaningless;
  // the final floor scales with the typical entity size.
  return std::max({q, kEps * 1e3, feature_floor});
}

WithinCheck within_from_buffered(const Geometry& buf_a, const Geometry& buf_b,
                                 double ratio_threshold) {
  const double smaller = std::min(geom::area(buf_a), geom::area(buf_b));
  if (smaller <= 0.0) return {false, 0.0};
  const double inter = geom::intersection_area(buf_a, buf_b);
  const double ratio = std::min(inter / smaller, 1.0);
  return {ratio >= ratio_threshold, ratio};
}

WithinCheck approximately_within(const Entity& a, const Entity& b, const ApproxParams& params) {
  validate(params);
  if (a.geometry.kind != b.geometry.kind) {
    throw ValidationError("approximately_within requires entities of the same geometry kind");
  }
  if (!(params.buffer_distance > 0.0)) {
    throw ValidationError("approximately_within needs a resolved (positive) buffer_distance");
  }
  // Disjoint buffers cannot overlap; skip the clipping.
  const geom::Rect box_a = geom::bounding_box(a.geometry).inflated(params.buffer_distance);
  const geom::Rect box_b = geom::bounding_box(b.geometry).inflated(params.buffer_distance);
  if (!box_a.intersects(box_b)) return {false, 0.0};
  return within_from_buffered(geom::buffer(a.geometry, params.buffer_distance),
                              geom::buffer(b.geometry, params.buffer_distance),
                              params.within_ratio_threshold);
}

}  // namespace mapalign::topo
