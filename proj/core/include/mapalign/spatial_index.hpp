#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mapalign/geometry.hpp"
#include "mapalign/types.hpp"

namespace mapalign::geom {

// Uniform-grid acceleration structure over one layer's geometries.
// Immutable after construction; concurrent queries are safe. Every query
// returns exactly what a brute-force scan over the layer would.
class SpatialIndex {
public:
  explicit SpatialIndex(const MapLayer& layer);

  const MapLayer& layer() const { return *layer_; }

  // Entity ids whose EDNP distance to g is <= radius, sorted by id.
  std::vector<std::string> query_radius(const Geometry& g, double radius) const;

  // The k entities nearest to g by (EDNP distance, id), in that order.
  std::vector<std::string> query_nearest(const Geometry& g, std::size_t k) const;

  // Superset of the entities whose geometry can come within pad of the
  // segment pq, as indices into layer().entities(). Ascending order.
  std::vector<std::size_t> candidates_near_segment(const Point& p, const Point& q,
                                                   double pad) const;

  // Superset of the entities whose bounding box meets r. Ascending order.
  std::vector<std::size_t> candidates_in_rect(const Rect& r) const;

private:
  std::vector<std::size_t> cells_to_candidates(const Rect& query) const;

  const MapLayer* layer_;
  std::vector<Rect> boxes_;  // per entity
  Rect extent_{};
  double cell_w_ = 1.0, cell_h_ = 1.0;
  std::size_t nx_ = 1, ny_ = 1;
  std::vector<std::vector<std::uint32_t>> cells_;
};

inline SpatialIndex build_index(const MapLayer& layer) { return SpatialIndex(layer); }

}  // namespace mapalign::geom
