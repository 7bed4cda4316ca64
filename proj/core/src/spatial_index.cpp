#include "mapalign/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace mapalign::geom {
namespace {

// Grid resolution aims at a handful of entities per cell; capped so huge
// layers with tiny entities do not explode the cell table.
constexpr std::size_t kMaxCellsPerAxis = 256;

}  // namespace

SpatialIndex::SpatialIndex(const MapLayer& layer) : layer_(&layer) {
  const auto& entities = layer.entities();
  boxes_.reserve(entities.size());
  for (const Entity& e : entities) boxes_.push_back(bounding_box(e.geometry));
  extent_ = bounding_box(layer);
  if (entities.empty()) {
    extent_ = {0, 0, 0, 0};
    cells_.resize(1);
    return;
  }
  const std::size_t target = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(entities.size()))));
  nx_ = std::clamp<std::size_t>(target, 1, kMaxCellsPerAxis);
  ny_ = nx_;
  cell_w_ = std::max(extent_.width() / static_cast<double>(nx_), 1e-12);
  cell_h_ = std::max(extent_.height() / static_cast<double>(ny_), 1e-12);
  cells_.resize(nx_ * ny_);
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    const Rect& b = boxes_[i];
    const auto x0 = static_cast<std::size_t>(
        std::clamp((b.min_x - extent_.min_x) / cell_w_, 0.0, static_cast<double>(nx_ - 1)));
    const auto x1 = static_cast<std::size_t>(
        std::clamp((b.max_x - extent_.min_x) / cell_w_, 0.0, static_cast<double>(nx_ - 1)));
    const auto y0 = static_cast<std::size_t>(
        std::clamp((b.min_y - extent_.min_y) / cell_h_, 0.0, static_cast<double>(ny_ - 1)));
    const auto y1 = static_cast<std::size_t>(
        std::clamp((b.max_y - extent_.min_y) / cell_h_, 0.0, static_cast<double>(ny_ - 1)));
    for (std::size_t y = y0; y <= y1; ++y) {
      for (std::size_t x = x0; x <= x1; ++x) {
        cells_[y * nx_ + x].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
}

std::vector<std::size_t> SpatialIndex::cells_to_candidates(const Rect& query) const {
  std::vector<std::size_t> out;
  if (layer_->entities().empty()) return out;
  if (!query.intersects(extent_)) return out;
  const auto x0 = static_cast<std::size_t>(
      std::clamp((query.min_x - extent_.min_x) / cell_w_, 0.0, static_cast<double>(nx_ - 1)));
  const auto x1 = static_cast<std::size_t>(
      std::clamp((query.max_x - extent_.min_x) / cell_w_, 0.0, static_cast<double>(nx_ - 1)));
  const auto y0 = static_cast<std::size_t>(
      std::clamp((query.min_y - extent_.min_y) / cell_h_, 0.0, static_cast<double>(ny_ - 1)));
  const auto y1 = static_cast<std::size_t>(
      std::clamp((query.max_y - extent_.min_y) / cell_h_, 0.0, static_cast<double>(ny_ - 1)));
  for (std::size_t y = y0; y <= y1; ++y) {
    for (std::size_t x = x0; x <= x1; ++x) {
      for (std::uint32_t id : cells_[y * nx_ + x]) out.push_back(id);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> SpatialIndex::query_radius(const Geometry& g, double radius) const {
  std::vector<std::string> out;
  const Rect query = bounding_box(g).inflated(std::max(radius, 0.0));
  for (std::size_t i : cells_to_candidates(query)) {
    if (!boxes_[i].inflated(radius).intersects(bounding_box(g))) continue;
    const Entity& e = layer_->entities()[i];
    if (distance(DistanceMetric::ednp, g, e.geometry) <= radius) out.push_back(e.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> SpatialIndex::query_nearest(const Geometry& g, std::size_t k) const {
  const auto& entities = layer_->entities();
  k = std::min(k, entities.size());
  if (k == 0) return {};
  // Grow the search window until k hits are certain, then verify that no
  // entity outside the window could beat the kth distance.
  const Rect gb = bounding_box(g);
  double r = std::max({gb.width(), gb.height(), cell_w_, cell_h_});
  std::vector<std::pair<double, std::size_t>> hits;
  const double extent_diag = std::hypot(extent_.width(), extent_.height()) +
                             std::hypot(gb.width(), gb.height()) +
                             rect_distance(extent_, {gb.min_x, gb.min_y});
  while (true) {
    hits.clear();
    for (std::size_t i : cells_to_candidates(gb.inflated(r))) {
      const double d = distance(DistanceMetric::ednp, g, entities[i].geometry);
      if (d <= r) hits.emplace_back(d, i);
    }
    if (hits.size() >= k || r > 2.0 * extent_diag) break;
    r *= 2.0;
  }
  std::sort(hits.begin(), hits.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return entities[a.second].id < entities[b.second].id;
  });
  if (hits.size() > k) hits.resize(k);
  std::vector<std::string> out;
  out.reserve(hits.size());
  for (const auto& [d, i] : hits) out.push_back(entities[i].id);
  return out;
}

std::vector<std::size_t> SpatialIndex::candidates_near_segment(const Point& p, const Point& q,
                                                               double pad) const {
  Rect query{std::min(p.x, q.x), std::min(p.y, q.y), std::max(p.x, q.x), std::max(p.y, q.y)};
  query = query.inflated(std::max(pad, 0.0));
  std::vector<std::size_t> out;
  for (std::size_t i : cells_to_candidates(query)) {
    if (boxes_[i].intersects(query)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> SpatialIndex::candidates_in_rect(const Rect& r) const {
  std::vector<std::size_t> out;
  for (std::size_t i : cells_to_candidates(r)) {
    if (boxes_[i].intersects(r)) out.push_back(i);
  }
  return out;
}

}  // namespace mapalign::geom
