#include "mapalign/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <unordered_set>
#include <vector>

#include "mapalign/rand.hpp"

namespace mapalign::detail {

double Rng::normal(double mean, double sigma) {
  // Box-Muller on two fresh uniforms; no cached spare, so the draw count
  // per call is fixed.
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + sigma * r * std::cos(2.0 * std::numbers::pi_v<double> * u2);
}

}  // namespace mapalign::detail

namespace mapalign::synth {
namespace {

// Roads end exactly at the grid boundary. An overhang past the outermost
// crossing would open sight lines between parallel roads around the block
// rows, which changes the INN structure.
constexpr double kCell = 100.0;  // road spacing
constexpr double kInset = 12.0;  // block inset from the road lines

std::string ordinal_name(int n) {
  const int mod100 = n % 100;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    switch (n % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(n) + suffix;
}

std::string avenue_name(int j) {
  static const std::array<const char*, 10> kTrees = {
      "Oak", "Elm", "Maple", "Pine", "Cedar", "Birch", "Ash", "Walnut", "Spruce", "Chestnut",
  };
  if (j < static_cast<int>(kTrees.size())) return std::string(kTrees[j]) + " Av";
  return "V" + std::to_string(j) + " Av";
}

struct BaseEntity {
  std::string name;
  Geometry geometry;
  bool pinned = false;  // keeps its label and survives dropping
};

Point transform_point(const Point& p, double rot_rad, double scale, double tx, double ty) {
  const double c = std::cos(rot_rad), s = std::sin(rot_rad);
  return {scale * (c * p.x - s * p.y) + tx, scale * (s * p.x + c * p.y) + ty};
}

Geometry jittered(const Geometry& g, double sigma, detail::Rng& rng) {
  if (sigma <= 0.0) return g;
  // Re-draw when noise degenerates the geometry; the retry sequence is part
  // of the deterministic stream.
  for (int attempt = 0; attempt < 16; ++attempt) {
    Geometry out = g;
    for (Point& p : out.vertices) {
      p.x += rng.normal(0.0, sigma);
      p.y += rng.normal(0.0, sigma);
    }
    try {
      validate_geometry(out);
      return out;
    } catch (const ValidationError&) {
      continue;
    }
  }
  return g;
}

}  // namespace

void validate(const SynthParams& params) {
  if (params.grid_rows < 1 || params.grid_cols < 1) {
    throw ValidationError("grid must have at least 1x1 blocks");
  }
  if (params.point_count < 0) throw ValidationError("point_count must be non-negative");
  if (!(params.scale > 0.0)) throw ValidationError("scale must be positive");
  if (params.vertex_jitter_sigma < 0.0) throw ValidationError("jitter sigma must be >= 0");
  auto fraction = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!fraction(params.label_keep_fraction) || !fraction(params.entity_drop_fraction)) {
    throw ValidationError("fractions must lie in [0, 1]");
  }
}

SynthDataset generate_synthetic(const SynthParams& params) {
  validate(params);
  detail::Rng rng(params.rng_seed);
  const int rows = params.grid_rows, cols = params.grid_cols;

  std::vector<BaseEntity> base;
  // Pinned roads prefer interior grid lines: their mutual crossings are
  // transversal (the roads continue on both sides), so they survive vertex
  // jitter. Boundary roads only touch at their endpoints.
  auto pinned_index = [](int idx, int count) {
    return count >= 2 ? (idx == 1 || idx == 2) : (idx == 0 || idx == 1);
  };
  // Horizontal roads, bottom to top.
  for (int i = 0; i <= rows; ++i) {
    const double y = i * kCell;
    std::vector<Point> v;
    for (int j = 0; j <= cols; ++j) v.push_back({j * kCell, y});
    base.push_back(
        {ordinal_name(i + 1) + " St", make_polyline(std::move(v)), pinned_index(i, rows)});
  }
  // Vertical roads, left to right.
  for (int j = 0; j <= cols; ++j) {
    const double x = j * kCell;
    std::vector<Point> v;
    for (int i = 0; i <= rows; ++i) v.push_back({x, i * kCell});
    base.push_back({avenue_name(j), make_polyline(std::move(v)), pinned_index(j, cols)});
  }
  // City blocks.
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double x0 = j * kCell + kInset, x1 = (j + 1) * kCell - kInset;
      const double y0 = i * kCell + kInset, y1 = (i + 1) * kCell - kInset;
      base.push_back({"Block " + std::to_string(i * cols + j + 1),
                      make_polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}),
                      false});
    }
  }
  // Point features inside blocks, cycling through them.
  for (int k = 0; k < params.point_count; ++k) {
    const int cell = k % (rows * cols);
    const int i = cell / cols, j = cell % cols;
    const double cx = (j + 0.5) * kCell, cy = (i + 0.5) * kCell;
    const double dx = rng.uniform(-kCell / 4.0, kCell / 4.0);
    const double dy = rng.uniform(-kCell / 4.0, kCell / 4.0);
    base.push_back({"BM " + std::to_string(k + 1), make_point(cx + dx, cy + dy), false});
  }

  const std::size_t n = base.size();
  const bool pin_labels = params.label_keep_fraction >= 0.3;

  auto draw_labels = [&] {
    std::vector<char> keep(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      const bool coin = rng.uniform01() < params.label_keep_fraction;
      keep[k] = (coin || (pin_labels && base[k].pinned)) ? 1 : 0;
    }
    return keep;
  };
  const std::vector<char> keep_a = draw_labels();
  const std::vector<char> keep_b = draw_labels();

  // Drop set for map B; pinned roads stay so the control-point guarantee
  // holds under dropping.
  std::vector<std::size_t> droppable;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(pin_labels && base[k].pinned)) droppable.push_back(k);
  }
  const auto drop_count = static_cast<std::size_t>(
      std::floor(params.entity_drop_fraction * static_cast<double>(n)));
  if (drop_count >= n) {
    throw ValidationError("entity_drop_fraction leaves no entity on map B");
  }
  std::unordered_set<std::size_t> dropped;
  for (std::size_t k = droppable.size(); k > 1; --k) {  // Fisher-Yates
    std::swap(droppable[k - 1], droppable[rng.index(k)]);
  }
  for (std::size_t k = 0; k < std::min(drop_count, droppable.size()); ++k) {
    dropped.insert(droppable[k]);
  }

  const double rot = params.rotation_deg * std::numbers::pi_v<double> / 180.0;
  std::vector<Entity> ents_a, ents_b;
  std::vector<std::pair<std::string, std::string>> truth_pairs;
  for (std::size_t k = 0; k < n; ++k) {
    Entity ea;
    ea.id = "A" + std::to_string(k);
    if (keep_a[k]) ea.name = base[k].name;
    ea.geometry = base[k].geometry;
    ents_a.push_back(std::move(ea));
    if (dropped.count(k)) continue;
    Entity eb;
    eb.id = "B" + std::to_string(k);
    if (keep_b[k]) eb.name = base[k].name;
    eb.geometry = base[k].geometry;
    for (Point& p : eb.geometry.vertices) {
      p = transform_point(p, rot, params.scale, params.translate_x, params.translate_y);
    }
    eb.geometry = jittered(eb.geometry, params.vertex_jitter_sigma, rng);
    truth_pairs.emplace_back("A" + std::to_string(k), eb.id);
    ents_b.push_back(std::move(eb));
  }

  return SynthDataset{
      MapLayer("synth_a", 1889, false, std::move(ents_a)),
      MapLayer("synth_b", 1899, false, std::move(ents_b)),
      GroundTruth::from_pairs(std::move(truth_pairs)),
  };
}

}  // namespace mapalign::synth
