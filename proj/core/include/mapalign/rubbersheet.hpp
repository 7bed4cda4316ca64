#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mapalign/types.hpp"

namespace mapalign::rubbersheet {

enum class ControlPointOrigin { line_intersection, point_feature };

struct ControlPointPair {
  Point src;  // map A frame
  Point dst;  // map B frame
  ControlPointOrigin origin = ControlPointOrigin::line_intersection;
  std::vector<std::string> source_entities;  // A ids then B ids
  bool accepted = true;
};

// Planar affine map (x, y) -> (a x + b y + c, d x + e y + f).
struct AffineTransform {
  double a = 1, b = 0, c = 0;
  double d = 0, e = 1, f = 0;

  Point apply(const Point& p) const {
    return {a * p.x + b * p.y + c, d * p.x + e * p.y + f};
  }
  bool nondegenerate(double eps = kEps) const { return std::abs(a * e - b * d) > eps; }
};

class InsufficientControlPoints : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DegenerateConfiguration : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Control points from a text-seeded alignment: the single crossing point of
// two matched polyline pairs (skipped when either side meets in more than
// one point or overlaps), plus matched point features directly. Output is
// sorted by the involved entity ids.
std::vector<ControlPointPair> extract_control_points(const AlignmentResult& seed,
                                                     const MapLayer& a, const MapLayer& b);

// Least-squares fit of T minimizing sum |T(src) - dst|^2. Exactly
// interpolates three non-collinear points. Throws InsufficientControlPoints
// (< 3 usable) or DegenerateConfiguration (collinear sources).
AffineTransform fit_affine(std::span<const ControlPointPair> cps, bool accepted_only);

// One-sided 2-sigma residual filter: pairs with residual > mean + 2 sigma
// (population, plus eps slack) get accepted = false, the rest accepted =
// true. Order kept.
std::vector<ControlPointPair> filter_control_points(std::vector<ControlPointPair> cps,
                                                    const AffineTransform& t);

MapLayer apply_transform(const MapLayer& layer, const AffineTransform& t);

enum class RubberSheetFailure { insufficient_control_points, degenerate_configuration };

std::string_view to_string(RubberSheetFailure f);

struct RubberSheetOutcome {
  bool ok = false;
  RubberSheetFailure failure = RubberSheetFailure::insufficient_control_points;
  AffineTransform transform;                 // meaningful when ok
  std::optional<MapLayer> transformed_a;     // present when ok
  std::vector<ControlPointPair> control_points;  // post filtering
  std::size_t extracted_count = 0;
  std::size_t accepted_count = 0;
};

// Full pipeline: extract, fit on all points, filter at 2 sigma, refit on the
// accepted points, transform every vertex of layer a into b's frame.
RubberSheetOutcome rubber_sheet(const MapLayer& a, const MapLayer& b,
                                const AlignmentResult& seed);

}  // namespace mapalign::rubbersheet
