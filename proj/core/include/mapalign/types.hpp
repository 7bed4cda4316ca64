#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mapalign {

// Default geometric tolerance in map units. Every predicate that compares
// lengths accepts an override; this is the project-wide default.
inline constexpr double kEps = 1e-9;

// ---------------------------------------------------------------------------
// Errors

// Input could not be parsed (malformed GeoJSON, CSV, config).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input parsed but violates a documented invariant (duplicate id,
// degenerate geometry, unsupported geometry type, ...).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Coordinate-based operation invoked on layers that are not co-registered.
class FramesNotAligned : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Internal pipeline produced an alignment that is not one-to-one. This is a
// bug in the caller, not bad input.
class OneToOneViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Geometry model

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
  }
  // Lexicographic (x, y); used wherever a deterministic tie-break is needed.
  friend bool operator<(const Point& a, const Point& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  }
};

enum class GeometryKind { point, polyline, polygon };

std::string_view to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(std::string_view name);

// A vector feature in map-local units. Polygon rings are stored open: the
// first vertex is not repeated at the end, closure is logical.
struct Geometry {
  GeometryKind kind = GeometryKind::point;
  std::vector<Point> vertices;
};

Geometry make_point(double x, double y);
Geometry make_polyline(std::vector<Point> vertices);
Geometry make_polygon(std::vector<Point> ring);

// True iff no two ring edges intersect except adjacent edges at their shared
// vertex. The ring is taken as implicitly closed.
bool polygon_is_simple(std::span<const Point> ring, double eps = kEps);

// Throws ValidationError unless the geometry satisfies its invariants:
// finite coordinates everywhere; polyline has >= 2 vertices with consecutive
// vertices more than eps apart; polygon ring has >= 3 vertices (consecutive
// and wrap-around distinct), is simple, and has nonzero area.
void validate_geometry(const Geometry& g, double eps = kEps);

// ---------------------------------------------------------------------------
// Entity / layer

struct Entity {
  std::string id;
  std::optional<std::string> name;  // raw label as extracted, if any
  Geometry geometry;
};

// One map's entities plus its year and georeference flag. Immutable after
// construction; safe to share read-only across threads.
class MapLayer {
public:
  MapLayer(std::string map_id, int year, bool georeferenced,
           std::vector<Entity> entities, double eps = kEps);

  const std::string& map_id() const { return map_id_; }
  int year() const { return year_; }
  bool georeferenced() const { return georeferenced_; }
  const std::vector<Entity>& entities() const { return entities_; }
  std::size_t size() const { return entities_.size(); }

  const Entity* find(std::string_view id) const;
  const Entity& at(std::string_view id) const;        // throws ValidationError
  std::size_t index_of(std::string_view id) const;    // throws ValidationError

private:
  std::string map_id_;
  int year_ = 0;
  bool georeferenced_ = false;
  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

// ---------------------------------------------------------------------------
// Alignment output

enum class Provenance { text, topo, dist, approx, refined };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view name);

struct PairScores {
  std::string metric;  // distance metric name, set iff distance is set
  std::optional<double> distance;
  std::optional<double> inn_jaccard;
  std::optional<double> overlap_ratio;
  std::optional<double> angle;
};

struct AlignmentPair {
  std::string id_a;
  std::string id_b;
  Provenance provenance = Provenance::text;
  PairScores scores;
};

// The single (metric, score) column pair carried by the alignment CSV:
// distance first, then overlap ratio, then INN Jaccard; empty for bare
// text matches.
std::pair<std::string, std::optional<double>> primary_score(const AlignmentPair& p);

// Serialized identity: two pairs are equal when their CSV rows would be.
bool operator==(const AlignmentPair& a, const AlignmentPair& b);

// A one-to-one set of cross-map pairs, kept sorted by (id_a, id_b).
class AlignmentResult {
public:
  AlignmentResult() = default;

  // Sorts and validates; throws OneToOneViolation if any id repeats per side.
  static AlignmentResult from_pairs(std::vector<AlignmentPair> pairs);

  const std::vector<AlignmentPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  bool contains_a(std::string_view id) const { return a_to_b_.count(std::string(id)) > 0; }
  bool contains_b(std::string_view id) const { return b_to_a_.count(std::string(id)) > 0; }
  // Partner lookup; nullptr when the id is unmatched.
  const std::string* b_for_a(std::string_view id) const;
  const std::string* a_for_b(std::string_view id) const;

  friend bool operator==(const AlignmentResult& x, const AlignmentResult& y) {
    return x.pairs_ == y.pairs_;
  }

private:
  std::vector<AlignmentPair> pairs_;
  std::unordered_map<std::string, std::string> a_to_b_;
  std::unordered_map<std::string, std::string> b_to_a_;
};

// Manually identified matching pairs, one-to-one per side.
class GroundTruth {
public:
  GroundTruth() = default;

  // Throws ValidationError on a one-to-one violation (ground truth is input).
  static GroundTruth from_pairs(std::vector<std::pair<std::string, std::string>> pairs);

  const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool contains(std::string_view id_a, std::string_view id_b) const;

private:
  std::vector<std::pair<std::string, std::string>> pairs_;  // sorted
  std::unordered_map<std::string, std::string> a_to_b_;
};

}  // namespace mapalign
