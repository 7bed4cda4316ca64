#pragma once

#include <map>
#include <set>
#include <string>

#include "mapalign/types.hpp"

namespace mapalign::topo {

// Immediate nearby neighbors per entity of one layer. Symmetric and
// irreflexive by construction.
class InnSets {
public:
  using Map = std::map<std::string, std::set<std::string>>;

  InnSets() = default;
  explicit InnSets(Map by_id) : by_id_(std::move(by_id)) {}

  const Map& by_id() const { return by_id_; }
  // Neighbors of id; entities without neighbors yield the empty set.
  const std::set<std::string>& of(const std::string& id) const;

private:
  Map by_id_;
};

struct ApproxParams {
  double buffer_distance = 0.0;  // 0 = derive from the distance quantile
  double within_ratio_threshold = 0.8;
  double quantile = 0.05;
};

void validate(const ApproxParams& params);

// Two entities are INNs iff the segment joining their nearest points is not
// blocked by any other entity of the layer. All unordered pairs are tested;
// the spatial index only prunes the blocking scan.
InnSets compute_inn_sets(const MapLayer& layer);

// INN similarity: each aligned pair (x in inn_a, y in inn_b) counts both of
// its members, so the score is 2m / (|inn_a| + |inn_b|) where m is the
// number of such pairs. Two empty sets score 0.
double inn_jaccard(const std::set<std::string>& inn_a, const std::set<std::string>& inn_b,
                   const AlignmentResult& aligned);

// The `quantile` quantile (linear interpolation) of EDNP distances over all
// cross-layer same-kind entity pairs. When the quantile degenerates into
// the zero mass of intersecting pairs it is re-taken over the separated
// pairs, and the result is floored at eps * 1e3 and at a thousandth of the
// median entity diameter. Throws ValidationError when no pair exists.
double broad_buffer_distance(const MapLayer& a, const MapLayer& b, double quantile = 0.05);

struct WithinCheck {
  bool holds = false;
  double overlap_ratio = 0.0;
};

// Approximately-within over broad boundaries: buffer both geometries by
// params.buffer_distance (must be resolved, i.e. positive) and compare the
// intersection area against the smaller buffered area.
WithinCheck approximately_within(const Entity& a, const Entity& b, const ApproxParams& params);

// Same relation on already-buffered boundaries; used by callers that cache
// the buffered polygons.
WithinCheck within_from_buffered(const Geometry& buf_a, const Geometry& buf_b,
                                 double ratio_threshold);

}  // namespace mapalign::topo
