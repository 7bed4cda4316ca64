#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mapalign/geometry.hpp"
#include "mapalign/rubbersheet.hpp"
#include "mapalign/textalign.hpp"
#include "mapalign/topology.hpp"
#include "mapalign/types.hpp"

namespace mapalign::classify {

enum class ClassifierKind { topo, dist, approx, dist_topo, dist_approx, approx_topo,
                            dist_topo_approx };

std::string_view to_string(ClassifierKind k);
ClassifierKind classifier_from_string(std::string_view name);

struct WorkflowConfig {
  textalign::TextMethod text_method = textalign::TextMethod::str_caseless_punc;
  geom::DistanceMetric metric = geom::DistanceMetric::hdv;
  ClassifierKind classifier = ClassifierKind::dist_approx;
  double angle_limit_deg = 45.0;
  topo::ApproxParams approx;
  std::vector<std::string> noncore_terms;  // empty = built-in default list
  std::uint64_t random_seed = 0;  // reserved; the default path draws nothing
};

void validate(const WorkflowConfig& config);

// Fixpoint alignment on INN similarity: each round commits the unaligned
// same-kind cross pairs whose INN Jaccard is exactly 1, deferring any entity
// proposed more than once in the round, until a round commits nothing.
// Output contains the seed; new pairs carry provenance topo.
AlignmentResult align_topo(const MapLayer& a, const MapLayer& b, const AlignmentResult& seed);
AlignmentResult align_topo(const MapLayer& a, const MapLayer& b, const AlignmentResult& seed,
                           const topo::InnSets& inns_a, const topo::InnSets& inns_b);

// Nearest-candidate alignment by one distance metric inside the overlap
// region. Polyline pairs must meet the angle limit. An A entity with an
// exactly tied minimum is dropped when keep_ties is false, or keeps its
// (id-ordered) first tied candidate when true. One-to-one via greedy
// selection by ascending distance. Throws FramesNotAligned unless both
// layers are georeferenced or assume_coregistered is set.
AlignmentResult align_dist(const MapLayer& a, const MapLayer& b, geom::DistanceMetric metric,
                           double angle_limit_deg, bool keep_ties,
                           bool assume_coregistered = false);

// Largest-overlap alignment on the approximately-within relation. params
// with buffer_distance 0 derive it from the distance quantile.
AlignmentResult align_approx(const MapLayer& a, const MapLayer& b,
                             const topo::ApproxParams& params,
                             bool assume_coregistered = false);

// Keeps the pairs with at least one aligned pair among their INNs, checked
// against the full input set. Survivors are retagged refined.
AlignmentResult refine_topo(const AlignmentResult& pairs, const topo::InnSets& inns_a,
                            const topo::InnSets& inns_b);

// Keeps the pairs whose entities satisfy approximately-within.
AlignmentResult refine_approx(const AlignmentResult& pairs, const MapLayer& a,
                              const MapLayer& b, const topo::ApproxParams& params);

// One of the seven classification strategies. seed feeds only the topo
// kind; coordinate-based kinds require co_registered.
AlignmentResult run_classifier(ClassifierKind kind, const MapLayer& a, const MapLayer& b,
                               const AlignmentResult& seed, const WorkflowConfig& config,
                               bool co_registered);

struct WorkflowTrace {
  std::string branch;  // "georeferenced" | "rubber_sheeted" | "topo_fallback"
  std::string text_method;
  std::string classifier_requested;
  std::string classifier_used;
  std::string metric;
  std::size_t seed_pairs = 0;
  std::size_t control_points_extracted = 0;
  std::size_t control_points_accepted = 0;
  bool has_transform = false;
  rubbersheet::AffineTransform transform;
  double buffer_distance = 0.0;  // resolved value when an approx stage ran
  std::size_t result_pairs = 0;
  std::vector<std::string> notes;

  std::string to_json() const;  // deterministic, keys sorted
};

struct WorkflowOutput {
  AlignmentResult result;
  WorkflowTrace trace;
};

// The end-to-end workflow: georeferenced layers go straight to the
// classifier; otherwise a text seed drives rubber sheeting, falling back to
// the topo classifier when control points are insufficient. The final
// result is the text seed united with the classifier output, text pairs
// winning conflicts.
WorkflowOutput run_workflow(const MapLayer& a, const MapLayer& b, const WorkflowConfig& config);

}  // namespace mapalign::classify
