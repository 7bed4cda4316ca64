#pragma once

#include <map>
#include <string>

#include "mapalign/types.hpp"

namespace mapalign::eval {

struct Metrics {
  std::size_t correct = 0;
  std::size_t identified = 0;
  std::size_t truth_total = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  // Zero-denominator cases score 0 and clear the corresponding flag.
  bool precision_defined = false;
  bool recall_defined = false;
};

Metrics compute_metrics(std::size_t correct, std::size_t identified, std::size_t truth_total);

struct EvaluationReport {
  Metrics overall;
  // Keyed by geometry kind name; present when the layers were supplied.
  std::map<std::string, Metrics> by_kind;

  std::string to_json() const;  // fixed key names, deterministic
};

// Exact pair matching of the result against the ground truth.
EvaluationReport evaluate(const AlignmentResult& result, const GroundTruth& truth);

// Same, plus the per-geometry-kind breakdown resolved through the layers.
EvaluationReport evaluate(const AlignmentResult& result, const GroundTruth& truth,
                          const MapLayer& map_a, const MapLayer& map_b);

}  // namespace mapalign::eval
