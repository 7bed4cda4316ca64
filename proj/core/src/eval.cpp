#include "mapalign/eval.hpp"

#include <nlohmann/json.hpp>

namespace mapalign::eval {
namespace {

nlohmann::json metrics_json(const Metrics& m) {
  return {
      {"correct", m.correct},
      {"identified", m.identified},
      {"truth_total", m.truth_total},
      {"precision", m.precision},
      {"recall", m.recall},
      {"f_score", m.f_score},
      {"precision_defined", m.precision_defined},
      {"recall_defined", m.recall_defined},
  };
}

}  // namespace

Metrics compute_metrics(std::size_t correct, std::size_t identified, std::size_t truth_total) {
  Metrics m;
  m.correct = correct;
  m.identified = identified;
  m.truth_total = truth_total;
  m.precision_defined = identified > 0;
  m.recall_defined = truth_total > 0;
  if (m.precision_defined) {
    m.precision = static_cast<double>(correct) / static_cast<double>(identified);
  }
  if (m.recall_defined) {
    m.recall = static_cast<double>(correct) / static_cast<double>(truth_total);
  }
  if (m.precision + m.recall > 0.0) {
    m.f_score = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

std::string EvaluationReport::to_json() const {
  nlohmann::json j = metrics_json(overall);
  if (!by_kind.empty()) {
    nlohmann::json kinds;
    for (const auto& [kind, m] : by_kind) kinds[kind] = metrics_json(m);
    j["by_kind"] = std::move(kinds);
  }
  return j.dump(2) + "\n";
}

EvaluationReport evaluate(const AlignmentResult& result, const GroundTruth& truth) {
  std::size_t correct = 0;
  for (const AlignmentPair& p : result.pairs()) {
    if (truth.contains(p.id_a, p.id_b)) ++correct;
  }
  EvaluationReport report;
  report.overall = compute_metrics(correct, result.size(), truth.size());
  return report;
}

EvaluationReport evaluate(const AlignmentResult& result, const GroundTruth& truth,
                          const MapLayer& map_a, const MapLayer& map_b) {
  EvaluationReport report = evaluate(result, truth);
  struct Counts {
    std::size_t correct = 0, identified = 0, truth_total = 0;
  };
  std::map<std::string, Counts> counts;
  auto kind_of = [&](const std::string& id_a) -> std::string {
    const Entity* e = map_a.find(id_a);
    return e ? std::string(to_string(e->geometry.kind)) : std::string("unknown");
  };
  (void)map_b;
  for (const AlignmentPair& p : result.pairs()) {
    Counts& c = counts[kind_of(p.id_a)];
    ++c.identified;
    if (truth.contains(p.id_a, p.id_b)) ++c.correct;
  }
  for (const auto& [id_a, id_b] : truth.pairs()) {
    ++counts[kind_of(id_a)].truth_total;
  }
  for (const auto& [kind, c] : counts) {
    report.by_kind[kind] = compute_metrics(c.correct, c.identified, c.truth_total);
  }
  return report;
}

}  // namespace mapalign::eval
