#include "mapalign/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mapalign/spatial_index.hpp"

namespace mapalign::classify {
namespace {

constexpr double kTieRel = 1e-9;  // relative tolerance for "same distance"

bool tied_with_min(double d, double d_min) { return d <= d_min + kTieRel * d_min; }

bool coregistered(const MapLayer& a, const MapLayer& b, bool assume) {
  return assume || (a.georeferenced() && b.georeferenced());
}

// Entities whose geometry meets the bounding-box intersection of the two
// layers, as indices. Empty layers yield empty candidate sets.
std::vector<std::size_t> overlap_members(const MapLayer& layer, const geom::Rect& region) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < layer.size(); ++i) {
    if (geom::geometry_intersects_rect(layer.entities()[i].geometry, region)) out.push_back(i);
  }
  return out;
}

// Lazily buffered broad boundaries of one layer.
class BufferCache {
public:
  BufferCache(const MapLayer& layer, double dist) : layer_(&layer), dist_(dist) {
    cache_.resize(layer.size());
  }

  double buffer_distance() const { return dist_; }

  const Geometry& get(std::size_t idx) {
    auto& slot = cache_[idx];
    if (!slot) slot = geom::buffer(layer_->entities()[idx].geometry, dist_);
    return *slot;
  }

  // Ratio of the approximately-within relation; 0 without clipping when the
  // buffered boxes cannot meet.
  double ratio(std::size_t ia, BufferCache& other, std::size_t ib) {
    const geom::Rect box_a =
        geom::bounding_box(layer_->entities()[ia].geometry).inflated(dist_);
    const geom::Rect box_b =
        geom::bounding_box(other.layer_->entities()[ib].geometry).inflated(other.dist_);
    if (!box_a.intersects(box_b)) return 0.0;
    return topo::within_from_buffered(get(ia), other.get(ib), 0.0).overlap_ratio;
  }

private:
  const MapLayer* layer_;
  double dist_;
  std::vector<std::optional<Geometry>> cache_;
};

topo::ApproxParams resolve_approx(const topo::ApproxParams& params, const MapLayer& a,
                                  const MapLayer& b) {
  topo::ApproxParams out = params;
  topo::validate(out);
  if (out.buffer_distance <= 0.0) {
    out.buffer_distance = topo::broad_buffer_distance(a, b, out.quantile);
  }
  return out;
}

bool layers_have_same_kind_pair(const MapLayer& a, const MapLayer& b) {
  bool kinds_a[3] = {false, false, false};
  for (const Entity& e : a.entities()) kinds_a[static_cast<int>(e.geometry.kind)] = true;
  for (const Entity& e : b.entities()) {
    if (kinds_a[static_cast<int>(e.geometry.kind)]) return true;
  }
  return false;
}

// Per-A-entity minimum-distance candidates, ties kept.
struct DistProposal {
  std::size_t ia = 0;
  double dist = 0.0;
  std::vector<std::size_t> tied_ib;              // ascending index order
  std::vector<std::optional<double>> tied_angle; // parallel to tied_ib
};

std::vector<DistProposal> dist_proposals(const MapLayer& a, const MapLayer& b,
                                         geom::DistanceMetric metric, double angle_limit_deg) {
  const geom::Rect region = geom::intersect(geom::bounding_box(a), geom::bounding_box(b));
  std::vector<DistProposal> out;
  if (region.min_x > region.max_x || region.min_y > region.max_y) return out;
  const std::vector<std::size_t> in_a = overlap_members(a, region);
  const std::vector<std::size_t> in_b = overlap_members(b, region);
  for (const std::size_t ia : in_a) {
    const Entity& ea = a.entities()[ia];
    struct Hit {
      std::size_t ib;
      double dist;
      std::optional<double> angle;
    };
    std::vector<Hit> all;
    for (const std::size_t ib : in_b) {
      const Entity& eb = b.entities()[ib];
      if (eb.geometry.kind != ea.geometry.kind) continue;
      std::optional<double> angle;
      if (ea.geometry.kind == GeometryKind::polyline) {
        angle = geom::principal_angle(ea.geometry, eb.geometry);
        if (*angle > angle_limit_deg) continue;
      }
      all.push_back({ib, geom::distance(metric, ea.geometry, eb.geometry), angle});
    }
    if (all.empty()) continue;
    double d_min = all.front().dist;
    for (const Hit& h : all) d_min = std::min(d_min, h.dist);
    DistProposal p;
    p.ia = ia;
    p.dist = d_min;
    for (const Hit& h : all) {
      if (tied_with_min(h.dist, d_min)) {
        p.tied_ib.push_back(h.ib);
        p.tied_angle.push_back(h.angle);
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

struct Candidate {
  std::size_t ia, ib;
  double score;  // distance (ascending) or overlap ratio (descending)
  std::optional<double> angle;
  std::optional<double> ratio;
};

AlignmentResult greedy_one_to_one(const MapLayer& a, const MapLayer& b,
                                  std::vector<Candidate> candidates, bool ascending,
                                  Provenance provenance, geom::DistanceMetric metric,
                                  bool score_is_distance) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const Candidate& x, const Candidate& y) {
                     if (x.score != y.score) {
                       return ascending ? x.score < y.score : x.score > y.score;
                     }
                     const auto& xa = a.entities()[x.ia].id;
                     const auto& ya = a.entities()[y.ia].id;
                     if (xa != ya) return xa < ya;
                     return b.entities()[x.ib].id < b.entities()[y.ib].id;
                   });
  std::unordered_set<std::size_t> used_a, used_b;
  std::vector<AlignmentPair> pairs;
  for (const Candidate& c : candidates) {
    if (used_a.count(c.ia) || used_b.count(c.ib)) continue;
    used_a.insert(c.ia);
    used_b.insert(c.ib);
    AlignmentPair p;
    p.id_a = a.entities()[c.ia].id;
    p.id_b = b.entities()[c.ib].id;
    p.provenance = provenance;
    if (score_is_distance) {
      p.scores.metric = std::string(geom::to_string(metric));
      p.scores.distance = c.score;
    }
    p.scores.angle = c.angle;
    p.scores.overlap_ratio = c.ratio;
    pairs.push_back(std::move(p));
  }
  return AlignmentResult::from_pairs(std::move(pairs));
}

enum class TieResolver { none, by_ratio };

AlignmentResult align_dist_impl(const MapLayer& a, const MapLayer& b,
                                geom::DistanceMetric metric, double angle_limit_deg,
                                bool keep_ties, TieResolver resolver, BufferCache* buf_a,
                                BufferCache* buf_b) {
  std::vector<Candidate> candidates;
  for (DistProposal& p : dist_proposals(a, b, metric, angle_limit_deg)) {
    if (p.tied_ib.size() > 1 && !keep_ties) continue;  // tied distance, dist used alone
    if (p.tied_ib.size() > 1 && resolver == TieResolver::by_ratio) {
      // The downstream approx stage picks the survivor among the ties.
      std::size_t best = 0;
      double best_ratio = -1.0;
      for (std::size_t k = 0; k < p.tied_ib.size(); ++k) {
        const double r = buf_a->ratio(p.ia, *buf_b, p.tied_ib[k]);
        if (r > best_ratio) {
          best_ratio = r;
          best = k;
        }
      }
      candidates.push_back({p.ia, p.tied_ib[best], p.dist, p.tied_angle[best], best_ratio});
      continue;
    }
    for (std::size_t k = 0; k < p.tied_ib.size(); ++k) {
      candidates.push_back({p.ia, p.tied_ib[k], p.dist, p.tied_angle[k], std::nullopt});
    }
  }
  return greedy_one_to_one(a, b, std::move(candidates), /*ascending=*/true, Provenance::dist,
                           metric, /*score_is_distance=*/true);
}

AlignmentResult align_approx_impl(const MapLayer& a, const MapLayer& b, BufferCache& buf_a,
                                  BufferCache& buf_b, double ratio_threshold) {
  std::vector<Candidate> candidates;
  for (std::size_t ia = 0; ia < a.size(); ++ia) {
    const Entity& ea = a.entities()[ia];
    double best_ratio = 0.0;
    std::optional<std::size_t> best_ib;
    for (std::size_t ib = 0; ib < b.size(); ++ib) {
      if (b.entities()[ib].geometry.kind != ea.geometry.kind) continue;
      const double r = buf_a.ratio(ia, buf_b, ib);
      if (r < ratio_threshold) continue;
      if (!best_ib || r > best_ratio ||
          (r == best_ratio && b.entities()[ib].id < b.entities()[*best_ib].id)) {
        best_ratio = r;
        best_ib = ib;
      }
    }
    if (best_ib) {
      candidates.push_back({ia, *best_ib, best_ratio, std::nullopt, best_ratio});
    }
  }
  return greedy_one_to_one(a, b, std::move(candidates), /*ascending=*/false,
                           Provenance::approx, geom::DistanceMetric::hdv,
                           /*score_is_distance=*/false);
}

AlignmentResult refine_approx_impl(const AlignmentResult& pairs, const MapLayer& a,
                                   const MapLayer& b, BufferCache& buf_a, BufferCache& buf_b,
                                   double ratio_threshold) {
  std::vector<AlignmentPair> kept;
  for (const AlignmentPair& p : pairs.pairs()) {
    const double r = buf_a.ratio(a.index_of(p.id_a), buf_b, b.index_of(p.id_b));
    if (r >= ratio_threshold) {
      AlignmentPair out = p;
      out.provenance = Provenance::refined;
      out.scores.overlap_ratio = r;
      kept.push_back(std::move(out));
    }
  }
  return AlignmentResult::from_pairs(std::move(kept));
}

}  // namespace

std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::topo: return "topo";
    case ClassifierKind::dist: return "dist";
    case ClassifierKind::approx: return "approx";
    case ClassifierKind::dist_topo: return "dist_topo";
    case ClassifierKind::dist_approx: return "dist_approx";
    case ClassifierKind::approx_topo: return "approx_topo";
    case ClassifierKind::dist_topo_approx: return "dist_topo_approx";
  }
  return "?";
}

ClassifierKind classifier_from_string(std::string_view name) {
  if (name == "topo") return ClassifierKind::topo;
  if (name == "dist") return ClassifierKind::dist;
  if (name == "approx") return ClassifierKind::approx;
  if (name == "dist_topo") return ClassifierKind::dist_topo;
  if (name == "dist_approx") return ClassifierKind::dist_approx;
  if (name == "approx_topo") return ClassifierKind::approx_topo;
  if (name == "dist_topo_approx") return ClassifierKind::dist_topo_approx;
  throw ParseError("unknown classifier: " + std::string(name));
}

void validate(const WorkflowConfig& config) {
  if (!(config.angle_limit_deg > 0.0 && config.angle_limit_deg <= 90.0)) {
    throw ValidationError("angle limit must lie in (0, 90] degrees");
  }
  topo::validate(config.approx);
}

AlignmentResult align_topo(const MapLayer& a, const MapLayer& b, const AlignmentResult& seed) {
  return align_topo(a, b, seed, topo::compute_inn_sets(a), topo::compute_inn_sets(b));
}

AlignmentResult align_topo(const MapLayer& a, const MapLayer& b, const AlignmentResult& seed,
                           const topo::InnSets& inns_a, const topo::InnSets& inns_b) {
  std::unordered_map<std::string, std::string> a2b, b2a;
  std::vector<AlignmentPair> pairs = seed.pairs();
  for (const AlignmentPair& p : pairs) {
    a2b.emplace(p.id_a, p.id_b);
    b2a.emplace(p.id_b, p.id_a);
  }
  // 2m == |inn_a| + |inn_b| with one-to-one m forces equal sizes and a
  // perfect matching between the sets.
  auto jaccard_is_one = [&](const std::set<std::string>& sa, const std::set<std::string>& sb) {
    if (sa.empty() || sa.size() != sb.size()) return false;
    for (const std::string& x : sa) {
      const auto it = a2b.find(x);
      if (it == a2b.end() || !sb.count(it->second)) return false;
    }
    return true;
  };
  while (true) {
    std::vector<std::pair<const Entity*, const Entity*>> found;
    std::unordered_map<std::string, int> count_a, count_b;
    for (const Entity& ea : a.entities()) {
      if (a2b.count(ea.id)) continue;
      const auto& sa = inns_a.of(ea.id);
      if (sa.empty()) continue;
      for (const Entity& eb : b.entities()) {
        if (eb.geometry.kind != ea.geometry.kind || b2a.count(eb.id)) continue;
        const auto& sb = inns_b.of(eb.id);
        if (sb.empty()) continue;
        if (jaccard_is_one(sa, sb)) {
          found.emplace_back(&ea, &eb);
          ++count_a[ea.id];
          ++count_b[eb.id];
        }
      }
    }
    std::size_t committed = 0;
    for (const auto& [ea, eb] : found) {
      if (count_a[ea->id] != 1 || count_b[eb->id] != 1) continue;  // ambiguous, defer
      AlignmentPair p;
      p.id_a = ea->id;
      p.id_b = eb->id;
      p.provenance = Provenance::topo;
      p.scores.inn_jaccard = 1.0;
      pairs.push_back(std::move(p));
      a2b.emplace(ea->id, eb->id);
      b2a.emplace(eb->id, ea->id);
      ++committed;
    }
    if (committed == 0) break;
  }
  return AlignmentResult::from_pairs(std::move(pairs));
}

AlignmentResult align_dist(const MapLayer& a, const MapLayer& b, geom::DistanceMetric metric,
                           double angle_limit_deg, bool keep_ties, bool assume_coregistered) {
  if (!coregistered(a, b, assume_coregistered)) {
    throw FramesNotAligned("align_dist requires co-registered layers");
  }
  return align_dist_impl(a, b, metric, angle_limit_deg, keep_ties, TieResolver::none, nullptr,
                         nullptr);
}

AlignmentResult align_approx(const MapLayer& a, const MapLayer& b,
                             const topo::ApproxParams& params, bool assume_coregistered) {
  if (!coregistered(a, b, assume_coregistered)) {
    throw FramesNotAligned("align_approx requires co-registered layers");
  }
  if (a.size() == 0 || b.size() == 0 || !layers_have_same_kind_pair(a, b)) {
    return {};
  }
  const topo::ApproxParams resolved = resolve_approx(params, a, b);
  BufferCache buf_a(a, resolved.buffer_distance), buf_b(b, resolved.buffer_distance);
  return align_approx_impl(a, b, buf_a, buf_b, resolved.within_ratio_threshold);
}

AlignmentResult refine_topo(const AlignmentResult& pairs, const topo::InnSets& inns_a,
                            const topo::InnSets& inns_b) {
  std::vector<AlignmentPair> kept;
  for (const AlignmentPair& p : pairs.pairs()) {
    const auto& sa = inns_a.of(p.id_a);
    const auto& sb = inns_b.of(p.id_b);
    bool supported = false;
    for (const std::string& x : sa) {
      const std::string* y = pairs.b_for_a(x);
      if (y && sb.count(*y)) {
        supported = true;
        break;
      }
    }
    if (supported) {
      AlignmentPair out = p;
      out.provenance = Provenance::refined;
      kept.push_back(std::move(out));
    }
  }
  return AlignmentResult::from_pairs(std::move(kept));
}

AlignmentResult refine_approx(const AlignmentResult& pairs, const MapLayer& a,
                              const MapLayer& b, const topo::ApproxParams& params) {
  if (pairs.empty()) return {};
  const topo::ApproxParams resolved = resolve_approx(params, a, b);
  BufferCache buf_a(a, resolved.buffer_distance), buf_b(b, resolved.buffer_distance);
  return refine_approx_impl(pairs, a, b, buf_a, buf_b, resolved.within_ratio_threshold);
}

AlignmentResult run_classifier(ClassifierKind kind, const MapLayer& a, const MapLayer& b,
                               const AlignmentResult& seed, const WorkflowConfig& config,
                               bool co_registered) {
  validate(config);
  if (kind == ClassifierKind::topo) return align_topo(a, b, seed);
  if (!co_registered) {
    throw FramesNotAligned("classifier " + std::string(to_string(kind)) +
                           " requires co-registered layers");
  }

  const bool needs_approx = kind == ClassifierKind::approx ||
                            kind == ClassifierKind::dist_approx ||
                            kind == ClassifierKind::approx_topo ||
                            kind == ClassifierKind::dist_topo_approx;

  std::optional<topo::ApproxParams> resolved;
  std::optional<BufferCache> buf_a, buf_b;
  if (needs_approx) {
    if (a.size() == 0 || b.size() == 0 || !layers_have_same_kind_pair(a, b)) {
      return {};  // no same-kind cross pairs, nothing any stage could align
    }
    resolved = resolve_approx(config.approx, a, b);
    buf_a.emplace(a, resolved->buffer_distance);
    buf_b.emplace(b, resolved->buffer_distance);
  }

  AlignmentResult result;
  switch (kind) {
    case ClassifierKind::dist:
      result = align_dist_impl(a, b, config.metric, config.angle_limit_deg,
                               /*keep_ties=*/false, TieResolver::none, nullptr, nullptr);
      break;
    case ClassifierKind::approx:
      result = align_approx_impl(a, b, *buf_a, *buf_b, resolved->within_ratio_threshold);
      break;
    case ClassifierKind::dist_topo: {
      result = align_dist_impl(a, b, config.metric, config.angle_limit_deg,
                               /*keep_ties=*/true, TieResolver::none, nullptr, nullptr);
      result = refine_topo(result, topo::compute_inn_sets(a), topo::compute_inn_sets(b));
      break;
    }
    case ClassifierKind::dist_approx: {
      result = align_dist_impl(a, b, config.metric, config.angle_limit_deg,
                               /*keep_ties=*/true, TieResolver::by_ratio, &*buf_a, &*buf_b);
      result = refine_approx_impl(result, a, b, *buf_a, *buf_b,
                                  resolved->within_ratio_threshold);
      break;
    }
    case ClassifierKind::approx_topo: {
      result = align_approx_impl(a, b, *buf_a, *buf_b, resolved->within_ratio_threshold);
      result = refine_topo(result, topo::compute_inn_sets(a), topo::compute_inn_sets(b));
      break;
    }
    case ClassifierKind::dist_topo_approx: {
      result = align_dist_impl(a, b, config.metric, config.angle_limit_deg,
                               /*keep_ties=*/true, TieResolver::by_ratio, &*buf_a, &*buf_b);
      result = refine_approx_impl(result, a, b, *buf_a, *buf_b,
                                  resolved->within_ratio_threshold);
      result = refine_topo(result, topo::compute_inn_sets(a), topo::compute_inn_sets(b));
      break;
    }
    case ClassifierKind::topo:
      break;  // handled above
  }
  return result;
}

namespace {

AlignmentResult merge_prefer_text(const AlignmentResult& seed, const AlignmentResult& classified) {
  std::vector<AlignmentPair> pairs = seed.pairs();
  for (const AlignmentPair& p : classified.pairs()) {
    if (seed.contains_a(p.id_a) || seed.contains_b(p.id_b)) continue;
    pairs.push_back(p);
  }
  return AlignmentResult::from_pairs(std::move(pairs));
}

}  // namespace

std::string WorkflowTrace::to_json() const {
  nlohmann::json j;
  j["branch"] = branch;
  j["text_method"] = text_method;
  j["classifier_requested"] = classifier_requested;
  j["classifier_used"] = classifier_used;
  j["metric"] = metric;
  j["seed_pairs"] = seed_pairs;
  j["control_points"] = {{"extracted", control_points_extracted},
                         {"accepted", control_points_accepted}};
  if (has_transform) {
    j["transform"] = {{"a", transform.a}, {"b", transform.b}, {"c", transform.c},
                      {"d", transform.d}, {"e", transform.e}, {"f", transform.f}};
  }
  if (buffer_distance > 0.0) j["buffer_distance"] = buffer_distance;
  j["result_pairs"] = result_pairs;
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

WorkflowOutput run_workflow(const MapLayer& a, const MapLayer& b,
                            const WorkflowConfig& config) {
  validate(config);
  WorkflowOutput out;
  WorkflowTrace& trace = out.trace;
  trace.text_method = std::string(textalign::to_string(config.text_method));
  trace.classifier_requested = std::string(to_string(config.classifier));
  trace.metric = std::string(geom::to_string(config.metric));

  const bool needs_approx = config.classifier == ClassifierKind::approx ||
                            config.classifier == ClassifierKind::dist_approx ||
                            config.classifier == ClassifierKind::approx_topo ||
                            config.classifier == ClassifierKind::dist_topo_approx;
  // When the buffer distance is derived, it must at least cover the
  // registration error left by rubber sheeting, or the approximately-within
  // test rejects correctly aligned entities. Two buffered disks at offset d
  // need a radius above roughly 3.2 d to keep 80% mutual overlap, hence the
  // factor 4 on the spread estimate. registration_scale is 0 for layers
  // that were georeferenced to begin with.
  auto classify_frame = [&](const MapLayer& frame_a, const AlignmentResult& seed,
                            double registration_scale) {
    WorkflowConfig cfg = config;
    if (needs_approx && cfg.approx.buffer_distance <= 0.0 && frame_a.size() > 0 &&
        b.size() > 0 && layers_have_same_kind_pair(frame_a, b)) {
      cfg.approx.buffer_distance =
          std::max(topo::broad_buffer_distance(frame_a, b, cfg.approx.quantile),
                   4.0 * registration_scale);
      trace.buffer_distance = cfg.approx.buffer_distance;
    }
    return run_classifier(config.classifier, frame_a, b, seed, cfg, /*co_registered=*/true);
  };

  AlignmentResult seed;
  AlignmentResult classified;
  if (a.georeferenced() && b.georeferenced()) {
    trace.branch = "georeferenced";
    trace.classifier_used = trace.classifier_requested;
    trace.notes.push_back("text alignment and rubber sheeting skipped: layers georeferenced");
    classified = classify_frame(a, seed, 0.0);
  } else {
    textalign::NormalizationOptions text_opts = textalign::options_for(config.text_method);
    text_opts.noncore_terms = config.noncore_terms;
    seed = textalign::align_by_labels(a, b, text_opts);
    trace.seed_pairs = seed.size();
    if (seed.empty()) trace.notes.push_back("empty text seed");
    const rubbersheet::RubberSheetOutcome rs = rubbersheet::rubber_sheet(a, b, seed);
    trace.control_points_extracted = rs.extracted_count;
    trace.control_points_accepted = rs.accepted_count;
    if (rs.ok) {
      trace.branch = "rubber_sheeted";
      trace.classifier_used = trace.classifier_requested;
      trace.has_transform = true;
      trace.transform = rs.transform;
      // Registration error that survives the fit, probed on the text-seeded
      // entities themselves. Control-point residuals understate it: a
      // six-parameter fit through a handful of points nearly interpolates
      // them while the rest of the layer drifts further.
      std::vector<double> residuals;
      for (const AlignmentPair& p : seed.pairs()) {
        residuals.push_back(geom::distance(geom::DistanceMetric::hdv,
                                           rs.transformed_a->at(p.id_a).geometry,
                                           b.at(p.id_b).geometry));
      }
      double mean = 0.0;
      for (const double r : residuals) mean += r;
      mean = residuals.empty() ? 0.0 : mean / static_cast<double>(residuals.size());
      double var = 0.0;
      for (const double r : residuals) var += (r - mean) * (r - mean);
      const double spread =
          mean + 2.0 * std::sqrt(residuals.empty()
                                     ? 0.0
                                     : var / static_cast<double>(residuals.size()));
      classified = classify_frame(*rs.transformed_a, seed, spread);
    } else {
      trace.branch = "topo_fallback";
      trace.classifier_used = "topo";
      trace.notes.push_back("rubber sheeting failed: " +
                            std::string(rubbersheet::to_string(rs.failure)) +
                            "; falling back to the topo classifier");
      classified = run_classifier(ClassifierKind::topo, a, b, seed, config,
                                  /*co_registered=*/false);
    }
  }
  out.result = merge_prefer_text(seed, classified);
  trace.result_pairs = out.result.size();
  return out;
}

}  // namespace mapalign::classify
