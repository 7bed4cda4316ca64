// mapalign - align vector geographic entities extracted from two maps.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mapalign/classify.hpp"
#include "mapalign/eval.hpp"
#include "mapalign/io.hpp"
#include "mapalign/synth.hpp"
#include "mapalign/types.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mapalign;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct LayerArgs {
  std::string path;
  std::string map_id;  // empty = file stem
  int year = 1;
  bool georeferenced = false;
};

void add_layer_options(CLI::App& cmd, const std::string& side, LayerArgs& args,
                       bool with_georef = true) {
  cmd.add_option("--map-" + side, args.path, "GeoJSON FeatureCollection for map " + side)
      ->required();
  cmd.add_option("--map-id-" + side, args.map_id,
                 "Map identifier (default: input file stem)");
  cmd.add_option("--year-" + side, args.year, "Map year")->check(CLI::PositiveNumber);
  if (with_georef) {
    cmd.add_flag("--georef-" + side, args.georeferenced,
                 "Treat map " + side + " as properly georeferenced");
  }
}

MapLayer load_layer_args(const LayerArgs& args) {
  const fs::path p = args.path;
  const std::string id = args.map_id.empty() ? p.stem().string() : args.map_id;
  return io::load_layer(p, id, args.year, args.georeferenced);
}

// Configuration file mirrors WorkflowConfig field names; CLI flags override.
classify::WorkflowConfig load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  classify::WorkflowConfig config;
  for (const auto& [key, value] : j.items()) {
    if (key == "text_method") {
      config.text_method = textalign::text_method_from_string(value.get<std::string>());
    } else if (key == "metric") {
      config.metric = geom::metric_from_string(value.get<std::string>());
    } else if (key == "classifier") {
      config.classifier = classify::classifier_from_string(value.get<std::string>());
    } else if (key == "angle_limit") {
      config.angle_limit_deg = value.get<double>();
    } else if (key == "noncore_terms_file") {
      config.noncore_terms = textalign::load_noncore_terms(value.get<std::string>());
    } else if (key == "random_seed") {
      config.random_seed = value.get<std::uint64_t>();
    } else if (key == "approx") {
      for (const auto& [akey, avalue] : value.items()) {
        if (akey == "buffer_distance") {
          config.approx.buffer_distance = avalue.get<double>();
        } else if (akey == "within_ratio_threshold") {
          config.approx.within_ratio_threshold = avalue.get<double>();
        } else if (akey == "quantile") {
          config.approx.quantile = avalue.get<double>();
        } else {
          throw ParseError(path.string() + ": unknown approx key \"" + akey + "\"");
        }
      }
    } else {
      throw ParseError(path.string() + ": unknown config key \"" + key + "\"");
    }
  }
  return config;
}

void print_metrics_row(const std::string& label, const eval::Metrics& m) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-10s %9.4f %9.4f %9.4f   (%zu/%zu identified, %zu truth)",
                label.c_str(), m.precision, m.recall, m.f_score, m.correct, m.identified,
                m.truth_total);
  std::cout << buf << "\n";
}

int cmd_align(const LayerArgs& la, const LayerArgs& lb, const std::string& config_path,
              const classify::WorkflowConfig& overrides, const std::vector<bool>& overridden,
              const std::string& noncore_file, const std::string& out_path,
              std::string trace_path) {
  classify::WorkflowConfig config;
  if (!config_path.empty()) config = load_config_file(config_path);
  // Flag overrides, in option order: text-method, metric, classifier,
  // angle-limit, buffer-distance, within-ratio, quantile.
  if (overridden[0]) config.text_method = overrides.text_method;
  if (overridden[1]) config.metric = overrides.metric;
  if (overridden[2]) config.classifier = overrides.classifier;
  if (overridden[3]) config.angle_limit_deg = overrides.angle_limit_deg;
  if (overridden[4]) config.approx.buffer_distance = overrides.approx.buffer_distance;
  if (overridden[5]) {
    config.approx.within_ratio_threshold = overrides.approx.within_ratio_threshold;
  }
  if (overridden[6]) config.approx.quantile = overrides.approx.quantile;
  if (!noncore_file.empty()) config.noncore_terms = textalign::load_noncore_terms(noncore_file);

  const MapLayer a = load_layer_args(la);
  const MapLayer b = load_layer_args(lb);
  const classify::WorkflowOutput out = classify::run_workflow(a, b, config);
  io::write_alignment(out.result, out_path);
  if (trace_path.empty()) {
    trace_path = fs::path(out_path).replace_extension().string() + ".trace.json";
  }
  std::ofstream trace(trace_path, std::ios::binary);
  if (!trace) throw IoError("cannot write " + trace_path);
  trace << out.trace.to_json();
  std::cout << "branch: " << out.trace.branch << "\n"
            << "pairs: " << out.result.size() << "\n"
            << "wrote " << out_path << " and " << trace_path << "\n";
  return kExitOk;
}

int cmd_eval(const std::string& pairs_path, const std::string& truth_path,
             const std::string& out_path, const std::optional<LayerArgs>& la,
             const std::optional<LayerArgs>& lb) {
  const AlignmentResult result = io::read_alignment(pairs_path);
  const GroundTruth truth = io::load_ground_truth(truth_path);
  eval::EvaluationReport report;
  if (la && lb) {
    report = eval::evaluate(result, truth, load_layer_args(*la), load_layer_args(*lb));
  } else {
    report = eval::evaluate(result, truth);
  }
  std::cout << "           precision    recall   f_score\n";
  print_metrics_row("overall", report.overall);
  for (const auto& [kind, m] : report.by_kind) print_metrics_row(kind, m);
  if (!report.overall.precision_defined) std::cout << "note: no identified pairs\n";
  if (!report.overall.recall_defined) std::cout << "note: empty ground truth\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + out_path);
    out << report.to_json();
  }
  return kExitOk;
}

int cmd_synth(const synth::SynthParams& params, const std::string& out_dir) {
  const synth::SynthDataset data = synth::generate_synthetic(params);
  fs::create_directories(out_dir);
  const fs::path dir = out_dir;
  io::write_layer_geojson(data.map_a, dir / "map_a.geojson");
  io::write_layer_geojson(data.map_b, dir / "map_b.geojson");
  io::write_ground_truth(data.truth, dir / "truth.csv");
  std::cout << "wrote " << (dir / "map_a.geojson").string() << " ("
            << data.map_a.size() << " entities), " << (dir / "map_b.geojson").string()
            << " (" << data.map_b.size() << " entities), "
            << (dir / "truth.csv").string() << " (" << data.truth.size() << " pairs)\n";
  return kExitOk;
}

int cmd_export_kg(const std::string& pairs_path, const LayerArgs& la, const LayerArgs& lb,
                  const std::string& out_path) {
  const AlignmentResult result = io::read_alignment(pairs_path);
  const MapLayer a = load_layer_args(la);
  const MapLayer b = load_layer_args(lb);
  io::export_sameas_triples(result, a, b, out_path);
  std::cout << "wrote " << result.size() << " sameAs triples to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "mapalign: one-to-one alignment of vector entities from two maps\n"
      "Exit codes: 0 success, 2 input error, 3 internal invariant violation.\n"
      "MAPALIGN_THREADS caps internal parallelism (0 or unset = auto)."};
  app.require_subcommand(1);

  // align
  auto* align = app.add_subcommand("align", "Run the alignment workflow on two maps");
  LayerArgs align_a, align_b;
  add_layer_options(*align, "a", align_a);
  add_layer_options(*align, "b", align_b);
  std::string config_path, align_out = "pairs.csv", trace_out;
  align->add_option("--config", config_path, "JSON config mirroring the workflow settings")
      ->check(CLI::ExistingFile);
  align->add_option("--out", align_out, "Alignment CSV output path");
  align->add_option("--trace", trace_out,
                    "Workflow trace JSON (default: alongside --out)");
  classify::WorkflowConfig overrides;
  std::vector<bool> overridden(7, false);
  std::string opt_text, opt_metric, opt_classifier;
  align->add_option_function<std::string>(
      "--text-method",
      [&](const std::string& v) {
        overrides.text_method = textalign::text_method_from_string(v);
        overridden[0] = true;
      },
      "Label matching method (str, str_caseless, str_caseless_punc, "
      "str_caseless_punc_noncore, str_caseless_punc_noncore_domain)");
  align->add_option_function<std::string>(
      "--metric",
      [&](const std::string& v) {
        overrides.metric = geom::metric_from_string(v);
        overridden[1] = true;
      },
      "Distance metric (EDC, EDV, HDV, EDNP)");
  align->add_option_function<std::string>(
      "--classifier",
      [&](const std::string& v) {
        overrides.classifier = classify::classifier_from_string(v);
        overridden[2] = true;
      },
      "Classifier (topo, dist, approx, dist_topo, dist_approx, approx_topo, "
      "dist_topo_approx)");
  align->add_option_function<double>(
      "--angle-limit",
      [&](double v) {
        overrides.angle_limit_deg = v;
        overridden[3] = true;
      },
      "Maximum polyline angle in degrees");
  align->add_option_function<double>(
      "--buffer-distance",
      [&](double v) {
        overrides.approx.buffer_distance = v;
        overridden[4] = true;
      },
      "Broad-boundary buffer distance (0 = derive from the quantile)");
  align->add_option_function<double>(
      "--within-ratio",
      [&](double v) {
        overrides.approx.within_ratio_threshold = v;
        overridden[5] = true;
      },
      "approximately-within overlap threshold");
  align->add_option_function<double>(
      "--quantile",
      [&](double v) {
        overrides.approx.quantile = v;
        overridden[6] = true;
      },
      "Distance quantile for the buffer distance");
  std::string noncore_file;
  align->add_option("--noncore-terms", noncore_file,
                    "File with one lowercase non-core term per line")
      ->check(CLI::ExistingFile);

  // eval
  auto* evalc = app.add_subcommand("eval", "Score an alignment against ground truth");
  std::string eval_pairs, eval_truth, eval_out;
  evalc->add_option("--pairs", eval_pairs, "Alignment CSV")->required()
      ->check(CLI::ExistingFile);
  evalc->add_option("--truth", eval_truth, "Ground-truth CSV")->required()
      ->check(CLI::ExistingFile);
  evalc->add_option("--out", eval_out, "JSON report output path");
  LayerArgs eval_a, eval_b;
  auto* eval_map_a = evalc->add_option("--map-a", eval_a.path,
                                       "Map A GeoJSON (enables per-kind breakdown)");
  auto* eval_map_b = evalc->add_option("--map-b", eval_b.path, "Map B GeoJSON");
  eval_map_a->needs(eval_map_b);
  eval_map_b->needs(eval_map_a);

  // synth
  auto* synthc = app.add_subcommand("synth", "Generate a synthetic map pair with truth");
  synth::SynthParams params;
  std::string synth_dir = "synth_out";
  synthc->add_option("--seed", params.rng_seed, "RNG seed")->required();
  synthc->add_option("--out-dir", synth_dir, "Output directory");
  synthc->add_option("--rows", params.grid_rows, "Block rows");
  synthc->add_option("--cols", params.grid_cols, "Block columns");
  synthc->add_option("--points", params.point_count, "Point features");
  synthc->add_option("--rotation", params.rotation_deg, "Map B rotation (degrees)");
  synthc->add_option("--scale", params.scale, "Map B scale factor");
  synthc->add_option("--tx", params.translate_x, "Map B x translation");
  synthc->add_option("--ty", params.translate_y, "Map B y translation");
  synthc->add_option("--jitter", params.vertex_jitter_sigma, "Vertex jitter sigma (map B)");
  synthc->add_option("--label-keep", params.label_keep_fraction,
                     "Fraction of labels kept per map");
  synthc->add_option("--drop", params.entity_drop_fraction,
                     "Fraction of entities dropped from map B");

  // export-kg
  auto* exportc = app.add_subcommand("export-kg", "Export sameAs triples as N-Triples");
  std::string export_pairs, export_out = "alignment.nt";
  exportc->add_option("--pairs", export_pairs, "Alignment CSV")->required()
      ->check(CLI::ExistingFile);
  LayerArgs export_a, export_b;
  add_layer_options(*exportc, "a", export_a, /*with_georef=*/false);
  add_layer_options(*exportc, "b", export_b, /*with_georef=*/false);
  exportc->add_option("--out", export_out, "N-Triples output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (align->parsed()) {
      return cmd_align(align_a, align_b, config_path, overrides, overridden, noncore_file,
                       align_out, trace_out);
    }
    if (evalc->parsed()) {
      std::optional<LayerArgs> la, lb;
      if (!eval_a.path.empty()) {
        la = eval_a;
        lb = eval_b;
      }
      return cmd_eval(eval_pairs, eval_truth, eval_out, la, lb);
    }
    if (synthc->parsed()) return cmd_synth(params, synth_dir);
    if (exportc->parsed()) return cmd_export_kg(export_pairs, export_a, export_b, export_out);
  } catch (const OneToOneViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
