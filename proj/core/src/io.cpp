#include "mapalign/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

namespace mapalign::io {
namespace {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return j;
}

Point parse_position(const json& pos, const std::filesystem::path& path) {
  if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
    throw ParseError(path.string() + ": coordinate is not a [x, y] pair");
  }
  return {pos[0].get<double>(), pos[1].get<double>()};
}

std::vector<Point> parse_positions(const json& arr, const std::filesystem::path& path) {
  std::vector<Point> out;
  out.reserve(arr.size());
  for (const json& pos : arr) out.push_back(parse_position(pos, path));
  return out;
}

Geometry parse_geometry(const json& g, const std::filesystem::path& path) {
  if (!g.is_object() || !g.contains("type") || !g.contains("coordinates")) {
    throw ParseError(path.string() + ": feature geometry missing type or coordinates");
  }
  const std::string type = g["type"].get<std::string>();
  const json& coords = g["coordinates"];
  if (type == "Point") {
    const Point p = parse_position(coords, path);
    return make_point(p.x, p.y);
  }
  if (type == "LineString") {
    return make_polyline(parse_positions(coords, path));
  }
  if (type == "Polygon") {
    if (!coords.is_array() || coords.empty()) {
      throw ParseError(path.string() + ": polygon has no rings");
    }
    if (coords.size() > 1) {
      throw ValidationError(path.string() + ": polygons with holes are not supported");
    }
    std::vector<Point> ring = parse_positions(coords[0], path);
    // GeoJSON rings repeat the first position; storage keeps the ring open.
    if (ring.size() >= 2 && ring.front() == ring.back()) ring.pop_back();
    return make_polygon(std::move(ring));
  }
  throw ValidationError(path.string() + ": unsupported geometry type \"" + type + "\"");
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

MapLayer load_layer(const std::filesystem::path& path, std::string map_id, int year,
                    bool georeferenced) {
  const json j = read_json_file(path);
  if (!j.is_object() || j.value("type", "") != "FeatureCollection" || !j.contains("features") ||
      !j["features"].is_array()) {
    throw ParseError(path.string() + ": not a GeoJSON FeatureCollection");
  }
  std::vector<Entity> entities;
  entities.reserve(j["features"].size());
  for (const json& f : j["features"]) {
    if (!f.is_object() || f.value("type", "") != "Feature" || !f.contains("geometry")) {
      throw ParseError(path.string() + ": feature entry is not a GeoJSON Feature");
    }
    Entity e;
    e.geometry = parse_geometry(f["geometry"], path);
    const json props = f.value("properties", json::object());
    if (!props.contains("id") || !props["id"].is_string()) {
      throw ParseError(path.string() + ": feature is missing string property \"id\"");
    }
    e.id = props["id"].get<std::string>();
    if (props.contains("name") && !props["name"].is_null()) {
      if (!props["name"].is_string()) {
        throw ParseError(path.string() + ": feature \"" + e.id + "\" has a non-string name");
      }
      e.name = props["name"].get<std::string>();
    }
    entities.push_back(std::move(e));
  }
  return MapLayer(std::move(map_id), year, georeferenced, std::move(entities));
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  const auto header = split_csv_row(strip_cr(line));
  if (header.size() < 2 || header[0] != "id_a" || header[1] != "id_b") {
    throw ParseError(path.string() + ": expected header id_a,id_b");
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_row(line);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(path.string() + ": row " + std::to_string(row) + " needs id_a and id_b");
    }
    pairs.emplace_back(fields[0], fields[1]);
  }
  return GroundTruth::from_pairs(std::move(pairs));
}

void write_alignment(const AlignmentResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "id_a,id_b,provenance,metric,score\n";
  for (const AlignmentPair& p : result.pairs()) {
    const auto [metric, score] = primary_score(p);
    out << csv_field(p.id_a) << ',' << csv_field(p.id_b) << ',' << to_string(p.provenance)
        << ',' << metric << ',' << (score ? format_double(*score) : "") << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

AlignmentResult read_alignment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  if (strip_cr(line) != "id_a,id_b,provenance,metric,score") {
    throw ParseError(path.string() + ": expected header id_a,id_b,provenance,metric,score");
  }
  std::vector<AlignmentPair> pairs;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_row(line);
    if (fields.size() != 5 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(path.string() + ": malformed row " + std::to_string(row));
    }
    AlignmentPair p;
    p.id_a = fields[0];
    p.id_b = fields[1];
    p.provenance = provenance_from_string(fields[2]);
    if (!fields[4].empty()) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), v);
      if (ec != std::errc() || ptr != fields[4].data() + fields[4].size()) {
        throw ParseError(path.string() + ": bad score on row " + std::to_string(row));
      }
      if (fields[3] == "overlap_ratio") {
        p.scores.overlap_ratio = v;
      } else if (fields[3] == "inn_jaccard") {
        p.scores.inn_jaccard = v;
      } else {
        p.scores.metric = fields[3];
        p.scores.distance = v;
      }
    }
    pairs.push_back(std::move(p));
  }
  try {
    return AlignmentResult::from_pairs(std::move(pairs));
  } catch (const OneToOneViolation& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string percent_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (const unsigned char c : s) {
    const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                            (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' ||
                            c == '~';
    if (unreserved) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

void export_sameas_triples(const AlignmentResult& result, const MapLayer& map_a,
                           const MapLayer& map_b, const std::filesystem::path& path) {
  for (const AlignmentPair& p : result.pairs()) {
    map_a.at(p.id_a);  // every pair must resolve in its layer
    map_b.at(p.id_b);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const std::string prefix_a = "<urn:map:" + percent_encode(map_a.map_id()) + ":";
  const std::string prefix_b = "<urn:map:" + percent_encode(map_b.map_id()) + ":";
  for (const AlignmentPair& p : result.pairs()) {
    out << prefix_a << percent_encode(p.id_a) << "> "
        << "<http://www.w3.org/2002/07/owl#sameAs> " << prefix_b << percent_encode(p.id_b)
        << "> .\n";
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void write_layer_geojson(const MapLayer& layer, const std::filesystem::path& path) {
  json features = json::array();
  for (const Entity& e : layer.entities()) {
    json geometry;
    auto coord = [](const Point& p) { return json::array({p.x, p.y}); };
    switch (e.geometry.kind) {
      case GeometryKind::point:
        geometry = {{"type", "Point"}, {"coordinates", coord(e.geometry.vertices[0])}};
        break;
      case GeometryKind::polyline: {
        json cs = json::array();
        for (const Point& p : e.geometry.vertices) cs.push_back(coord(p));
        geometry = {{"type", "LineString"}, {"coordinates", std::move(cs)}};
        break;
      }
      case GeometryKind::polygon: {
        json ring = json::array();
        for (const Point& p : e.geometry.vertices) ring.push_back(coord(p));
        ring.push_back(coord(e.geometry.vertices[0]));
        geometry = {{"type", "Polygon"}, {"coordinates", json::array({std::move(ring)})}};
        break;
      }
    }
    json props = {{"id", e.id}};
    if (e.name) props["name"] = *e.name;
    features.push_back(
        {{"type", "Feature"}, {"geometry", std::move(geometry)}, {"properties", std::move(props)}});
  }
  const json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "id_a,id_b\n";
  for (const auto& [a, b] : truth.pairs()) {
    out << csv_field(a) << ',' << csv_field(b) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, ptr);
}

}  // namespace mapalign::io
