#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mapalign/types.hpp"

namespace mapalign::io {

// Parses a GeoJSON FeatureCollection into a validated layer. Features must
// carry Point/LineString/Polygon geometry and a string property "id";
// "name" is optional. Multi-geometries and polygon holes are rejected.
MapLayer load_layer(const std::filesystem::path& path, std::string map_id, int year,
                    bool georeferenced);

// CSV with header id_a,id_b; one pair per row, one-to-one per side.
GroundTruth load_ground_truth(const std::filesystem::path& path);

// CSV with header id_a,id_b,provenance,metric,score, rows sorted by
// (id_a, id_b). Byte output is deterministic for identical input.
void write_alignment(const AlignmentResult& result, const std::filesystem::path& path);
AlignmentResult read_alignment(const std::filesystem::path& path);

// N-Triples: <urn:map:{map_a}:{id_a}> owl:sameAs <urn:map:{map_b}:{id_b}>,
// sorted as in write_alignment, ids percent-encoded where not URI-safe.
void export_sameas_triples(const AlignmentResult& result, const MapLayer& map_a,
                           const MapLayer& map_b, const std::filesystem::path& path);

void write_layer_geojson(const MapLayer& layer, const std::filesystem::path& path);
void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);

// RFC 3986: everything but unreserved characters becomes %HH.
std::string percent_encode(std::string_view s);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace mapalign::io
