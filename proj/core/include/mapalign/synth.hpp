#pragma once

#include <cstdint>

#include "mapalign/types.hpp"

namespace mapalign::synth {

// Knobs of the synthetic map-pair generator. The base layout is a street
// grid: (rows+1) horizontal and (cols+1) vertical labeled roads, rows*cols
// city blocks between them, and point features scattered inside blocks.
struct SynthParams {
  int grid_rows = 4;
  int grid_cols = 4;
  int point_count = 10;
  double rotation_deg = 0.0;   // applied to map B
  double scale = 1.0;
  double translate_x = 0.0;
  double translate_y = 0.0;
  double vertex_jitter_sigma = 0.0;   // per-vertex noise on map B
  double label_keep_fraction = 1.0;   // independent per map
  double entity_drop_fraction = 0.0;  // entities deleted from map B
  std::uint64_t rng_seed = 0;
};

void validate(const SynthParams& params);

struct SynthDataset {
  MapLayer map_a;
  MapLayer map_b;
  GroundTruth truth;
};

// Deterministic in rng_seed. Map A keeps the base frame; map B is the base
// under the similarity transform plus jitter, with entities dropped. When
// label_keep_fraction >= 0.3 two horizontal and two vertical roads keep
// their labels on both maps and survive dropping, so at least four labeled
// crossing road pairs exist and rubber sheeting has enough control points.
SynthDataset generate_synthetic(const SynthParams& params);

}  // namespace mapalign::synth
