#include <benchmark/benchmark.h>

#include "mapalign/classify.hpp"
#include "mapalign/geometry.hpp"
#include "mapalign/rand.hpp"
#include "mapalign/spatial_index.hpp"
#include "mapalign/synth.hpp"
#include "mapalign/topology.hpp"

using namespace mapalign;

namespace {

synth::SynthDataset grid_dataset(int rows, int cols, double jitter) {
  synth::SynthParams params;
  params.grid_rows = rows;
  params.grid_cols = cols;
  params.point_count = rows * cols / 2;
  params.rotation_deg = 20.0;
  params.scale = 1.3;
  params.vertex_jitter_sigma = jitter;
  params.label_keep_fraction = 0.5;
  params.rng_seed = 1234;
  return synth::generate_synthetic(params);
}

void BM_distance_hdv(benchmark::State& state) {
  detail::Rng rng(1);
  std::vector<Geometry> polys;
  for (int i = 0; i < 64; ++i) {
    std::vector<Point> ring;
    const double cx = rng.uniform(0, 500), cy = rng.uniform(0, 500);
    for (int k = 0; k < 8; ++k) {
      const double ang = 2.0 * 3.141592653589793 * k / 8.0;
      const double r = rng.uniform(5, 20);
      ring.push_back({cx + r * std::cos(ang), cy + r * std::sin(ang)});
    }
    polys.push_back(make_polygon(std::move(ring)));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& a = polys[i % polys.size()];
    const auto& b = polys[(i * 7 + 3) % polys.size()];
    benchmark::DoNotOptimize(geom::distance(geom::DistanceMetric::hdv, a, b));
    ++i;
  }
}
BENCHMARK(BM_distance_hdv);

void BM_nearest_points(benchmark::State& state) {
  detail::Rng rng(2);
  std::vector<Geometry> lines;
  for (int i = 0; i < 64; ++i) {
    std::vector<Point> v;
    Point cur{rng.uniform(0, 500), rng.uniform(0, 500)};
    v.push_back(cur);
    for (int k = 0; k < 5; ++k) {
      cur = {cur.x + rng.uniform(-30, 30), cur.y + rng.uniform(5, 30)};
      v.push_back(cur);
    }
    lines.push_back(make_polyline(std::move(v)));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        geom::nearest_points(lines[i % lines.size()], lines[(i * 13 + 1) % lines.size()]));
    ++i;
  }
}
BENCHMARK(BM_nearest_points);

void BM_buffer_and_clip(benchmark::State& state) {
  const auto data = grid_dataset(4, 4, 0.0);
  const auto& ents = data.map_a.entities();
  std::size_t i = 0;
  for (auto _ : state) {
    const Geometry buf_a = geom::buffer(ents[i % ents.size()].geometry, 5.0);
    const Geometry buf_b = geom::buffer(ents[(i + 1) % ents.size()].geometry, 5.0);
    benchmark::DoNotOptimize(geom::intersection_area(buf_a, buf_b));
    ++i;
  }
}
BENCHMARK(BM_buffer_and_clip);

void BM_spatial_index_query(benchmark::State& state) {
  const auto data = grid_dataset(8, 8, 0.0);
  const geom::SpatialIndex index(data.map_a);
  const Geometry probe = make_point(350.0, 350.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.query_radius(probe, 120.0));
  }
}
BENCHMARK(BM_spatial_index_query);

void BM_compute_inn_sets(benchmark::State& state) {
  const auto data = grid_dataset(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(topo::compute_inn_sets(data.map_a));
  }
  state.SetComplexityN(static_cast<int64_t>(data.map_a.size()));
}
BENCHMARK(BM_compute_inn_sets)->Arg(3)->Arg(5)->Arg(8)->Complexity();

void BM_workflow_end_to_end(benchmark::State& state) {
  const auto data = grid_dataset(4, 5, 1.0);
  classify::WorkflowConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify::run_workflow(data.map_a, data.map_b, config));
  }
}
BENCHMARK(BM_workflow_end_to_end);

}  // namespace

BENCHMARK_MAIN();
