#include <doctest.h>

#include <cmath>

#include "mapalign/rubbersheet.hpp"
#include "mapalign/textalign.hpp"
#include "support/oracles.hpp"

using namespace mapalign;
using namespace mapalign::rubbersheet;
using oracles::Rng;

namespace {

ControlPointPair cp(Point src, Point dst) {
  return {src, dst, ControlPointOrigin::point_feature, {}, true};
}

AffineTransform similarity(double rot_deg, double scale, double tx, double ty) {
  const double rad = rot_deg * 3.141592653589793 / 180.0;
  AffineTransform t;
  t.a = scale * std::cos(rad);
  t.b = -scale * std::sin(rad);
  t.d = scale * std::sin(rad);
  t.e = scale * std::cos(rad);
  t.c = tx;
  t.f = ty;
  return t;
}

// A pair of layers with labeled crossing roads, the second under the given
// transform. Returns (a, b).
std::pair<MapLayer, MapLayer> crossing_road_maps(const AffineTransform& t,
                                                 int horizontals = 3, int verticals = 3) {
  std::vector<Entity> ea, eb;
  int id = 0;
  auto add = [&](const std::string& name, const Geometry& g) {
    Entity a;
    a.id = "A" + std::to_string(id);
    a.name = name;
    a.geometry = g;
    ea.push_back(a);
    Entity b;
    b.id = "B" + std::to_string(id);
    b.name = name;
    b.geometry = g;
    for (Point& p : b.geometry.vertices) p = t.apply(p);
    eb.push_back(b);
    ++id;
  };
  for (int i = 0; i < horizontals; ++i) {
    add("H" + std::to_string(i) + " St",
        make_polyline({{-10.0, i * 50.0}, {200.0, i * 50.0}}));
  }
  for (int j = 0; j < verticals; ++j) {
    add("V" + std::to_string(j) + " Av",
        make_polyline({{j * 60.0, -10.0}, {j * 60.0, 150.0}}));
  }
  return {MapLayer("a", 1900, false, std::move(ea)),
          MapLayer("b", 1901, false, std::move(eb))};
}

}  // namespace

TEST_SUITE("rubbersheet") {

TEST_CASE("two matched crossing roads give one control point") {
  const auto [a, b] = crossing_road_maps(similarity(0, 1, 0, 0), 1, 1);
  const AlignmentResult seed = textalign::align_by_labels(a, b, textalign::TextMethod::str);
  REQUIRE(seed.size() == 2);
  const auto cps = extract_control_points(seed, a, b);
  REQUIRE(cps.size() == 1);
  CHECK(cps[0].origin == ControlPointOrigin::line_intersection);
  CHECK(cps[0].src == Point{0.0, 0.0});
}

TEST_CASE("matched parallel roads give no control point") {
  const auto [a, b] = crossing_road_maps(similarity(0, 1, 5, 5), 3, 0);
  const AlignmentResult seed = textalign::align_by_labels(a, b, textalign::TextMethod::str);
  REQUIRE(seed.size() == 3);
  CHECK(extract_control_points(seed, a, b).empty());
}

TEST_CASE("matched point features become control points directly") {
  std::vector<Entity> ea = {{"A0", "BM 1", make_point(3, 4)}};
  std::vector<Entity> eb = {{"B0", "BM 1", make_point(30, 40)}};
  const MapLayer a("a", 1900, false, std::move(ea));
  const MapLayer b("b", 1901, false, std::move(eb));
  const AlignmentResult seed = textalign::align_by_labels(a, b, textalign::TextMethod::str);
  const auto cps = extract_control_points(seed, a, b);
  REQUIRE(cps.size() == 1);
  CHECK(cps[0].origin == ControlPointOrigin::point_feature);
  CHECK(cps[0].src == Point{3, 4});
  CHECK(cps[0].dst == Point{30, 40});
}

TEST_CASE("overlapping matched roads are skipped") {
  // Two collinear overlapping "roads" intersect in a segment, not a point.
  std::vector<Entity> ea = {{"A0", "R1", make_polyline({{0, 0}, {10, 0}})},
                            {"A1", "R2", make_polyline({{5, 0}, {15, 0}})}};
  std::vector<Entity> eb = {{"B0", "R1", make_polyline({{0, 0}, {10, 0}})},
                            {"B1", "R2", make_polyline({{5, 0}, {15, 0}})}};
  const MapLayer a("a", 1900, false, std::move(ea));
  const MapLayer b("b", 1901, false, std::move(eb));
  const AlignmentResult seed = textalign::align_by_labels(a, b, textalign::TextMethod::str);
  CHECK(extract_control_points(seed, a, b).empty());
}

TEST_CASE("fit_affine recovers a pure translation from three points") {
  const std::vector<ControlPointPair> cps = {
      cp({0, 0}, {5, 7}), cp({10, 0}, {15, 7}), cp({0, 10}, {5, 17})};
  const AffineTransform t = fit_affine(cps, false);
  CHECK(t.a == doctest::Approx(1.0));
  CHECK(t.b == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.c == doctest::Approx(5.0));
  CHECK(t.d == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(t.e == doctest::Approx(1.0));
  CHECK(t.f == doctest::Approx(7.0));
}

TEST_CASE("fit_affine recovers rotation plus scale exactly") {
  const AffineTransform truth = similarity(30.0, 2.0, 0.0, 0.0);
  std::vector<ControlPointPair> cps;
  for (const Point p : {Point{0, 0}, Point{10, 0}, Point{0, 10}, Point{7, 3}}) {
    cps.push_back(cp(p, truth.apply(p)));
  }
  const AffineTransform t = fit_affine(cps, false);
  for (const auto& [got, want] : {std::pair{t.a, truth.a}, {t.b, truth.b}, {t.c, truth.c},
                                  {t.d, truth.d}, {t.e, truth.e}, {t.f, truth.f}}) {
    CHECK(std::abs(got - want) < 1e-9);
  }
}

TEST_CASE("fit_affine precondition errors") {
  CHECK_THROWS_AS(fit_affine(std::vector<ControlPointPair>{cp({0, 0}, {1, 1}),
                                                           cp({1, 1}, {2, 2})},
                             false),
                  InsufficientControlPoints);
  CHECK_THROWS_AS(fit_affine(std::vector<ControlPointPair>{cp({0, 0}, {0, 0}),
                                                           cp({1, 0}, {1, 0}),
                                                           cp({2, 0}, {2, 0})},
                             false),
                  DegenerateConfiguration);
  // accepted_only skips rejected points.
  std::vector<ControlPointPair> three = {cp({0, 0}, {0, 0}), cp({1, 0}, {1, 0}),
                                         cp({0, 1}, {0, 1})};
  three[1].accepted = false;
  CHECK_THROWS_AS(fit_affine(three, true), InsufficientControlPoints);
}

TEST_CASE("fit residual is zero for exactly affine-consistent points") {
  Rng rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    AffineTransform truth;
    truth.a = rng.uniform(-2, 2);
    truth.b = rng.uniform(-2, 2);
    truth.d = rng.uniform(-2, 2);
    truth.e = rng.uniform(-2, 2);
    if (!truth.nondegenerate(1e-3)) continue;
    truth.c = rng.uniform(-100, 100);
    truth.f = rng.uniform(-100, 100);
    std::vector<ControlPointPair> cps;
    for (int i = 0; i < 6; ++i) {
      const Point p{rng.uniform(-50, 50), rng.uniform(-50, 50)};
      cps.push_back(cp(p, truth.apply(p)));
    }
    AffineTransform t;
    try {
      t = fit_affine(cps, false);
    } catch (const DegenerateConfiguration&) {
      continue;  // collinear draw
    }
    for (const ControlPointPair& c : cps) {
      CHECK(geom::point_distance(t.apply(c.src), c.dst) <= 1e-9);
    }
  }
}

TEST_CASE("filter_control_points keeps everything when residuals are equal") {
  const AffineTransform identity;
  std::vector<ControlPointPair> cps;
  for (int i = 0; i < 5; ++i) {
    cps.push_back(cp({i * 1.0, 0}, {i * 1.0, 1.0}));  // residual 1 each
  }
  for (const ControlPointPair& c : filter_control_points(cps, identity)) {
    CHECK(c.accepted);
  }
}

TEST_CASE("filter_control_points rejects exactly the planted outlier") {
  const AffineTransform identity;
  std::vector<ControlPointPair> cps;
  for (int i = 0; i < 20; ++i) {
    cps.push_back(cp({i * 1.0, 0}, {i * 1.0, 1.0}));  // residual 1
  }
  cps.push_back(cp({50, 50}, {50, 150}));  // residual 100
  const auto filtered = filter_control_points(cps, identity);
  // mu = (20 + 100) / 21, sigma from one outlier; only it exceeds mu + 2s.
  for (std::size_t i = 0; i < filtered.size(); ++i) {
    CHECK(filtered[i].accepted == (i != 20));
  }
}

TEST_CASE("a single control point is always accepted") {
  const AffineTransform identity;
  const auto filtered = filter_control_points({cp({0, 0}, {9, 9})}, identity);
  REQUIRE(filtered.size() == 1);
  CHECK(filtered[0].accepted);
}

TEST_CASE("rubber_sheet recovers a synthetic similarity transform") {
  const AffineTransform truth = similarity(25.0, 1.5, 40.0, -30.0);
  const auto [a, b] = crossing_road_maps(truth);
  const AlignmentResult seed = textalign::align_by_labels(a, b, textalign::TextMethod::str);
  const RubberSheetOutcome out = rubber_sheet(a, b, seed);
  REQUIRE(out.ok);
  CHECK(out.extracted_count == 9);
  CHECK(out.accepted_count == 9);
  const MapLayer& moved = *out.transformed_a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& va = moved.entities()[i].geometry.vertices;
    const auto& vb = b.entities()[i].geometry.vertices;
    REQUIRE(va.size() == vb.size());
    for (std::size_t k = 0; k < va.size(); ++k) {
      CHECK(geom::point_distance(va[k], vb[k]) <= 1e-6);
    }
  }
}

TEST_CASE("rubber_sheet fails on one control point") {
  const auto [a, b] = crossing_road_maps(similarity(10, 1.2, 3, 4), 1, 1);
  const AlignmentResult seed = textalign::align_by_labels(a, b, textalign::TextMethod::str);
  const RubberSheetOutcome out = rubber_sheet(a, b, seed);
  CHECK_FALSE(out.ok);
  CHECK(out.failure == RubberSheetFailure::insufficient_control_points);
  CHECK(out.extracted_count == 1);
}

TEST_CASE("rubber_sheet fails on an empty seed") {
  const auto [a, b] = crossing_road_maps(similarity(0, 1, 0, 0));
  const RubberSheetOutcome out = rubber_sheet(a, b, {});
  CHECK_FALSE(out.ok);
  CHECK(out.failure == RubberSheetFailure::insufficient_control_points);
}

TEST_CASE("rubber_sheet is idempotent in effect") {
  const auto [a, b] = crossing_road_maps(similarity(25.0, 1.5, 40.0, -30.0));
  const AlignmentResult seed = textalign::align_by_labels(a, b, textalign::TextMethod::str);
  const RubberSheetOutcome first = rubber_sheet(a, b, seed);
  REQUIRE(first.ok);
  const RubberSheetOutcome second = rubber_sheet(*first.transformed_a, b, seed);
  REQUIRE(second.ok);
  CHECK(std::abs(second.transform.a - 1.0) < 1e-9);
  CHECK(std::abs(second.transform.b) < 1e-9);
  CHECK(std::abs(second.transform.c) < 1e-6);
  CHECK(std::abs(second.transform.d) < 1e-9);
  CHECK(std::abs(second.transform.e - 1.0) < 1e-9);
  CHECK(std::abs(second.transform.f) < 1e-6);
}

TEST_CASE("transform application preserves entity metadata") {
  const auto [a, b] = crossing_road_maps(similarity(15, 0.5, 1, 2));
  const MapLayer moved = apply_transform(a, similarity(90, 2.0, 10, 20));
  REQUIRE(moved.size() == a.size());
  CHECK(moved.map_id() == a.map_id());
  CHECK(moved.year() == a.year());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(moved.entities()[i].id == a.entities()[i].id);
    CHECK(moved.entities()[i].name == a.entities()[i].name);
    CHECK(moved.entities()[i].geometry.kind == a.entities()[i].geometry.kind);
    CHECK(moved.entities()[i].geometry.vertices.size() ==
          a.entities()[i].geometry.vertices.size());
  }
}

}  // TEST_SUITE
