#include <doctest.h>

#include "mapalign/rand.hpp"
#include "mapalign/textalign.hpp"
#include "support/oracles.hpp"

using namespace mapalign;
using textalign::NormalizationOptions;
using textalign::TextMethod;

namespace {

MapLayer layer_with_labels(const std::string& map_id,
                           const std::vector<std::pair<std::string, std::string>>& labels,
                           GeometryKind kind = GeometryKind::polyline) {
  std::vector<Entity> ents;
  double offset = 0.0;
  for (const auto& [id, name] : labels) {
    Entity e;
    e.id = id;
    if (!name.empty()) e.name = name;
    switch (kind) {
      case GeometryKind::point: e.geometry = make_point(offset, 0); break;
      case GeometryKind::polyline:
        e.geometry = make_polyline({{offset, 0}, {offset + 5, 0}});
        break;
      case GeometryKind::polygon:
        e.geometry = make_polygon({{offset, 0}, {offset + 4, 0}, {offset + 4, 4}, {offset, 4}});
        break;
    }
    offset += 10.0;
    ents.push_back(std::move(e));
  }
  return MapLayer(map_id, 1900, false, std::move(ents));
}

NormalizationOptions opts_caseless() {
  NormalizationOptions o;
  o.caseless = true;
  return o;
}

NormalizationOptions opts_punc() {
  NormalizationOptions o = opts_caseless();
  o.strip_punctuation = true;
  return o;
}

NormalizationOptions opts_noncore() {
  NormalizationOptions o = opts_punc();
  o.strip_noncore = true;
  return o;
}

}  // namespace

TEST_SUITE("textalign") {

TEST_CASE("normalize_label examples") {
  CHECK(textalign::normalize_label("3rd Av.", opts_punc()) == "3rd av");
  CHECK(textalign::normalize_label("Delaware Street", opts_noncore()) == "delaware");
  NormalizationOptions domain = opts_punc();
  domain.expand_domain = true;
  CHECK(textalign::normalize_label("Third Av", domain) == "3rd av");
  CHECK(textalign::normalize_label("3rd Av", domain) == "3rd av");
}

TEST_CASE("normalization handles compound ordinals and whitespace") {
  NormalizationOptions domain = opts_punc();
  domain.expand_domain = true;
  CHECK(textalign::normalize_label("Twenty-First St", domain) == "21st st");
  CHECK(textalign::normalize_label("twenty first st", domain) == "21st st");
  CHECK(textalign::normalize_label("Twelfth  Av ", domain) == "12th av");
  CHECK(textalign::normalize_label("Hundredth Row", domain) == "100th row");
  CHECK(textalign::normalize_label("  Main   St  ", opts_punc()) == "main st");
}

TEST_CASE("normalization may strip a label to nothing") {
  CHECK(textalign::normalize_label("Street", opts_noncore()).empty());
  CHECK(textalign::normalize_label("St. Ave", opts_noncore()).empty());
}

TEST_CASE("options invariants are enforced") {
  NormalizationOptions bad;
  bad.strip_punctuation = true;  // without caseless
  CHECK_THROWS_AS(textalign::validate(bad), ValidationError);
  NormalizationOptions bad2 = opts_caseless();
  bad2.strip_noncore = true;  // without strip_punctuation
  CHECK_THROWS_AS(textalign::validate(bad2), ValidationError);
  for (const auto m :
       {TextMethod::str, TextMethod::str_caseless, TextMethod::str_caseless_punc,
        TextMethod::str_caseless_punc_noncore, TextMethod::str_caseless_punc_noncore_domain}) {
    CHECK_NOTHROW(textalign::validate(textalign::options_for(m)));
  }
}

TEST_CASE("normalization is idempotent on random labels") {
  oracles::Rng rng(41);
  const std::string alphabet = "abcXYZ 019.,'-";
  for (const auto m :
       {TextMethod::str, TextMethod::str_caseless, TextMethod::str_caseless_punc,
        TextMethod::str_caseless_punc_noncore, TextMethod::str_caseless_punc_noncore_domain}) {
    const NormalizationOptions opts = textalign::options_for(m);
    for (int i = 0; i < 200; ++i) {
      std::string label;
      const std::size_t len = 1 + rng.index(18);
      for (std::size_t k = 0; k < len; ++k) label += alphabet[rng.index(alphabet.size())];
      const std::string once = textalign::normalize_label(label, opts);
      if (once.empty()) continue;
      CHECK(textalign::normalize_label(once, opts) == once);
    }
  }
}

TEST_CASE("align_by_labels matches across punctuation differences") {
  const MapLayer a = layer_with_labels("a", {{"A1", "Delaware St."}, {"A2", "Main St"}});
  const MapLayer b = layer_with_labels("b", {{"B1", "delaware st"}, {"B2", "Oak Av"}});
  const AlignmentResult r =
      textalign::align_by_labels(a, b, TextMethod::str_caseless_punc);
  REQUIRE(r.size() == 1);
  CHECK(r.pairs()[0].id_a == "A1");
  CHECK(r.pairs()[0].id_b == "B1");
  CHECK(r.pairs()[0].provenance == Provenance::text);
}

TEST_CASE("method str is case sensitive") {
  const MapLayer a = layer_with_labels("a", {{"A1", "Main St"}});
  const MapLayer b = layer_with_labels("b", {{"B1", "main st"}});
  CHECK(textalign::align_by_labels(a, b, TextMethod::str).empty());
  CHECK(textalign::align_by_labels(a, b, TextMethod::str_caseless).size() == 1);
}

TEST_CASE("ambiguous duplicate labels pair nothing") {
  const MapLayer a =
      layer_with_labels("a", {{"A1", "Delaware"}, {"A2", "Delaware"}, {"A3", "Oak"}});
  const MapLayer b = layer_with_labels("b", {{"B1", "Delaware"}, {"B2", "Oak"}});
  const AlignmentResult r = textalign::align_by_labels(a, b, TextMethod::str);
  REQUIRE(r.size() == 1);
  CHECK(r.pairs()[0].id_a == "A3");
}

TEST_CASE("labels never match across geometry kinds") {
  const MapLayer a = layer_with_labels("a", {{"A1", "Delaware"}}, GeometryKind::polyline);
  const MapLayer b = layer_with_labels("b", {{"B1", "Delaware"}}, GeometryKind::polygon);
  CHECK(textalign::align_by_labels(a, b, TextMethod::str).empty());
}

TEST_CASE("alignment is symmetric under swapping the layers") {
  oracles::Rng rng(42);
  const std::vector<std::string> pool = {"Oak Av",   "oak av", "Main St.", "Main St",
                                         "Delaware", "3rd Av", "Third Av", "Elm"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::pair<std::string, std::string>> la, lb;
    for (int i = 0; i < 6; ++i) {
      la.emplace_back("A" + std::to_string(i), pool[rng.index(pool.size())]);
      lb.emplace_back("B" + std::to_string(i), pool[rng.index(pool.size())]);
    }
    const MapLayer a = layer_with_labels("a", la);
    const MapLayer b = layer_with_labels("b", lb);
    const AlignmentResult ab =
        textalign::align_by_labels(a, b, TextMethod::str_caseless_punc_noncore_domain);
    const AlignmentResult ba =
        textalign::align_by_labels(b, a, TextMethod::str_caseless_punc_noncore_domain);
    REQUIRE(ab.size() == ba.size());
    for (const AlignmentPair& p : ab.pairs()) {
      const std::string* back = ba.b_for_a(p.id_b);
      REQUIRE(back != nullptr);
      CHECK(*back == p.id_a);
    }
  }
}

TEST_CASE("every returned pair has equal nonempty normalized labels") {
  const MapLayer a = layer_with_labels(
      "a", {{"A1", "Twenty-First St"}, {"A2", "Oak Av."}, {"A3", "Street"}});
  const MapLayer b = layer_with_labels(
      "b", {{"B1", "21st Street"}, {"B2", "oak avenue"}, {"B3", "St"}});
  const auto opts = textalign::options_for(TextMethod::str_caseless_punc_noncore_domain);
  const AlignmentResult r = textalign::align_by_labels(a, b, opts);
  CHECK(r.size() == 2);  // "Street"/"St" normalize to empty and cannot pair
  for (const AlignmentPair& p : r.pairs()) {
    const std::string na = textalign::normalize_label(*a.at(p.id_a).name, opts);
    const std::string nb = textalign::normalize_label(*b.at(p.id_b).name, opts);
    CHECK(na == nb);
    CHECK_FALSE(na.empty());
  }
}

TEST_CASE("stronger methods never lose correct pairs on unique labels") {
  // Label-complete layers with unique names per layer; stronger
  // normalization can only add matches.
  const std::vector<std::pair<std::string, std::string>> la = {
      {"A1", "Main St."}, {"A2", "Third Av"}, {"A3", "Delaware Street"}};
  const std::vector<std::pair<std::string, std::string>> lb = {
      {"B1", "main st"}, {"B2", "3rd Av"}, {"B3", "Delaware St"}};
  const MapLayer a = layer_with_labels("a", la);
  const MapLayer b = layer_with_labels("b", lb);
  std::size_t previous = 0;
  for (const auto m :
       {TextMethod::str, TextMethod::str_caseless, TextMethod::str_caseless_punc,
        TextMethod::str_caseless_punc_noncore, TextMethod::str_caseless_punc_noncore_domain}) {
    const std::size_t found = textalign::align_by_labels(a, b, m).size();
    CHECK(found >= previous);
    previous = found;
  }
  CHECK(previous == 3);
}

TEST_CASE("noncore terms can come from a custom list") {
  NormalizationOptions opts = opts_noncore();
  opts.noncore_terms = {"strasse"};
  CHECK(textalign::normalize_label("Haupt Strasse", opts) == "haupt");
  CHECK(textalign::normalize_label("Haupt Street", opts) == "haupt street");
}

}  // TEST_SUITE
