#include "mapalign/textalign.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mapalign::textalign {
namespace {

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Common multi-byte punctuation found in digitized labels. ASCII
// punctuation is handled by std::ispunct.
const std::array<std::string_view, 12> kUnicodePunct = {
    "‘", "’", "“", "”", "–", "—",
    "−", "·", "…", "«", "»", " ",
};

std::string strip_punct(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (c < 0x80) {
      out.push_back(std::ispunct(c) ? ' ' : s[i]);
      ++i;
      continue;
    }
    bool replaced = false;
    for (const std::string_view pu : kUnicodePunct) {
      if (s.substr(i, pu.size()) == pu) {
        out.push_back(' ');
        i += pu.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      out.push_back(s[i]);
      ++i;
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (const char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) {
        tokens.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string ordinal_suffix(int n) {
  const int mod100 = n % 100;
  if (mod100 >= 11 && mod100 <= 13) return "th";
  switch (n % 10) {
    case 1: return "st";
    case 2: return "nd";
    case 3: return "rd";
    default: return "th";
  }
}

std::string digit_ordinal(int n) { return std::to_string(n) + ordinal_suffix(n); }

struct OrdinalTables {
  std::unordered_map<std::string, int> single;        // "third" -> 3, "twentyfirst" -> 21
  std::unordered_map<std::string, int> tens_cardinal; // "twenty" -> 20
  std::unordered_map<std::string, int> unit_ordinal;  // "first" -> 1
};

const OrdinalTables& ordinal_tables() {
  static const OrdinalTables tables = [] {
    OrdinalTables t;
    const std::array<std::pair<std::string_view, int>, 9> units = {{
        {"first", 1}, {"second", 2}, {"third", 3}, {"fourth", 4}, {"fifth", 5},
        {"sixth", 6}, {"seventh", 7}, {"eighth", 8}, {"ninth", 9},
    }};
    const std::array<std::pair<std::string_view, int>, 10> teens = {{
        {"tenth", 10}, {"eleventh", 11}, {"twelfth", 12}, {"thirteenth", 13},
        {"fourteenth", 14}, {"fifteenth", 15}, {"sixteenth", 16}, {"seventeenth", 17},
        {"eighteenth", 18}, {"nineteenth", 19},
    }};
    const std::array<std::pair<std::string_view, int>, 8> tens_ord = {{
        {"twentieth", 20}, {"thirtieth", 30}, {"fortieth", 40}, {"fiftieth", 50},
        {"sixtieth", 60}, {"seventieth", 70}, {"eightieth", 80}, {"ninetieth", 90},
    }};
    const std::array<std::pair<std::string_view, int>, 8> tens_card = {{
        {"twenty", 20}, {"thirty", 30}, {"forty", 40}, {"fifty", 50},
        {"sixty", 60}, {"seventy", 70}, {"eighty", 80}, {"ninety", 90},
    }};
    for (const auto& [w, n] : units) {
      t.single.emplace(w, n);
      t.unit_ordinal.emplace(w, n);
    }
    for (const auto& [w, n] : teens) t.single.emplace(w, n);
    for (const auto& [w, n] : tens_ord) t.single.emplace(w, n);
    t.single.emplace("hundredth", 100);
    for (const auto& [w, n] : tens_card) {
      t.tens_cardinal.emplace(w, n);
      for (const auto& [u, m] : units) {
        t.single.emplace(std::string(w) + std::string(u), n + m);  // "twentyfirst"
      }
    }
    return t;
  }();
  return tables;
}

// Word ordinals (alone or as a tens + unit token pair) become digit form.
std::vector<std::string> canonicalize_ordinals(std::vector<std::string> tokens) {
  const OrdinalTables& t = ordinal_tables();
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i + 1 < tokens.size()) {
      auto tens = t.tens_cardinal.find(tokens[i]);
      if (tens != t.tens_cardinal.end()) {
        auto unit = t.unit_ordinal.find(tokens[i + 1]);
        if (unit != t.unit_ordinal.end()) {
          out.push_back(digit_ordinal(tens->second + unit->second));
          ++i;
          continue;
        }
      }
    }
    auto single = t.single.find(tokens[i]);
    out.push_back(single != t.single.end() ? digit_ordinal(single->second) : tokens[i]);
  }
  return out;
}

}  // namespace

void validate(const NormalizationOptions& opts) {
  if (opts.strip_noncore && !opts.strip_punctuation) {
    throw ValidationError("strip_noncore requires strip_punctuation");
  }
  if (opts.strip_punctuation && !opts.caseless) {
    throw ValidationError("strip_punctuation requires caseless");
  }
}

std::string_view to_string(TextMethod m) {
  switch (m) {
    case TextMethod::str: return "str";
    case TextMethod::str_caseless: return "str_caseless";
    case TextMethod::str_caseless_punc: return "str_caseless_punc";
    case TextMethod::str_caseless_punc_noncore: return "str_caseless_punc_noncore";
    case TextMethod::str_caseless_punc_noncore_domain:
      return "str_caseless_punc_noncore_domain";
  }
  return "?";
}

TextMethod text_method_from_string(std::string_view name) {
  if (name == "str") return TextMethod::str;
  if (name == "str_caseless") return TextMethod::str_caseless;
  if (name == "str_caseless_punc") return TextMethod::str_caseless_punc;
  if (name == "str_caseless_punc_noncore") return TextMethod::str_caseless_punc_noncore;
  if (name == "str_caseless_punc_noncore_domain") {
    return TextMethod::str_caseless_punc_noncore_domain;
  }
  throw ParseError("unknown text method: " + std::string(name));
}

NormalizationOptions options_for(TextMethod m) {
  NormalizationOptions opts;
  switch (m) {
    case TextMethod::str_caseless_punc_noncore_domain:
      opts.expand_domain = true;
      [[fallthrough]];
    case TextMethod::str_caseless_punc_noncore:
      opts.strip_noncore = true;
      [[fallthrough]];
    case TextMethod::str_caseless_punc:
      opts.strip_punctuation = true;
      [[fallthrough]];
    case TextMethod::str_caseless:
      opts.caseless = true;
      [[fallthrough]];
    case TextMethod::str:
      break;
  }
  return opts;
}

const std::vector<std::string>& default_noncore_terms() {
  static const std::vector<std::string> terms = {
      "street", "st",   "avenue", "av", "ave",   "road",  "rd",    "boulevard",
      "blvd",   "place", "pl",    "drive", "dr", "lane",  "ln",    "court",
      "ct",     "alley", "way",   "hall",  "bldg", "building",
  };
  return terms;
}

std::vector<std::string> load_noncore_terms(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    const auto tokens = tokenize(line);
    for (const std::string& t : tokens) terms.push_back(to_lower_ascii(t));
  }
  return terms;
}

std::string normalize_label(std::string_view label, const NormalizationOptions& opts) {
  validate(opts);
  std::string s(label);
  if (opts.caseless) s = to_lower_ascii(s);
  if (!opts.strip_punctuation) return s;
  std::vector<std::string> tokens = tokenize(strip_punct(s));
  if (opts.strip_noncore) {
    const std::vector<std::string>& terms =
        opts.noncore_terms.empty() ? default_noncore_terms() : opts.noncore_terms;
    const std::unordered_set<std::string> term_set(terms.begin(), terms.end());
    std::erase_if(tokens, [&](const std::string& t) { return term_set.count(t) > 0; });
  }
  if (opts.expand_domain) tokens = canonicalize_ordinals(std::move(tokens));
  return join(tokens);
}

AlignmentResult align_by_labels(const MapLayer& a, const MapLayer& b,
                                const NormalizationOptions& opts) {
  validate(opts);
  using Key = std::pair<GeometryKind, std::string>;
  auto collect = [&](const MapLayer& layer) {
    std::map<Key, std::vector<const Entity*>> by_label;
    for (const Entity& e : layer.entities()) {
      if (!e.name) continue;
      std::string norm = normalize_label(*e.name, opts);
      if (norm.empty()) continue;
      by_label[{e.geometry.kind, std::move(norm)}].push_back(&e);
    }
    return by_label;
  };
  const auto labels_a = collect(a);
  const auto labels_b = collect(b);
  std::vector<AlignmentPair> pairs;
  for (const auto& [key, ents_a] : labels_a) {
    if (ents_a.size() != 1) continue;  // ambiguous on A
    const auto it = labels_b.find(key);
    if (it == labels_b.end() || it->second.size() != 1) continue;
    pairs.push_back({ents_a[0]->id, it->second[0]->id, Provenance::text, {}});
  }
  return AlignmentResult::from_pairs(std::move(pairs));
}

AlignmentResult align_by_labels(const MapLayer& a, const MapLayer& b, TextMethod method) {
  return align_by_labels(a, b, options_for(method));
}

}  // namespace mapalign::textalign
