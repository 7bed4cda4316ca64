#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mapalign/types.hpp"

namespace mapalign::textalign {

// Cumulative normalization switches. strip_noncore requires
// strip_punctuation, which requires caseless.
struct NormalizationOptions {
  bool caseless = false;
  bool strip_punctuation = false;
  bool strip_noncore = false;
  bool expand_domain = false;
  std::vector<std::string> noncore_terms;  // empty = built-in default list
};

void validate(const NormalizationOptions& opts);

// The five rule-based label matching methods, weakest to strongest.
enum class TextMethod {
  str,
  str_caseless,
  str_caseless_punc,
  str_caseless_punc_noncore,
  str_caseless_punc_noncore_domain,
};

std::string_view to_string(TextMethod m);
TextMethod text_method_from_string(std::string_view name);
NormalizationOptions options_for(TextMethod m);

const std::vector<std::string>& default_noncore_terms();
std::vector<std::string> load_noncore_terms(const std::filesystem::path& path);

// Deterministic normal form of a label. Punctuation becomes a space before
// whitespace collapsing, so "twenty-first" keeps its token boundary. The
// result may be empty when every token was non-core.
std::string normalize_label(std::string_view label, const NormalizationOptions& opts);

// Pairs entities whose normalized labels are equal, nonempty, of the same
// geometry kind, and unique per kind on each layer. Ambiguous duplicate
// labels pair nothing.
AlignmentResult align_by_labels(const MapLayer& a, const MapLayer& b,
                                const NormalizationOptions& opts);
AlignmentResult align_by_labels(const MapLayer& a, const MapLayer& b, TextMethod method);

}  // namespace mapalign::textalign
