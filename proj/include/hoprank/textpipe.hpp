#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hoprank {

/// Preprocessing resources. Processing order is fixed:
/// lowercase -> tokenize -> lemmatize -> stopword filter.
struct PreprocessConfig {
  std::unordered_set<std::string> stopwords;
  std::unordered_map<std::string, std::string> lemma_map;
  bool lowercase = true;
  bool strip_punctuation = true;
};

struct TokenList {
  std::vector<std::string> tokens;

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }
  bool operator==(const TokenList&) const = default;
};

/// Splits UTF-8 text into maximal runs of alphanumeric code points. With
/// `keep_punctuation`, every other non-space code point becomes its own token.
std::vector<std::string> tokenize(std::string_view text, bool keep_punctuation = false);

/// ASCII and Latin-1 lowercase mapping over UTF-8 text.
std::string lowercase_utf8(std::string_view text);

TokenList preprocess(std::string_view text, const PreprocessConfig& cfg);

/// Rejects lemma entries that would break idempotence: every lemma must be a
/// single token and a fixed point of the map. Throws DataError.
void validate_preprocess_config(const PreprocessConfig& cfg);

struct PreprocessPaths {
  std::filesystem::path stopwords;
  std::filesystem::path lemmas;
  // Unset paths yield an empty stopword set / identity lemma map; so do
  // missing files when `allow_empty` is set.
  bool allow_empty = false;
};

/// Stopwords: one token per line. Lemmas: `token<TAB>lemma` per line. Blank
/// lines and lines starting with '#' are ignored. Throws DataError with the
/// offending line number for malformed lemma rows.
PreprocessConfig load_preprocess_config(const PreprocessPaths& paths);

}  // namespace hoprank
