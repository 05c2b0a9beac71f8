#include "hoprank/textpipe.hpp"

#include <cstdint>

#include "hoprank/common.hpp"
#include "hoprank/tsv.hpp"

namespace hoprank {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;  // bytes consumed
};

// Lenient decoder: an invalid lead or continuation byte decodes as itself
// with length 1.
CodePoint decode(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {b0, 1};
  }
  if (i + len > s.size()) return {b0, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {b0, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_space(char32_t c) {
  if (c < 0x80) return c == ' ' || (c >= '\t' && c <= '\r');
  return c == 0x85 || c == 0xA0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200B) || c == 0x2028 ||
         c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000 || c == 0xFEFF;
}

bool is_alnum(char32_t c) {
  if (c < 0x80) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  }
  if (is_space(c)) return false;
  if (c < 0xC0) return c == 0xAA || c == 0xB2 || c == 0xB3 || c == 0xB5 || c == 0xB9 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x206F) return false;  // general punctuation
  if (c >= 0x20A0 && c <= 0x20CF) return false;  // currency
  if (c >= 0x2190 && c <= 0x2BFF) return false;  // arrows, math operators, symbols
  if (c >= 0x3000 && c <= 0x303F) return false;  // CJK punctuation
  if (c >= 0xFE30 && c <= 0xFE4F) return false;
  if ((c >= 0xFF00 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) ||
      (c >= 0xFF3B && c <= 0xFF40) || (c >= 0xFF5B && c <= 0xFF65)) {
    return false;
  }
  return true;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out += static_cast<char>(c);
  } else if (c < 0x800) {
    out += static_cast<char>(0xC0 | (c >> 6));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    out += static_cast<char>(0xE0 | (c >> 12));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (c >> 18));
    out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (c & 0x3F));
  }
}

}  // namespace

std::string lowercase_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    auto cp = decode(text, i);
    if (cp.value >= 'A' && cp.value <= 'Z') {
      out += static_cast<char>(cp.value + 32);
    } else if (cp.length > 1 && cp.value >= 0xC0 && cp.value <= 0xDE && cp.value != 0xD7) {
      append_utf8(out, cp.value + 0x20);
    } else {
      out.append(text.substr(i, cp.length));
    }
    i += cp.length;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text, bool keep_punctuation) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size();) {
    auto cp = decode(text, i);
    auto bytes = text.substr(i, cp.length);
    i += cp.length;
    if (is_alnum(cp.value)) {
      current.append(bytes);
      continue;
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
    if (keep_punctuation && !is_space(cp.value)) tokens.emplace_back(bytes);
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TokenList preprocess(std::string_view text, const PreprocessConfig& cfg) {
  TokenList out;
  const std::string lowered = cfg.lowercase ? lowercase_utf8(text) : std::string(text);
  for (auto& token : tokenize(lowered, !cfg.strip_punctuation)) {
    if (auto it = cfg.lemma_map.find(token); it != cfg.lemma_map.end()) token = it->second;
    if (token.empty() || cfg.stopwords.contains(token)) continue;
    out.tokens.push_back(std::move(token));
  }
  return out;
}

void validate_preprocess_config(const PreprocessConfig& cfg) {
  for (const auto& [token, lemma] : cfg.lemma_map) {
    if (lemma.empty()) throw DataError("lemma for '" + token + "' is empty");
    auto parts = tokenize(lemma, !cfg.strip_punctuation);
    if (parts.size() != 1 || parts.front() != lemma) {
      throw DataError("lemma '" + lemma + "' for '" + token + "' is not a single token");
    }
    if (cfg.lowercase && lowercase_utf8(lemma) != lemma) {
      throw DataError("lemma '" + lemma + "' is not lowercase");
    }
    auto it = cfg.lemma_map.find(lemma);
    if (it != cfg.lemma_map.end() && it->second != lemma) {
      throw DataError("lemma '" + lemma + "' for '" + token + "' is itself mapped to '" +
                      it->second + "'");
    }
  }
}

PreprocessConfig load_preprocess_config(const PreprocessPaths& paths) {
  PreprocessConfig cfg;
  auto usable = [&](const std::filesystem::path& p, const char* what) {
    if (p.empty()) return false;
    if (!std::filesystem::exists(p)) {
      if (paths.allow_empty) return false;
      throw DataError(std::string(what) + " file not found: " + p.string());
    }
    return true;
  };
  auto is_skippable = [](std::string_view line) {
    auto t = tsv::trim(line);
    return t.empty() || t.front() == '#';
  };

  if (usable(paths.stopwords, "stopword")) {
    tsv::for_each_line(paths.stopwords, [&](std::string_view line, std::size_t) {
      if (is_skippable(line)) return;
      cfg.stopwords.insert(lowercase_utf8(tsv::trim(line)));
    });
  }
  if (usable(paths.lemmas, "lemma")) {
    tsv::for_each_line(paths.lemmas, [&](std::string_view line, std::size_t number) {
      if (is_skippable(line)) return;
      auto cells = tsv::split(tsv::trim(line));
      if (cells.size() != 2 || tsv::trim(cells[0]).empty() || tsv::trim(cells[1]).empty()) {
        throw DataError(paths.lemmas.string() + ":" + std::to_string(number) +
                        ": expected token<TAB>lemma");
      }
      cfg.lemma_map[lowercase_utf8(tsv::trim(cells[0]))] = lowercase_utf8(tsv::trim(cells[1]));
    });
  }
  validate_preprocess_config(cfg);
  return cfg;
}

}  // namespace hoprank
