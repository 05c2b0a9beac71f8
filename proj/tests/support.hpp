#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hoprank/corpus.hpp"
#include "hoprank/index.hpp"
#include "hoprank/textpipe.hpp"

namespace hoprank::testing {

inline const std::filesystem::path kSourceDir = HOPRANK_SOURCE_DIR;
inline const std::filesystem::path kFixtureDir = kSourceDir / "tests" / "fixtures";

/// Directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("hoprank-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Whitespace tokenization, no stopwords or lemmas.
inline TokenList tokens(const std::string& text) {
  TokenList out;
  std::istringstream in(text);
  for (std::string t; in >> t;) out.tokens.push_back(t);
  return out;
}

/// Index over whitespace-tokenized documents named by `ids`.
inline CorpusIndex make_index(const std::vector<std::pair<std::string, std::string>>& docs,
                              Bm25Params params = {}) {
  std::vector<TokenList> lists;
  std::vector<std::string> ids;
  for (const auto& [id, text] : docs) {
    ids.push_back(id);
    lists.push_back(tokens(text));
  }
  return CorpusIndex::build(lists, std::move(ids), params);
}

inline RatingTable ratings_of(
    std::initializer_list<std::tuple<std::string, std::string, int>> rows) {
  RatingTable table;
  for (const auto& [q, s, r] : rows) table.set(q, s, r);
  return table;
}

inline Ranking ranking_of(const std::string& qid, const std::vector<std::string>& ids) {
  Ranking r{qid, {}};
  for (const auto& id : ids) r.items.push_back({id, std::nullopt});
  return r;
}

/// Random corpus over a small vocabulary so that documents overlap.
inline std::vector<std::pair<std::string, std::string>> random_corpus(std::mt19937_64& rng,
                                                                      std::size_t docs,
                                                                      std::size_t vocab) {
  std::uniform_int_distribution<std::size_t> len(1, 8), term(0, vocab - 1);
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t d = 0; d < docs; ++d) {
    std::string text;
    for (std::size_t i = len(rng); i > 0; --i) text += "w" + std::to_string(term(rng)) + " ";
    out.emplace_back("doc" + std::to_string(1000 + (d * 7919) % 9000), text);
  }
  return out;
}

}  // namespace hoprank::testing
