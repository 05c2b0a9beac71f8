#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hoprank/corpus.hpp"
#include "hoprank/ensemble.hpp"
#include "hoprank/eval.hpp"
#include "hoprank/retrieve.hpp"

namespace hoprank {

/// Everything a pipeline command needs. Filled from defaults, then a config
/// file, then command-line overrides.
struct RunConfig {
  // [paths]
  std::filesystem::path tables_dir;
  std::vector<std::pair<Split, std::filesystem::path>> question_files;
  std::vector<std::filesystem::path> rating_files;
  std::filesystem::path snapshot_dir;
  std::filesystem::path output_dir = ".";
  std::filesystem::path stopwords;
  std::filesystem::path lemmas;
  std::filesystem::path candidates;
  // [retrieve] and [bm25]
  RetrievalMethod method = RetrievalMethod::ibm25;
  IbmParams ibm;
  // [eval]
  EvalConfig eval;
  // [run]
  Split split = Split::dev;
  unsigned threads = 0;
  std::vector<long long> seeds;
  // [ensemble]
  std::vector<EnsembleMember> ensemble_members;

  PreprocessPaths preprocess_paths() const;
};

/// Applies one `key = value` setting of `section`. Relative paths resolve
/// against `base_dir`. Throws UsageError for unknown keys or bad values.
void apply_setting(RunConfig& cfg, std::string_view section, std::string_view key,
                   std::string_view value, const std::filesystem::path& base_dir = {});

/// Reads a sectioned `key = value` file ('#' and ';' start comments).
/// Relative paths inside it resolve against the file's directory.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& file);

/// Writes the retrieval settings as a loadable config file.
void write_retrieval_config(std::ostream& out, const RunConfig& cfg);

/// Parses "a,b,c" into trimmed non-empty parts.
std::vector<std::string> split_list(std::string_view text);

}  // namespace hoprank
