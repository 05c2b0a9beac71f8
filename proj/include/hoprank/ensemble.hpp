#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hoprank/common.hpp"

namespace hoprank {

/// Scores from an external re-ranker, keyed by question then statement.
struct ScoreFile {
  std::string source_label;
  std::unordered_map<std::string, std::unordered_map<std::string, double>> entries;

  const double* find(const std::string& question_id, const std::string& statement_id) const;
  std::size_t size() const;
};

/// Reads a file with header `question_id statement_id score`. Throws
/// DataError on a bad header, malformed rows or a repeated pair.
ScoreFile read_score_file(const std::filesystem::path& path, std::string label = {});

void write_score_file(std::ostream& out, const ScoreFile& scores,
                      std::span<const Ranking> order_by);

/// Pairs present in `scores` that no candidate list contains.
std::vector<std::string> unknown_score_pairs(const ScoreFile& scores,
                                             std::span<const Ranking> candidates);

/// Candidate list re-sorted by score descending; equal scores keep candidate
/// order. Throws DataError naming every candidate without a score. Ids scored
/// for this question but absent from the candidates are appended to
/// `warnings` and otherwise ignored.
Ranking score_to_ranking(const Ranking& candidates, const ScoreFile& scores,
                         std::vector<std::string>* warnings = nullptr);

struct EnsembleMember {
  std::string source;
  double weight = 1.0;
};

struct EnsembleSpec {
  std::vector<EnsembleMember> members;

  /// Throws UsageError unless there is a member and all weights are finite
  /// and positive.
  void validate() const;
  static EnsembleSpec uniform(std::size_t count);
};

/// Weighted sum of 0-based ranks, ascending. Ties: mean member score
/// descending (over members that carry a score), then id ascending. Throws
/// DataError when the members do not rank the identical id set.
Ranking aggregate(std::span<const Ranking> rankings, const EnsembleSpec& spec);

/// One `question_id<TAB>statement_id` line per ranked item, no header.
void write_submission(std::ostream& out, std::span<const Ranking> rankings);
void write_submission(const std::filesystem::path& path, std::span<const Ranking> rankings);

}  // namespace hoprank
