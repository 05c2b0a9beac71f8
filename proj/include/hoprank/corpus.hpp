#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hoprank/common.hpp"

namespace hoprank {

enum class Split { train, dev, test };

std::string_view to_string(Split split);
std::optional<Split> parse_split(std::string_view name);

/// One fact sentence assembled from a table row.
struct ExplanationStatement {
  std::string id;
  std::string text;
  std::string table_name;
  // True when a skip-marked column with a non-empty cell was dropped.
  bool is_skipped_combined = false;

  bool operator==(const ExplanationStatement&) const = default;
};

struct Question {
  std::string id;
  std::string question_text;
  std::map<char, std::string> choices;
  char answer_key = 'A';
  Split split = Split::train;

  bool operator==(const Question&) const = default;
};

/// Expert ratings keyed by (question id, statement id). Iteration order is
/// lexicographic on both keys, independent of insertion order.
class RatingTable {
 public:
  using QuestionRatings = std::map<std::string, int>;

  /// Stores `rating`, keeping the maximum if the pair already exists.
  /// Returns true when the pair was already present.
  bool set(const std::string& question_id, const std::string& statement_id, int rating);

  std::optional<int> rating(std::string_view question_id, std::string_view statement_id) const;
  /// Ratings of one question, or nullptr if the question has none.
  const QuestionRatings* for_question(std::string_view question_id) const;

  const std::map<std::string, QuestionRatings, std::less<>>& by_question() const { return by_question_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  int max_rating_observed() const { return max_rating_; }

  bool operator==(const RatingTable&) const = default;

 private:
  std::map<std::string, QuestionRatings, std::less<>> by_question_;
  std::size_t size_ = 0;
  int max_rating_ = 0;
};

struct QuestionsLoadResult {
  std::vector<Question> questions;
  std::vector<RowIssue> skipped;
};

struct RatingsLoadReport {
  std::vector<RowIssue> errors;
  std::size_t duplicates = 0;
  std::size_t unknown_question_ids = 0;
  std::size_t unknown_statement_ids = 0;
};

/// Reads every `*.tsv` table file of `dir` (sorted by file name).
/// Throws DataError for a missing or ambiguous UID column or duplicate UIDs.
std::vector<ExplanationStatement> load_tables(const std::filesystem::path& dir,
                                              std::vector<RowIssue>* rejected = nullptr);

/// Parses one table file; `source` is used for the table name.
std::vector<ExplanationStatement> load_table_file(const std::filesystem::path& file,
                                                  std::vector<RowIssue>* rejected = nullptr);

QuestionsLoadResult load_questions(const std::filesystem::path& file, Split split);

/// Splits "stem (A) first (B) second" into the stem and lettered choices.
/// Numeric markers "(1)".."(9)" are mapped to letters.
std::pair<std::string, std::map<char, std::string>> parse_choices(std::string_view full_text);

/// Tab- or comma-separated (question id, statement id, rating) rows. A first
/// line whose rating column is not numeric is treated as a header. Malformed
/// rows are skipped and recorded in `report`.
RatingTable load_ratings(const std::filesystem::path& file, RatingsLoadReport* report = nullptr);

enum class QueryMode { correct_answer_only, all_choices };

std::string_view to_string(QueryMode mode);
std::optional<QueryMode> parse_query_mode(std::string_view name);

std::string question_query_text(const Question& q, QueryMode mode);

/// Immutable collection of statements, questions and ratings with O(1)
/// id lookup.
class Corpus {
 public:
  Corpus() = default;
  /// Throws DataError on duplicate ids or invalid questions.
  Corpus(std::vector<ExplanationStatement> statements, std::vector<Question> questions,
         RatingTable ratings);

  const std::vector<ExplanationStatement>& statements() const { return statements_; }
  const std::vector<Question>& questions() const { return questions_; }
  const RatingTable& ratings() const { return ratings_; }

  const ExplanationStatement* find_statement(std::string_view id) const;
  const Question* find_question(std::string_view id) const;

  std::vector<Question> questions_in(Split split) const;

  /// Counts rating rows whose ids are absent from the corpus.
  void count_unknown_rating_ids(RatingsLoadReport& report) const;

  bool operator==(const Corpus& other) const {
    return statements_ == other.statements_ && questions_ == other.questions_ &&
           ratings_ == other.ratings_;
  }

 private:
  std::vector<ExplanationStatement> statements_;
  std::vector<Question> questions_;
  RatingTable ratings_;
  std::unordered_map<std::string, std::size_t> statement_lookup_;
  std::unordered_map<std::string, std::size_t> question_lookup_;
};

struct SnapshotMetadata {
  std::size_t statement_count = 0;
  std::size_t question_count = 0;
  std::size_t rating_count = 0;
  int max_rating_observed = 0;
};

/// Normalized snapshot layout inside `dir`:
///   statements.tsv  statement_id, table_name, skipped_combined, text
///   questions.tsv   question_id, split, answer_key, question_text, then
///                   alternating choice letter / choice text cells
///   ratings.tsv     question_id, statement_id, rating
///   metadata.tsv    key, value
/// All text cells use tsv::escape.
void write_snapshot(const Corpus& corpus, const std::filesystem::path& dir);
Corpus read_snapshot(const std::filesystem::path& dir);
SnapshotMetadata read_snapshot_metadata(const std::filesystem::path& dir);

}  // namespace hoprank
