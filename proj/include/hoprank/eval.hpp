#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hoprank/common.hpp"
#include "hoprank/corpus.hpp"

namespace hoprank {

enum class Gain { exponential, linear };

std::string_view to_string(Gain gain);
std::optional<Gain> parse_gain(std::string_view name);

/// Discount is always log2(position + 1); a zero ideal DCG scores 0.
struct EvalConfig {
  Gain gain = Gain::exponential;
};

/// 2^r - 1 (exponential) or r (linear).
double gain_of(int rating, Gain gain);

/// NDCG of the submitted order. The ideal ordering ranks every positively
/// rated statement of the question, including ones missing from `ranking`.
/// Unrated statements count as 0. Throws DataError on duplicate ids.
double ndcg(const Ranking& ranking, const RatingTable& ratings, const EvalConfig& cfg);

/// `ranking` reordered by true rating descending, ties by id ascending.
Ranking oracle_order(const Ranking& ranking, const RatingTable& ratings);

/// NDCG the retrieved set would reach under a perfect re-ranking.
double oracle_ndcg(const Ranking& retrieved, const RatingTable& ratings, const EvalConfig& cfg);

/// Micro-averaged recall per rating category and depth, plus the aggregate
/// over all positive ratings.
struct RecallCurve {
  std::vector<std::size_t> depths;
  std::map<int, std::vector<double>> by_rating;  // rating -> recall per depth
  std::vector<double> positive;                  // ratings > 0, per depth
};

/// Only questions that have a ranking contribute. Throws UsageError for a
/// zero depth.
RecallCurve recall_by_rating(std::span<const Ranking> rankings, const RatingTable& ratings,
                             std::span<const std::size_t> depths);

/// Rows `rating K recall` with the aggregate labelled ">0".
void write_recall_curve(std::ostream& out, const RecallCurve& curve);

enum class RunScoring { submitted_order, oracle_order };

struct EvalReport {
  std::map<std::string, double> per_question;
  double mean_ndcg = 0.0;
  std::size_t question_count = 0;
  // Questions scored 0 because no statement is positively rated.
  std::vector<std::string> zero_ideal;
};

/// Scores every question in `scope` (or, when null, every rated or ranked
/// question). Scoped questions without a ranking score 0.
EvalReport evaluate_run(std::span<const Ranking> rankings, const RatingTable& ratings,
                        const EvalConfig& cfg, const std::vector<std::string>* scope = nullptr,
                        RunScoring scoring = RunScoring::submitted_order);

/// Per-question rows `question_id ndcg` in id order followed by `all <mean>`.
void write_eval_report(std::ostream& out, const EvalReport& report);

}  // namespace hoprank
