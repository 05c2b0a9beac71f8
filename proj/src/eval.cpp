#include "hoprank/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "hoprank/tsv.hpp"

namespace hoprank {

std::string_view to_string(Gain gain) {
  return gain == Gain::linear ? "linear" : "exponential";
}

std::optional<Gain> parse_gain(std::string_view name) {
  if (name == "exponential") return Gain::exponential;
  if (name == "linear") return Gain::linear;
  return std::nullopt;
}

double gain_of(int rating, Gain gain) {
  if (rating <= 0) return 0.0;
  return gain == Gain::exponential ? std::exp2(static_cast<double>(rating)) - 1.0
                                   : static_cast<double>(rating);
}

namespace {

double discount(std::size_t position) {  // 0-based
  return std::log2(static_cast<double>(position) + 2.0);
}

double ideal_dcg(const RatingTable::QuestionRatings* rated, Gain gain) {
  if (rated == nullptr) return 0.0;
  std::vector<int> grades;
  for (const auto& [sid, r] : *rated) {
    if (r > 0) grades.push_back(r);
  }
  std::sort(grades.begin(), grades.end(), std::greater<>());
  double total = 0.0;
  for (std::size_t i = 0; i < grades.size(); ++i) total += gain_of(grades[i], gain) / discount(i);
  return total;
}

void check_unique(const Ranking& ranking) {
  std::unordered_set<std::string_view> seen;
  for (const auto& item : ranking.items) {
    if (!seen.insert(item.statement_id).second) {
      throw DataError("question " + ranking.question_id + ": duplicate statement " +
                      item.statement_id + " in ranking");
    }
  }
}

}  // namespace

double ndcg(const Ranking& ranking, const RatingTable& ratings, const EvalConfig& cfg) {
  check_unique(ranking);
  const auto* rated = ratings.for_question(ranking.question_id);
  const double idcg = ideal_dcg(rated, cfg.gain);
  if (idcg == 0.0) return 0.0;
  double dcg = 0.0;
  for (std::size_t i = 0; i < ranking.items.size(); ++i) {
    auto it = rated->find(ranking.items[i].statement_id);
    if (it == rated->end() || it->second <= 0) continue;
    dcg += gain_of(it->second, cfg.gain) / discount(i);
  }
  return std::min(1.0, dcg / idcg);
}

Ranking oracle_order(const Ranking& ranking, const RatingTable& ratings) {
  check_unique(ranking);
  const auto* rated = ratings.for_question(ranking.question_id);
  auto rating_of = [&](const RankedItem& item) {
    if (rated == nullptr) return 0;
    auto it = rated->find(item.statement_id);
    return it == rated->end() ? 0 : it->second;
  };
  Ranking out = ranking;
  std::stable_sort(out.items.begin(), out.items.end(), [&](const RankedItem& a, const RankedItem& b) {
    const int ra = rating_of(a), rb = rating_of(b);
    if (ra != rb) return ra > rb;
    return a.statement_id < b.statement_id;
  });
  return out;
}

double oracle_ndcg(const Ranking& retrieved, const RatingTable& ratings, const EvalConfig& cfg) {
  return ndcg(oracle_order(retrieved, ratings), ratings, cfg);
}

RecallCurve recall_by_rating(std::span<const Ranking> rankings, const RatingTable& ratings,
                             std::span<const std::size_t> depths) {
  RecallCurve curve;
  curve.depths.assign(depths.begin(), depths.end());
  for (auto k : depths) {
    if (k == 0) throw UsageError("recall depth must be positive");
  }
  // rating -> (found per depth, total)
  std::map<int, std::pair<std::vector<std::size_t>, std::size_t>> counts;
  for (const auto& ranking : rankings) {
    const auto* rated = ratings.for_question(ranking.question_id);
    if (rated == nullptr) continue;
    std::unordered_map<std::string_view, std::size_t> position;
    for (std::size_t i = 0; i < ranking.items.size(); ++i) {
      position.emplace(ranking.items[i].statement_id, i);
    }
    for (const auto& [sid, r] : *rated) {
      if (r <= 0) continue;
      auto& c = counts[r];
      c.first.resize(depths.size(), 0);
      ++c.second;
      auto it = position.find(sid);
      if (it == position.end()) continue;
      for (std::size_t d = 0; d < depths.size(); ++d) {
        if (it->second < depths[d]) ++c.first[d];
      }
    }
  }
  std::vector<std::size_t> found_all(depths.size(), 0);
  std::size_t total_all = 0;
  for (const auto& [r, c] : counts) {
    auto& row = curve.by_rating[r];
    for (std::size_t d = 0; d < depths.size(); ++d) {
      row.push_back(static_cast<double>(c.first[d]) / static_cast<double>(c.second));
      found_all[d] += c.first[d];
    }
    total_all += c.second;
  }
  for (std::size_t d = 0; d < depths.size(); ++d) {
    curve.positive.push_back(total_all == 0 ? 0.0
                                            : static_cast<double>(found_all[d]) /
                                                  static_cast<double>(total_all));
  }
  return curve;
}

void write_recall_curve(std::ostream& out, const RecallCurve& curve) {
  out << "rating\tK\trecall\n";
  for (const auto& [r, row] : curve.by_rating) {
    for (std::size_t d = 0; d < curve.depths.size(); ++d) {
      out << r << '\t' << curve.depths[d] << '\t' << tsv::format_fixed(row[d]) << '\n';
    }
  }
  for (std::size_t d = 0; d < curve.depths.size(); ++d) {
    out << ">0\t" << curve.depths[d] << '\t' << tsv::format_fixed(curve.positive[d]) << '\n';
  }
}

EvalReport evaluate_run(std::span<const Ranking> rankings, const RatingTable& ratings,
                        const EvalConfig& cfg, const std::vector<std::string>* scope,
                        RunScoring scoring) {
  std::map<std::string_view, const Ranking*> by_question;
  for (const auto& ranking : rankings) {
    if (!by_question.emplace(ranking.question_id, &ranking).second) {
      throw DataError("question " + ranking.question_id + " appears twice in the run");
    }
  }
  std::set<std::string> questions;
  if (scope != nullptr) {
    questions.insert(scope->begin(), scope->end());
  } else {
    for (const auto& [qid, rated] : ratings.by_question()) questions.insert(qid);
    for (const auto& ranking : rankings) questions.insert(ranking.question_id);
  }

  EvalReport report;
  double sum = 0.0;
  for (const auto& qid : questions) {
    double score = 0.0;
    if (ideal_dcg(ratings.for_question(qid), cfg.gain) == 0.0) {
      report.zero_ideal.push_back(qid);
    } else if (auto it = by_question.find(qid); it != by_question.end()) {
      score = scoring == RunScoring::oracle_order ? oracle_ndcg(*it->second, ratings, cfg)
                                                  : ndcg(*it->second, ratings, cfg);
    }
    report.per_question.emplace(qid, score);
    sum += score;
  }
  report.question_count = questions.size();
  report.mean_ndcg = questions.empty() ? 0.0 : sum / static_cast<double>(questions.size());
  return report;
}

void write_eval_report(std::ostream& out, const EvalReport& report) {
  out << "question_id\tndcg\n";
  for (const auto& [qid, score] : report.per_question) {
    out << qid << '\t' << tsv::format_fixed(score) << '\n';
  }
  out << "all\t" << tsv::format_fixed(report.mean_ndcg) << '\n';
}

}  // namespace hoprank
