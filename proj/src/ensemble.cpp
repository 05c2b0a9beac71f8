#include "hoprank/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_set>

#include "hoprank/tsv.hpp"

namespace hoprank {

namespace {
constexpr std::string_view kScoreHeader = "question_id\tstatement_id\tscore";
}

const double* ScoreFile::find(const std::string& question_id, const std::string& statement_id) const {
  auto q = entries.find(question_id);
  if (q == entries.end()) return nullptr;
  auto s = q->second.find(statement_id);
  return s == q->second.end() ? nullptr : &s->second;
}

std::size_t ScoreFile::size() const {
  std::size_t n = 0;
  for (const auto& [qid, scores] : entries) n += scores.size();
  return n;
}

ScoreFile read_score_file(const std::filesystem::path& path, std::string label) {
  ScoreFile file;
  file.source_label = label.empty() ? path.stem().string() : std::move(label);
  auto where = [&](std::size_t line) { return path.string() + ":" + std::to_string(line); };
  tsv::for_each_line(path, [&](std::string_view line, std::size_t number) {
    if (number == 1) {
      if (line != kScoreHeader) throw DataError(where(1) + ": expected header '" + std::string(kScoreHeader) + "'");
      return;
    }
    if (tsv::trim(line).empty()) return;
    auto cells = tsv::split(line);
    if (cells.size() != 3) throw DataError(where(number) + ": expected 3 fields");
    auto score = tsv::parse_double(cells[2]);
    if (!score) throw DataError(where(number) + ": bad score '" + std::string(cells[2]) + "'");
    auto& per_question = file.entries[std::string(cells[0])];
    if (!per_question.emplace(std::string(cells[1]), *score).second) {
      throw DataError(where(number) + ": repeated pair " + std::string(cells[0]) + "/" +
                      std::string(cells[1]));
    }
  });
  return file;
}

void write_score_file(std::ostream& out, const ScoreFile& scores, std::span<const Ranking> order_by) {
  out << kScoreHeader << '\n';
  char buf[64];
  for (const auto& ranking : order_by) {
    for (const auto& item : ranking.items) {
      if (const double* s = scores.find(ranking.question_id, item.statement_id)) {
        std::snprintf(buf, sizeof buf, "%.17g", *s);
        out << ranking.question_id << '\t' << item.statement_id << '\t' << buf << '\n';
      }
    }
  }
}

std::vector<std::string> unknown_score_pairs(const ScoreFile& scores,
                                             std::span<const Ranking> candidates) {
  std::unordered_map<std::string_view, std::unordered_set<std::string_view>> known;
  for (const auto& ranking : candidates) {
    auto& ids = known[ranking.question_id];
    for (const auto& item : ranking.items) ids.insert(item.statement_id);
  }
  std::vector<std::string> unknown;
  for (const auto& [qid, per_question] : scores.entries) {
    auto q = known.find(qid);
    for (const auto& [sid, score] : per_question) {
      if (q == known.end() || !q->second.contains(sid)) unknown.push_back(qid + "/" + sid);
    }
  }
  std::sort(unknown.begin(), unknown.end());
  return unknown;
}

Ranking score_to_ranking(const Ranking& candidates, const ScoreFile& scores,
                         std::vector<std::string>* warnings) {
  std::vector<std::pair<double, std::size_t>> keyed;
  std::vector<std::string> missing;
  keyed.reserve(candidates.items.size());
  for (std::size_t i = 0; i < candidates.items.size(); ++i) {
    const double* s = scores.find(candidates.question_id, candidates.items[i].statement_id);
    if (s == nullptr) {
      missing.push_back(candidates.items[i].statement_id);
    } else {
      keyed.emplace_back(*s, i);
    }
  }
  if (!missing.empty()) {
    std::string msg = scores.source_label + ": question " + candidates.question_id +
                      " lacks scores for";
    for (const auto& id : missing) msg += " " + id;
    throw DataError(msg);
  }
  if (warnings != nullptr) {
    if (auto q = scores.entries.find(candidates.question_id); q != scores.entries.end()) {
      std::unordered_set<std::string_view> ids;
      for (const auto& item : candidates.items) ids.insert(item.statement_id);
      std::vector<std::string> extra;
      for (const auto& [sid, score] : q->second) {
        if (!ids.contains(sid)) extra.push_back(candidates.question_id + "/" + sid);
      }
      std::sort(extra.begin(), extra.end());
      warnings->insert(warnings->end(), extra.begin(), extra.end());
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  Ranking out{candidates.question_id, {}};
  out.items.reserve(keyed.size());
  for (const auto& [score, i] : keyed) {
    out.items.push_back({candidates.items[i].statement_id, score});
  }
  return out;
}

void EnsembleSpec::validate() const {
  if (members.empty()) throw UsageError("ensemble needs at least one member");
  for (const auto& m : members) {
    if (!std::isfinite(m.weight) || !(m.weight > 0.0)) {
      throw UsageError("ensemble weight for '" + m.source + "' must be finite and positive");
    }
  }
}

EnsembleSpec EnsembleSpec::uniform(std::size_t count) {
  EnsembleSpec spec;
  for (std::size_t i = 0; i < count; ++i) spec.members.push_back({"member" + std::to_string(i), 1.0});
  return spec;
}

Ranking aggregate(std::span<const Ranking> rankings, const EnsembleSpec& spec) {
  spec.validate();
  if (rankings.size() != spec.members.size()) {
    throw UsageError("ensemble has " + std::to_string(spec.members.size()) + " weights for " +
                     std::to_string(rankings.size()) + " rankings");
  }
  const Ranking& first = rankings.front();
  std::unordered_map<std::string_view, std::size_t> slot;
  for (std::size_t i = 0; i < first.items.size(); ++i) {
    if (!slot.emplace(first.items[i].statement_id, i).second) {
      throw DataError("question " + first.question_id + ": duplicate statement " +
                      first.items[i].statement_id);
    }
  }

  double weight_total = 0.0;
  for (const auto& m : spec.members) weight_total += m.weight;

  const std::size_t n = first.items.size();
  std::vector<double> agg(n, 0.0);
  std::vector<double> score_sum(n, 0.0);
  std::vector<std::size_t> score_count(n, 0);
  for (std::size_t m = 0; m < rankings.size(); ++m) {
    const auto& ranking = rankings[m];
    if (ranking.question_id != first.question_id) {
      throw DataError("ensemble members rank different questions: " + first.question_id + " vs " +
                      ranking.question_id);
    }
    std::vector<bool> seen(n, false);
    std::set<std::string> differing;
    for (std::size_t r = 0; r < ranking.items.size(); ++r) {
      const auto& item = ranking.items[r];
      auto it = slot.find(item.statement_id);
      if (it == slot.end() || seen[it->second]) {
        differing.insert(item.statement_id);
        continue;
      }
      seen[it->second] = true;
      // Normalized weights make the tie structure independent of weight scale.
      agg[it->second] += spec.members[m].weight / weight_total * static_cast<double>(r);
      if (item.score) {
        score_sum[it->second] += *item.score;
        ++score_count[it->second];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!seen[i]) differing.insert(first.items[i].statement_id);
    }
    if (!differing.empty()) {
      std::string msg = "question " + first.question_id + ": member '" + spec.members[m].source +
                        "' differs from '" + spec.members[0].source + "' on";
      for (const auto& id : differing) msg += " " + id;
      throw DataError(msg);
    }
  }

  struct Key {
    long long rank_sum;  // normalized aggregate quantized to 1e-9
    double mean_score;
    std::size_t slot;
  };
  std::vector<Key> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    keys[i] = {std::llround(agg[i] * 1e9),
               score_count[i] ? score_sum[i] / static_cast<double>(score_count[i])
                              : -std::numeric_limits<double>::infinity(),
               i};
  }
  std::sort(keys.begin(), keys.end(), [&](const Key& a, const Key& b) {
    if (a.rank_sum != b.rank_sum) return a.rank_sum < b.rank_sum;
    if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
    return first.items[a.slot].statement_id < first.items[b.slot].statement_id;
  });

  Ranking out{first.question_id, {}};
  out.items.reserve(n);
  for (const auto& key : keys) {
    std::optional<double> score;
    if (score_count[key.slot]) score = key.mean_score;
    out.items.push_back({first.items[key.slot].statement_id, score});
  }
  return out;
}

void write_submission(std::ostream& out, std::span<const Ranking> rankings) {
  for (const auto& ranking : rankings) {
    for (const auto& item : ranking.items) out << ranking.question_id << '\t' << item.statement_id << '\n';
  }
}

void write_submission(const std::filesystem::path& path, std::span<const Ranking> rankings) {
  auto out = tsv::open_output(path);
  write_submission(out, rankings);
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace hoprank
