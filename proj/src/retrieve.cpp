#include "hoprank/retrieve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <unordered_set>

#include "dense_query.hpp"
#include "hoprank/parallel.hpp"
#include "hoprank/tsv.hpp"

namespace hoprank {

void IbmParams::validate() const {
  if (n0 == 0) throw UsageError("n0 must be positive");
  if (!(growth >= 1.0) || !std::isfinite(growth)) throw UsageError("growth must be >= 1");
  if (!(downscale >= 0.0 && downscale <= 1.0)) throw UsageError("downscale must be in [0, 1]");
  if (k == 0) throw UsageError("K must be positive");
  if (k < n0) throw UsageError("K must be >= n0");
  bm25.validate();
}

Ranking ibm25_retrieve(const SparseVector& query, const CorpusIndex& index, const IbmParams& params,
                       const IterationObserver& observer) {
  params.validate();
  const std::size_t n_docs = index.doc_count();
  if (n_docs == 0) throw DataError("cannot retrieve from an empty corpus");

  detail::DenseQuery dense(index.vocab().size());
  dense.assign(query);

  std::vector<std::uint32_t> pool(n_docs);
  std::iota(pool.begin(), pool.end(), 0u);
  std::vector<bool> taken(n_docs, false);
  std::vector<std::pair<double, std::uint32_t>> scored;
  std::vector<std::uint32_t> selected;
  std::vector<const SparseVector*> selected_vectors;

  Ranking out;
  out.items.reserve(std::min(params.k, n_docs));
  std::size_t n = params.n0;
  for (std::size_t iteration = 0; !pool.empty(); ++iteration) {
    scored.clear();
    for (auto d : pool) scored.emplace_back(dense.cosine(index.doc_vector(d)), d);
    const std::size_t take = std::min(n, pool.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                      scored.end(), [&](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return index.id_rank(a.second) < index.id_rank(b.second);
                      });

    selected.clear();
    selected_vectors.clear();
    for (std::size_t i = 0; i < take; ++i) {
      const auto d = scored[i].second;
      selected.push_back(d);
      selected_vectors.push_back(&index.doc_vector(d));
      taken[d] = true;
      out.items.push_back({index.doc_id(d), scored[i].first});
    }
    dense.max_update(selected_vectors, params.downscale);
    std::erase_if(pool, [&](std::uint32_t d) { return taken[d]; });

    if (observer) {
      const SparseVector q = dense.to_sparse();
      observer(IterationState{iteration, n, selected, &q});
    } else if (out.items.size() >= params.k) {
      break;
    }
    const double next = std::ceil(static_cast<double>(n) * params.growth);
    n = next >= static_cast<double>(n_docs) ? n_docs : static_cast<std::size_t>(next);
  }
  if (out.items.size() > params.k) out.items.resize(params.k);
  return out;
}

SparseVector QueryEncoder::encode(const Question& q, QueryMode mode, Weighting weighting) const {
  return query_vector(preprocess(question_query_text(q, mode), *preprocess_), *index_, weighting);
}

std::vector<TokenList> preprocess_statements(const std::vector<ExplanationStatement>& statements,
                                             const PreprocessConfig& cfg, unsigned threads) {
  std::vector<TokenList> docs(statements.size());
  parallel_for(statements.size(), threads,
               [&](std::size_t i) { docs[i] = preprocess(statements[i].text, cfg); });
  return docs;
}

CorpusIndex build_statement_index(const std::vector<ExplanationStatement>& statements,
                                  const PreprocessConfig& cfg, const Bm25Params& params,
                                  unsigned threads) {
  std::vector<std::string> ids;
  ids.reserve(statements.size());
  for (const auto& st : statements) ids.push_back(st.id);
  auto docs = preprocess_statements(statements, cfg, threads);
  return CorpusIndex::build(docs, std::move(ids), params);
}

std::string_view to_string(RetrievalMethod method) {
  switch (method) {
    case RetrievalMethod::ibm25: return "ibm25";
    case RetrievalMethod::bm25: return "bm25";
    case RetrievalMethod::tfidf: return "tfidf";
  }
  return "ibm25";
}

std::optional<RetrievalMethod> parse_retrieval_method(std::string_view name) {
  if (name == "ibm25") return RetrievalMethod::ibm25;
  if (name == "bm25") return RetrievalMethod::bm25;
  if (name == "tfidf") return RetrievalMethod::tfidf;
  return std::nullopt;
}

std::vector<Ranking> retrieve_all(std::span<const Question> questions, const CorpusIndex& index,
                                  const PreprocessConfig& preprocess, const IbmParams& params,
                                  RetrievalMethod method, unsigned threads) {
  params.validate();
  const QueryEncoder encoder(preprocess, index);
  std::vector<Ranking> out(questions.size());
  parallel_for(questions.size(), threads, [&](std::size_t i) {
    const auto& q = questions[i];
    switch (method) {
      case RetrievalMethod::ibm25:
        out[i] = ibm25_retrieve(encoder.encode(q, params.query_mode, Weighting::bm25), index, params);
        break;
      case RetrievalMethod::bm25:
        out[i] = cosine_rank(encoder.encode(q, params.query_mode, Weighting::bm25), index,
                             Weighting::bm25, params.k);
        break;
      case RetrievalMethod::tfidf:
        out[i] = tfidf_rank(encoder.encode(q, params.query_mode, Weighting::tfidf), index, params.k);
        break;
    }
    out[i].question_id = q.id;
  });
  return out;
}

const CorpusIndex& IndexCache::get(const Bm25Params& params) {
  for (const auto& [p, index] : built_) {
    if (p == params) return *index;
  }
  auto index = std::make_unique<CorpusIndex>(CorpusIndex::build(docs_, doc_ids_, params));
  built_.emplace_back(params, std::move(index));
  return *built_.back().second;
}

// ---------------------------------------------------------------------------
// Tuning

double tuning_objective(std::span<const Ranking> rankings, const RatingTable& ratings,
                        std::map<int, double>* per_category) {
  // category -> (sum of per-question recalls, number of questions)
  std::map<int, std::pair<double, std::size_t>> acc;
  for (const auto& ranking : rankings) {
    const auto* rated = ratings.for_question(ranking.question_id);
    if (rated == nullptr) continue;
    std::unordered_set<std::string_view> retrieved;
    for (const auto& item : ranking.items) retrieved.insert(item.statement_id);

    std::map<int, std::pair<std::size_t, std::size_t>> counts;  // found, total
    for (const auto& [sid, r] : *rated) {
      if (r < 1) continue;
      auto& c = counts[r];
      ++c.second;
      if (retrieved.contains(sid)) ++c.first;
    }
    for (const auto& [r, c] : counts) {
      auto& a = acc[r];
      a.first += static_cast<double>(c.first) / static_cast<double>(c.second);
      ++a.second;
    }
  }
  if (acc.empty()) throw DataError("no positively rated statements for the tuning questions");
  double sum = 0.0;
  for (const auto& [r, a] : acc) {
    const double mean = a.first / static_cast<double>(a.second);
    if (per_category) (*per_category)[r] = mean;
    sum += mean;
  }
  return sum / static_cast<double>(acc.size());
}

TuneResult tune(std::span<const IbmParams> grid, std::span<const Question> questions,
                const RatingTable& ratings, IndexCache& indexes, const PreprocessConfig& preprocess,
                unsigned threads) {
  if (grid.empty()) throw UsageError("tuning grid is empty");
  TuneResult result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& cfg = grid[i];
    cfg.validate();
    const auto& index = indexes.get(cfg.bm25);
    auto rankings = retrieve_all(questions, index, preprocess, cfg, RetrievalMethod::ibm25, threads);
    TuneRow row{cfg, 0.0, {}};
    row.objective = tuning_objective(rankings, ratings, &row.per_category);
    if (i > 0 && row.objective > result.report[best].objective) best = i;
    result.report.push_back(std::move(row));
  }
  result.best = result.report[best].params;
  return result;
}

void write_tune_report(std::ostream& out, const TuneResult& result) {
  std::set<int> categories;
  for (const auto& row : result.report) {
    for (const auto& [r, v] : row.per_category) categories.insert(r);
  }
  out << "config\tn0\tgrowth\tdownscale\tk\tquery_mode\tk1\tb\tobjective";
  for (int r : categories) out << "\trecall_" << r;
  out << '\n';
  for (std::size_t i = 0; i < result.report.size(); ++i) {
    const auto& row = result.report[i];
    const auto& p = row.params;
    out << i << '\t' << p.n0 << '\t' << p.growth << '\t' << p.downscale << '\t' << p.k << '\t'
        << to_string(p.query_mode) << '\t' << p.bm25.k1 << '\t' << p.bm25.b << '\t'
        << tsv::format_fixed(row.objective);
    for (int r : categories) {
      auto it = row.per_category.find(r);
      out << '\t' << (it == row.per_category.end() ? std::string("nan") : tsv::format_fixed(it->second));
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Candidate files

namespace {
constexpr std::string_view kCandidateHeader = "question_id\trank\tstatement_id\tscore";
}

void write_candidates(std::ostream& out, std::span<const Ranking> rankings) {
  out << kCandidateHeader << '\n';
  for (const auto& ranking : rankings) {
    for (std::size_t i = 0; i < ranking.items.size(); ++i) {
      const auto& item = ranking.items[i];
      out << ranking.question_id << '\t' << i << '\t' << item.statement_id << '\t'
          << (item.score ? tsv::format_fixed(*item.score) : std::string()) << '\n';
    }
  }
}

void write_candidates(const std::filesystem::path& path, std::span<const Ranking> rankings) {
  auto out = tsv::open_output(path);
  write_candidates(out, rankings);
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<Ranking> read_candidates(const std::filesystem::path& path) {
  std::vector<Ranking> out;
  std::unordered_set<std::string> finished;
  std::unordered_set<std::string> current_ids;
  bool with_header = false;
  auto where = [&](std::size_t line) { return path.string() + ":" + std::to_string(line); };

  tsv::for_each_line(path, [&](std::string_view line, std::size_t number) {
    if (number == 1 && line == kCandidateHeader) {
      with_header = true;
      return;
    }
    if (tsv::trim(line).empty()) return;
    auto cells = tsv::split(line);
    std::string_view qid, sid;
    std::optional<double> score;
    std::optional<long long> rank;
    if (with_header) {
      if (cells.size() != 4) throw DataError(where(number) + ": expected 4 fields");
      qid = cells[0];
      rank = tsv::parse_int(cells[1]);
      sid = cells[2];
      if (!tsv::trim(cells[3]).empty()) {
        score = tsv::parse_double(cells[3]);
        if (!score) throw DataError(where(number) + ": bad score");
      }
      if (!rank) throw DataError(where(number) + ": bad rank");
    } else {
      if (cells.size() != 2) throw DataError(where(number) + ": expected question_id<TAB>statement_id");
      qid = cells[0];
      sid = cells[1];
    }
    if (qid.empty() || sid.empty()) throw DataError(where(number) + ": empty id");

    if (out.empty() || out.back().question_id != qid) {
      if (!out.empty()) finished.insert(out.back().question_id);
      if (finished.contains(std::string(qid))) {
        throw DataError(where(number) + ": question " + std::string(qid) + " block is not contiguous");
      }
      out.push_back({std::string(qid), {}});
      current_ids.clear();
    }
    auto& ranking = out.back();
    if (rank && static_cast<std::size_t>(*rank) != ranking.items.size()) {
      throw DataError(where(number) + ": rank out of sequence");
    }
    if (!current_ids.insert(std::string(sid)).second) {
      throw DataError(where(number) + ": duplicate statement " + std::string(sid));
    }
    ranking.items.push_back({std::string(sid), score});
  });
  return out;
}

}  // namespace hoprank
