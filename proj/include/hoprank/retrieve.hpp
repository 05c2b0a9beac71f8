#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hoprank/common.hpp"
#include "hoprank/corpus.hpp"
#include "hoprank/index.hpp"
#include "hoprank/textpipe.hpp"

namespace hoprank {

/// Iterative BM25 parameters.
struct IbmParams {
  std::size_t n0 = 16;      // initial selection size
  double growth = 2.0;      // n <- ceil(n * growth) after every iteration
  double downscale = 0.5;   // factor applied to the aggregated selection vector
  std::size_t k = 200;      // candidate list length
  QueryMode query_mode = QueryMode::correct_answer_only;
  Bm25Params bm25;

  /// Throws UsageError when a field is out of range or k < n0.
  void validate() const;
  bool operator==(const IbmParams&) const = default;
};

/// State after one iteration, for tracing and tests.
struct IterationState {
  std::size_t iteration = 0;
  std::size_t n = 0;
  std::span<const std::uint32_t> selected;  // document indices
  const SparseVector* query = nullptr;      // query after the max update
};

using IterationObserver = std::function<void(const IterationState&)>;

/// Iterative retrieval: repeatedly selects the `n` pool documents closest to
/// the query, max-merges their down-scaled vectors into the query and removes
/// them from the pool, growing `n` geometrically. Returns the first `k`
/// selected documents in selection order, each scored by its cosine at
/// selection time. Stops once `k` documents are selected unless an observer
/// is attached, in which case the pool is always exhausted.
Ranking ibm25_retrieve(const SparseVector& query, const CorpusIndex& index, const IbmParams& params,
                       const IterationObserver& observer = {});

/// Turns questions into query vectors in the index's space.
class QueryEncoder {
 public:
  QueryEncoder(const PreprocessConfig& preprocess, const CorpusIndex& index)
      : preprocess_(&preprocess), index_(&index) {}

  SparseVector encode(const Question& q, QueryMode mode, Weighting weighting) const;

 private:
  const PreprocessConfig* preprocess_;
  const CorpusIndex* index_;
};

/// Preprocesses the statement texts in corpus order.
std::vector<TokenList> preprocess_statements(const std::vector<ExplanationStatement>& statements,
                                             const PreprocessConfig& cfg, unsigned threads = 1);

CorpusIndex build_statement_index(const std::vector<ExplanationStatement>& statements,
                                  const PreprocessConfig& cfg, const Bm25Params& params,
                                  unsigned threads = 1);

enum class RetrievalMethod { ibm25, bm25, tfidf };

std::string_view to_string(RetrievalMethod method);
std::optional<RetrievalMethod> parse_retrieval_method(std::string_view name);

/// Runs retrieval for every question on up to `threads` workers. Output order
/// follows `questions` regardless of the thread count. `bm25` is single-shot
/// BM25 cosine ranking; `tfidf` is the TF-IDF baseline.
std::vector<Ranking> retrieve_all(std::span<const Question> questions, const CorpusIndex& index,
                                  const PreprocessConfig& preprocess, const IbmParams& params,
                                  RetrievalMethod method = RetrievalMethod::ibm25,
                                  unsigned threads = 1);

/// Builds (and caches) one index per distinct BM25 parameter setting over a
/// fixed preprocessed corpus.
class IndexCache {
 public:
  IndexCache(std::vector<TokenList> docs, std::vector<std::string> doc_ids)
      : docs_(std::move(docs)), doc_ids_(std::move(doc_ids)) {}

  const CorpusIndex& get(const Bm25Params& params);

 private:
  std::vector<TokenList> docs_;
  std::vector<std::string> doc_ids_;
  std::vector<std::pair<Bm25Params, std::unique_ptr<CorpusIndex>>> built_;
};

/// Mean over rating categories r >= 1 of the per-question recall of rated-r
/// statements within each ranking, averaged over the questions that have
/// rated-r statements. `per_category` receives the category means.
double tuning_objective(std::span<const Ranking> rankings, const RatingTable& ratings,
                        std::map<int, double>* per_category = nullptr);

struct TuneRow {
  IbmParams params;
  double objective = 0.0;
  std::map<int, double> per_category;
};

struct TuneResult {
  IbmParams best;
  std::vector<TuneRow> report;  // grid order
};

/// Grid search maximizing `tuning_objective` over the dev questions. Ties keep
/// the earliest grid entry. Throws UsageError for an empty grid and DataError
/// when the questions have no positively rated statements.
TuneResult tune(std::span<const IbmParams> grid, std::span<const Question> questions,
                const RatingTable& ratings, IndexCache& indexes, const PreprocessConfig& preprocess,
                unsigned threads = 1);

void write_tune_report(std::ostream& out, const TuneResult& result);

/// Candidate export: header `question_id rank statement_id score`, 0-based
/// ranks, one block per question in the given order.
void write_candidates(std::ostream& out, std::span<const Ranking> rankings);
void write_candidates(const std::filesystem::path& path, std::span<const Ranking> rankings);

/// Reads a candidate export or a two-column submission file; question blocks
/// keep file order. Throws DataError on malformed rows, duplicate statements
/// within a question or non-contiguous question blocks.
std::vector<Ranking> read_candidates(const std::filesystem::path& path);

}  // namespace hoprank
