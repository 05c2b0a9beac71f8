#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hoprank/common.hpp"
#include "hoprank/textpipe.hpp"

namespace hoprank {

using TermId = std::uint32_t;

/// Dense, contiguous term ids in order of first appearance.
class Vocabulary {
 public:
  TermId add(const std::string& term);
  std::optional<TermId> find(std::string_view term) const;
  const std::string& term(TermId id) const { return id_to_term_[id]; }
  std::size_t size() const { return id_to_term_.size(); }

 private:
  std::unordered_map<std::string, TermId> term_to_id_;
  std::vector<std::string> id_to_term_;
};

struct SparseEntry {
  TermId term;
  double weight;

  bool operator==(const SparseEntry&) const = default;
};

/// Sorted (term, weight) pairs with strictly positive weights and a cached
/// Euclidean norm.
class SparseVector {
 public:
  SparseVector() = default;

  /// Sorts by term, sums duplicate terms and drops non-positive weights.
  static SparseVector from_entries(std::vector<SparseEntry> entries);

  std::span<const SparseEntry> entries() const { return entries_; }
  double norm() const { return norm_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  /// Weight of `term`, 0 when absent.
  double weight(TermId term) const;

  SparseVector scaled(double factor) const;

  bool operator==(const SparseVector&) const = default;

 private:
  std::vector<SparseEntry> entries_;
  double norm_ = 0.0;
};

/// Dot product by merging the two sorted entry lists.
double dot(const SparseVector& a, const SparseVector& b);

/// dot(a, b) / (|a| |b|), clamped to [0, 1]; 0 when either norm is 0.
double cosine(const SparseVector& a, const SparseVector& b);

struct Bm25Params {
  double k1 = 1.5;
  double b = 0.75;

  /// Throws UsageError unless k1 > 0 and 0 <= b <= 1.
  void validate() const;
  bool operator==(const Bm25Params&) const = default;
};

enum class Weighting { bm25, tfidf };

/// Robertson idf with +1 inside the log; strictly positive for df <= N.
double bm25_idf(std::size_t doc_count, std::size_t doc_freq);

/// idf(t) * tf (k1 + 1) / (tf + k1 (1 - b + b len / avg_len)).
double bm25_weight(double tf, double length, double avg_length, double idf,
                   const Bm25Params& params);

/// Corpus statistics plus one BM25-weighted vector per document. Immutable
/// after build; TF-IDF document vectors are computed on first use.
class CorpusIndex {
 public:
  /// `doc_ids[i]` names `docs[i]`. Throws DataError when the corpus is empty,
  /// every document is empty, or ids are duplicated.
  static CorpusIndex build(std::span<const TokenList> docs, std::vector<std::string> doc_ids,
                           const Bm25Params& params);

  const Vocabulary& vocab() const { return vocab_; }
  const Bm25Params& params() const { return params_; }
  std::size_t doc_count() const { return doc_ids_.size(); }
  double avg_doc_len() const { return avg_doc_len_; }
  std::size_t doc_freq(TermId term) const { return doc_freq_[term]; }
  std::size_t doc_length(std::size_t doc) const { return doc_lengths_[doc]; }
  const std::string& doc_id(std::size_t doc) const { return doc_ids_[doc]; }
  const SparseVector& doc_vector(std::size_t doc) const { return bm25_vectors_[doc]; }
  const SparseVector& tfidf_vector(std::size_t doc) const;
  /// Position of the document id in ascending id order; used for tie breaks.
  std::uint32_t id_rank(std::size_t doc) const { return id_rank_[doc]; }

  /// Per-term counts of one token list restricted to the vocabulary.
  std::vector<std::pair<TermId, std::size_t>> term_counts(const TokenList& tokens) const;

  /// Plain-text dump for inspection (not a stable format).
  void dump(std::ostream& out) const;

 private:
  struct TfidfCache {
    std::once_flag once;
    std::vector<SparseVector> vectors;
  };

  Vocabulary vocab_;
  Bm25Params params_;
  std::vector<std::string> doc_ids_;
  std::vector<std::size_t> doc_freq_;
  std::vector<std::size_t> doc_lengths_;
  std::vector<std::vector<std::pair<TermId, std::size_t>>> doc_counts_;
  std::vector<SparseVector> bm25_vectors_;
  std::vector<std::uint32_t> id_rank_;
  double avg_doc_len_ = 0.0;
  std::shared_ptr<TfidfCache> tfidf_ = std::make_shared<TfidfCache>();
};

/// Query in document space. BM25 uses the query's own length for length
/// normalization; TF-IDF uses tf * ln(N / df). Out-of-vocabulary tokens drop.
SparseVector query_vector(const TokenList& tokens, const CorpusIndex& index, Weighting weighting);

/// Top-K documents by cosine to `query` against the chosen document vectors,
/// ties broken by document id ascending. Throws UsageError when k == 0.
Ranking cosine_rank(const SparseVector& query, const CorpusIndex& index, Weighting weighting,
                    std::size_t k);

/// Baseline TF-IDF retrieval: cosine_rank over TF-IDF vectors.
Ranking tfidf_rank(const SparseVector& query, const CorpusIndex& index, std::size_t k);

}  // namespace hoprank
