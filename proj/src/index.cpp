#include "hoprank/index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "dense_query.hpp"

namespace hoprank {

TermId Vocabulary::add(const std::string& term) {
  auto [it, inserted] = term_to_id_.emplace(term, static_cast<TermId>(id_to_term_.size()));
  if (inserted) id_to_term_.push_back(term);
  return it->second;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  auto it = term_to_id_.find(std::string(term));
  if (it == term_to_id_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------

SparseVector SparseVector::from_entries(std::vector<SparseEntry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.term < b.term; });
  SparseVector v;
  for (const auto& e : entries) {
    if (!v.entries_.empty() && v.entries_.back().term == e.term) {
      v.entries_.back().weight += e.weight;
    } else {
      v.entries_.push_back(e);
    }
  }
  std::erase_if(v.entries_, [](const SparseEntry& e) { return !(e.weight > 0.0); });
  double sq = 0.0;
  for (const auto& e : v.entries_) sq += e.weight * e.weight;
  v.norm_ = std::sqrt(sq);
  return v;
}

double SparseVector::weight(TermId term) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                             [](const SparseEntry& e, TermId t) { return e.term < t; });
  return it != entries_.end() && it->term == term ? it->weight : 0.0;
}

SparseVector SparseVector::scaled(double factor) const {
  std::vector<SparseEntry> out(entries_.begin(), entries_.end());
  for (auto& e : out) e.weight *= factor;
  return from_entries(std::move(out));
}

double dot(const SparseVector& a, const SparseVector& b) {
  auto ea = a.entries();
  auto eb = b.entries();
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].term < eb[j].term) {
      ++i;
    } else if (eb[j].term < ea[i].term) {
      ++j;
    } else {
      sum += ea[i].weight * eb[j].weight;
      ++i;
      ++j;
    }
  }
  return sum;
}

double cosine(const SparseVector& a, const SparseVector& b) {
  if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
  return std::clamp(dot(a, b) / (a.norm() * b.norm()), 0.0, 1.0);
}

// ---------------------------------------------------------------------------

void Bm25Params::validate() const {
  if (!(k1 > 0.0) || !std::isfinite(k1)) throw UsageError("bm25 k1 must be > 0");
  if (!(b >= 0.0 && b <= 1.0)) throw UsageError("bm25 b must be in [0, 1]");
}

double bm25_idf(std::size_t doc_count, std::size_t doc_freq) {
  const double n = static_cast<double>(doc_count);
  const double df = static_cast<double>(doc_freq);
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double bm25_weight(double tf, double length, double avg_length, double idf,
                   const Bm25Params& params) {
  const double norm = 1.0 - params.b + params.b * length / avg_length;
  return idf * tf * (params.k1 + 1.0) / (tf + params.k1 * norm);
}

// ---------------------------------------------------------------------------

CorpusIndex CorpusIndex::build(std::span<const TokenList> docs, std::vector<std::string> doc_ids,
                               const Bm25Params& params) {
  params.validate();
  if (docs.empty()) throw DataError("cannot index an empty corpus");
  if (docs.size() != doc_ids.size()) throw DataError("document/id count mismatch");

  CorpusIndex index;
  index.params_ = params;
  index.doc_ids_ = std::move(doc_ids);
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& id : index.doc_ids_) {
      if (!seen.insert(id).second) throw DataError("duplicate document id " + id);
    }
  }

  std::size_t total_len = 0;
  index.doc_counts_.reserve(docs.size());
  index.doc_lengths_.reserve(docs.size());
  for (const auto& doc : docs) {
    std::vector<std::pair<TermId, std::size_t>> counts;
    for (const auto& token : doc.tokens) {
      const TermId id = index.vocab_.add(token);
      if (id >= index.doc_freq_.size()) index.doc_freq_.push_back(0);
      counts.emplace_back(id, 1);
    }
    std::sort(counts.begin(), counts.end());
    std::vector<std::pair<TermId, std::size_t>> merged;
    for (const auto& [term, one] : counts) {
      if (!merged.empty() && merged.back().first == term) {
        merged.back().second += one;
      } else {
        merged.emplace_back(term, one);
      }
    }
    for (const auto& [term, tf] : merged) ++index.doc_freq_[term];
    index.doc_lengths_.push_back(doc.size());
    total_len += doc.size();
    index.doc_counts_.push_back(std::move(merged));
  }
  if (total_len == 0) throw DataError("every document is empty after preprocessing");
  index.avg_doc_len_ = static_cast<double>(total_len) / static_cast<double>(docs.size());

  const std::size_t n = docs.size();
  std::vector<double> idf(index.vocab_.size());
  for (std::size_t t = 0; t < idf.size(); ++t) idf[t] = bm25_idf(n, index.doc_freq_[t]);

  index.bm25_vectors_.reserve(n);
  for (std::size_t d = 0; d < n; ++d) {
    std::vector<SparseEntry> entries;
    entries.reserve(index.doc_counts_[d].size());
    for (const auto& [term, tf] : index.doc_counts_[d]) {
      entries.push_back({term, bm25_weight(static_cast<double>(tf),
                                           static_cast<double>(index.doc_lengths_[d]),
                                           index.avg_doc_len_, idf[term], params)});
    }
    index.bm25_vectors_.push_back(SparseVector::from_entries(std::move(entries)));
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return index.doc_ids_[a] < index.doc_ids_[b];
  });
  index.id_rank_.resize(n);
  for (std::uint32_t r = 0; r < n; ++r) index.id_rank_[order[r]] = r;
  return index;
}

const SparseVector& CorpusIndex::tfidf_vector(std::size_t doc) const {
  std::call_once(tfidf_->once, [this] {
    const double n = static_cast<double>(doc_count());
    tfidf_->vectors.reserve(doc_count());
    for (const auto& counts : doc_counts_) {
      std::vector<SparseEntry> entries;
      for (const auto& [term, tf] : counts) {
        entries.push_back(
            {term, static_cast<double>(tf) * std::log(n / static_cast<double>(doc_freq_[term]))});
      }
      tfidf_->vectors.push_back(SparseVector::from_entries(std::move(entries)));
    }
  });
  return tfidf_->vectors[doc];
}

std::vector<std::pair<TermId, std::size_t>> CorpusIndex::term_counts(const TokenList& tokens) const {
  std::vector<std::pair<TermId, std::size_t>> counts;
  for (const auto& token : tokens.tokens) {
    if (auto id = vocab_.find(token)) counts.emplace_back(*id, 1);
  }
  std::sort(counts.begin(), counts.end());
  std::vector<std::pair<TermId, std::size_t>> merged;
  for (const auto& [term, one] : counts) {
    if (!merged.empty() && merged.back().first == term) {
      ++merged.back().second;
    } else {
      merged.emplace_back(term, one);
    }
  }
  return merged;
}

void CorpusIndex::dump(std::ostream& out) const {
  out << "# docs=" << doc_count() << " vocab=" << vocab_.size() << " avg_doc_len=" << avg_doc_len_
      << " k1=" << params_.k1 << " b=" << params_.b << '\n';
  out << "# term\tterm_id\tdoc_freq\n";
  for (TermId t = 0; t < vocab_.size(); ++t) {
    out << vocab_.term(t) << '\t' << t << '\t' << doc_freq_[t] << '\n';
  }
  out << "# doc_id\tlength\tnorm\tterm_id:weight...\n";
  for (std::size_t d = 0; d < doc_count(); ++d) {
    out << doc_ids_[d] << '\t' << doc_lengths_[d] << '\t' << bm25_vectors_[d].norm();
    for (const auto& e : bm25_vectors_[d].entries()) out << '\t' << e.term << ':' << e.weight;
    out << '\n';
  }
}

// ---------------------------------------------------------------------------

SparseVector query_vector(const TokenList& tokens, const CorpusIndex& index, Weighting weighting) {
  std::vector<SparseEntry> entries;
  const double n = static_cast<double>(index.doc_count());
  for (const auto& [term, tf] : index.term_counts(tokens)) {
    const double df = static_cast<double>(index.doc_freq(term));
    double w = 0.0;
    if (weighting == Weighting::bm25) {
      w = bm25_weight(static_cast<double>(tf), static_cast<double>(tokens.size()),
                      index.avg_doc_len(), bm25_idf(index.doc_count(), index.doc_freq(term)),
                      index.params());
    } else {
      w = static_cast<double>(tf) * std::log(n / df);
    }
    entries.push_back({term, w});
  }
  return SparseVector::from_entries(std::move(entries));
}

Ranking cosine_rank(const SparseVector& query, const CorpusIndex& index, Weighting weighting,
                    std::size_t k) {
  if (k == 0) throw UsageError("ranking depth K must be positive");
  const std::size_t n = index.doc_count();
  detail::DenseQuery dense(index.vocab().size());
  dense.assign(query);

  std::vector<std::pair<double, std::uint32_t>> scored(n);
  for (std::uint32_t d = 0; d < n; ++d) {
    const auto& v = weighting == Weighting::bm25 ? index.doc_vector(d) : index.tfidf_vector(d);
    scored[d] = {dense.cosine(v), d};
  }
  const std::size_t take = std::min(k, n);
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                    [&](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return index.id_rank(a.second) < index.id_rank(b.second);
                    });
  Ranking out;
  out.items.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.items.push_back({index.doc_id(scored[i].second), scored[i].first});
  }
  return out;
}

Ranking tfidf_rank(const SparseVector& query, const CorpusIndex& index, std::size_t k) {
  return cosine_rank(query, index, Weighting::tfidf, k);
}

// ---------------------------------------------------------------------------

namespace detail {

void DenseQuery::assign(const SparseVector& query) {
  for (TermId t : active_) weights_[t] = 0.0;
  active_.clear();
  for (const auto& e : query.entries()) {
    weights_[e.term] = e.weight;
    active_.push_back(e.term);
  }
  recompute_norm();
}

void DenseQuery::apply_max(const std::vector<SparseEntry>& agg, double scale) {
  bool grew = false;
  for (const auto& e : agg) {
    const double candidate = scale * e.weight;
    if (!(candidate > weights_[e.term])) continue;
    if (weights_[e.term] == 0.0) {
      active_.push_back(e.term);
      grew = true;
    }
    weights_[e.term] = candidate;
  }
  if (grew) std::sort(active_.begin(), active_.end());
  recompute_norm();
}

void DenseQuery::recompute_norm() {
  double sq = 0.0;
  for (TermId t : active_) sq += weights_[t] * weights_[t];
  norm_ = std::sqrt(sq);
}

double DenseQuery::cosine(const SparseVector& doc) const {
  if (norm_ == 0.0 || doc.norm() == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& e : doc.entries()) {
    const double q = weights_[e.term];
    if (q != 0.0) sum += q * e.weight;
  }
  return std::clamp(sum / (norm_ * doc.norm()), 0.0, 1.0);
}

SparseVector DenseQuery::to_sparse() const {
  std::vector<SparseEntry> entries;
  entries.reserve(active_.size());
  for (TermId t : active_) entries.push_back({t, weights_[t]});
  return SparseVector::from_entries(std::move(entries));
}

}  // namespace detail

}  // namespace hoprank
