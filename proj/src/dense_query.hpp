#pragma once

#include <algorithm>
#include <vector>

#include "hoprank/index.hpp"

namespace hoprank::detail {

/// Query vector scattered into a vocabulary-sized array so that scoring a
/// document costs O(|doc|). Summation runs in ascending term order, which
/// keeps results bit-identical to the merge-based `cosine`.
class DenseQuery {
 public:
  explicit DenseQuery(std::size_t vocab_size) : weights_(vocab_size, 0.0) {}

  void assign(const SparseVector& query);

  /// weights <- max(weights, scale * agg), where agg is the elementwise max
  /// over `vectors`.
  template <typename Range>
  void max_update(const Range& vectors, double scale);

  double cosine(const SparseVector& doc) const;
  double norm() const { return norm_; }
  SparseVector to_sparse() const;

 private:
  void apply_max(const std::vector<SparseEntry>& agg, double scale);
  void recompute_norm();

  std::vector<double> weights_;
  std::vector<TermId> active_;  // sorted
  double norm_ = 0.0;
};

template <typename Range>
void DenseQuery::max_update(const Range& vectors, double scale) {
  std::vector<SparseEntry> all;
  for (const SparseVector* v : vectors) {
    all.insert(all.end(), v->entries().begin(), v->entries().end());
  }
  std::sort(all.begin(), all.end(), [](const SparseEntry& a, const SparseEntry& b) {
    return a.term < b.term;
  });
  std::vector<SparseEntry> agg;
  for (const auto& e : all) {
    if (!agg.empty() && agg.back().term == e.term) {
      agg.back().weight = std::max(agg.back().weight, e.weight);
    } else {
      agg.push_back(e);
    }
  }
  apply_max(agg, scale);
}

}  // namespace hoprank::detail
