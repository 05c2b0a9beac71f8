#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hoprank/index.hpp"
#include "support.hpp"

using namespace hoprank;
using namespace hoprank::testing;

TEST(Bm25, WeightMatchesHandEvaluation) {
  // N=3, tf=2, |d|=4, avg=4, df=1, k1=1.5, b=0.75
  const double expected = std::log(1.0 + 2.5 / 1.5) * (2.0 * 2.5 / (2.0 + 1.5));
  EXPECT_NEAR(expected, 1.40119, 1e-5);
  EXPECT_NEAR(bm25_weight(2.0, 4.0, 4.0, bm25_idf(3, 1), {}), expected, 1e-12);

  auto index = make_index({{"d0", "t t x y"}, {"d1", "p q r s"}, {"d2", "u v w z"}});
  ASSERT_DOUBLE_EQ(index.avg_doc_len(), 4.0);
  const TermId t = *index.vocab().find("t");
  EXPECT_NEAR(index.doc_vector(0).weight(t), 1.40119, 1e-5);
}

TEST(Bm25, SingleDocumentIdf) {
  EXPECT_NEAR(bm25_idf(1, 1), std::log(4.0 / 3.0), 1e-12);
  EXPECT_NEAR(bm25_idf(1, 1), 0.28768, 1e-5);
}

TEST(Bm25, IdfIsPositiveEvenForUbiquitousTerms) {
  for (std::size_t n = 1; n < 50; ++n) EXPECT_GT(bm25_idf(n, n), 0.0);
}

TEST(Index, AbsentTermHasNoEntry) {
  auto index = make_index({{"d0", "a b"}, {"d1", "c"}});
  const TermId c = *index.vocab().find("c");
  for (const auto& e : index.doc_vector(0).entries()) EXPECT_NE(e.term, c);
  EXPECT_EQ(index.doc_vector(0).size(), 2u);
}

TEST(Index, DenseIdsInFirstAppearanceOrder) {
  auto index = make_index({{"d0", "b a"}, {"d1", "c a"}});
  EXPECT_EQ(*index.vocab().find("b"), 0u);
  EXPECT_EQ(*index.vocab().find("a"), 1u);
  EXPECT_EQ(*index.vocab().find("c"), 2u);
  EXPECT_EQ(index.doc_freq(1), 2u);
}

TEST(Index, BuildErrors) {
  EXPECT_THROW(make_index({}), DataError);
  EXPECT_THROW(make_index({{"d0", ""}, {"d1", ""}}), DataError);
  EXPECT_THROW(make_index({{"d0", "a"}, {"d0", "b"}}), DataError);
  EXPECT_THROW(make_index({{"d0", "a"}}, {0.0, 0.75}), UsageError);
}

TEST(Index, RebuildIsBitIdentical) {
  std::mt19937_64 rng(5);
  auto corpus = random_corpus(rng, 80, 30);
  auto a = make_index(corpus), b = make_index(corpus);
  for (std::size_t d = 0; d < a.doc_count(); ++d) EXPECT_EQ(a.doc_vector(d), b.doc_vector(d));
  std::ostringstream da, db;
  a.dump(da);
  b.dump(db);
  EXPECT_EQ(da.str(), db.str());
}

TEST(QueryVector, AllOutOfVocabularyIsEmpty) {
  auto index = make_index({{"d0", "a b"}});
  EXPECT_TRUE(query_vector(tokens("x y"), index, Weighting::bm25).empty());
}

TEST(QueryVector, QueryEqualToDocumentGivesSameVector) {
  auto index = make_index({{"d0", "a b b c"}, {"d1", "a d"}, {"d2", "e"}});
  EXPECT_EQ(query_vector(tokens("a b b c"), index, Weighting::bm25), index.doc_vector(0));
}

TEST(QueryVector, TfidfSingleToken) {
  auto index = make_index({{"d0", "a b"}, {"d1", "a c"}, {"d2", "d"}, {"d3", "e"}});
  auto q = query_vector(tokens("a"), index, Weighting::tfidf);
  ASSERT_EQ(q.size(), 1u);
  EXPECT_NEAR(q.entries()[0].weight, std::log(2.0), 1e-12);
  EXPECT_NEAR(q.entries()[0].weight, 0.69315, 1e-5);
}

TEST(QueryVector, TfidfDropsTermsPresentEverywhere) {
  auto index = make_index({{"d0", "a b"}, {"d1", "a c"}});
  EXPECT_TRUE(query_vector(tokens("a"), index, Weighting::tfidf).empty());
  EXPECT_EQ(index.tfidf_vector(0).size(), 1u);
}

TEST(Cosine, HandExample) {
  auto a = SparseVector::from_entries({{0, 1.0}, {1, 1.0}});
  auto b = SparseVector::from_entries({{1, 1.0}, {2, 1.0}});
  EXPECT_NEAR(cosine(a, b), 0.5, 1e-12);
}

TEST(Cosine, DisjointAndEmpty) {
  auto a = SparseVector::from_entries({{0, 1.0}});
  auto b = SparseVector::from_entries({{1, 2.0}});
  EXPECT_EQ(cosine(a, b), 0.0);
  EXPECT_EQ(cosine(a, SparseVector{}), 0.0);
}

TEST(Cosine, SelfIsOne) {
  auto a = SparseVector::from_entries({{3, 0.3}, {7, 2.5}, {9, 1.0}});
  EXPECT_NEAR(cosine(a, a), 1.0, 1e-15);
}

TEST(SparseVector, FromEntriesSortsMergesAndDropsNonPositive) {
  auto v = SparseVector::from_entries({{5, 1.0}, {2, 0.5}, {5, 2.0}, {3, 0.0}, {4, -1.0}});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v.entries()[0], (SparseEntry{2, 0.5}));
  EXPECT_EQ(v.entries()[1], (SparseEntry{5, 3.0}));
  EXPECT_NEAR(v.norm(), std::sqrt(0.25 + 9.0), 1e-12);
}

TEST(CosineRank, ZeroKIsAnError) {
  auto index = make_index({{"d0", "a"}});
  EXPECT_THROW(cosine_rank(query_vector(tokens("a"), index, Weighting::bm25), index, Weighting::bm25, 0),
               UsageError);
}

TEST(CosineRank, LargeKReturnsWholeCorpus) {
  auto index = make_index({{"d2", "a"}, {"d0", "b"}, {"d1", "a b"}});
  auto r = cosine_rank(query_vector(tokens("a"), index, Weighting::bm25), index, Weighting::bm25, 10);
  EXPECT_EQ(r.ids(), (std::vector<std::string>{"d2", "d1", "d0"}));
}

TEST(CosineRank, IdenticalDocumentRanksFirst) {
  auto index = make_index({{"d0", "a b c"}, {"d1", "a b"}, {"d2", "c d e"}, {"d3", "a"}});
  auto r = cosine_rank(query_vector(tokens("c d e"), index, Weighting::bm25), index, Weighting::bm25, 2);
  ASSERT_EQ(r.items.size(), 2u);
  EXPECT_EQ(r.items[0].statement_id, "d2");
  EXPECT_NEAR(*r.items[0].score, 1.0, 1e-12);
}

TEST(CosineRank, TiesBreakByIdNotPosition) {
  auto index = make_index({{"zeta", "a"}, {"alpha", "a"}, {"mid", "a"}});
  auto r = cosine_rank(query_vector(tokens("a"), index, Weighting::bm25), index, Weighting::bm25, 3);
  EXPECT_EQ(r.ids(), (std::vector<std::string>{"alpha", "mid", "zeta"}));
}
