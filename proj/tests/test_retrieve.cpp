#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hoprank/retrieve.hpp"
#include "support.hpp"

using namespace hoprank;
using namespace hoprank::testing;

namespace {

// Every document has length 2, the average, so a document weight is the idf:
// ln 2 for apple and banana (df 2) and ln(10/3) for the df-1 terms.
CorpusIndex four_statements() {
  return make_index({{"s1", "apple banana"}, {"s2", "apple cherry"}, {"s4", "banana date"}, {"s3", "elder fig"}});
}

IbmParams params(std::size_t n0, double growth, double downscale, std::size_t k) {
  IbmParams p;
  p.n0 = n0;
  p.growth = growth;
  p.downscale = downscale;
  p.k = k;
  return p;
}

Question question(const std::string& id, const std::string& text) {
  return Question{id, text, {{'A', text}}, 'A', Split::dev};
}

}  // namespace

TEST(Ibm25, HandTraceOfFourStatements) {
  auto index = four_statements();
  const double ln2 = std::log(2.0), rare = std::log(10.0 / 3.0);
  // Query "apple": length 1 against average 2.
  const double q_apple = ln2 * 2.5 / (1.0 + 1.5 * (0.25 + 0.75 * 0.5));

  // Iteration 1 (n=2): s1 scores 1/sqrt2, s2 scores ln2/|s2|, s3 and s4 score 0.
  // The selected vectors add banana (ln2) and cherry (ln 10/3) to the query.
  // Iteration 2 (n=2): s4 now shares banana and outranks s3.
  const double s2_norm = std::sqrt(ln2 * ln2 + rare * rare);
  const double q2_norm = std::sqrt(q_apple * q_apple + ln2 * ln2 + rare * rare);
  const double expected_scores[] = {1.0 / std::sqrt(2.0), ln2 / s2_norm, ln2 * ln2 / (q2_norm * s2_norm), 0.0};

  std::vector<std::size_t> iteration_sizes;
  auto out = ibm25_retrieve(query_vector(tokens("apple"), index, Weighting::bm25), index,
                            params(2, 1.0, 1.0, 4),
                            [&](const IterationState& s) { iteration_sizes.push_back(s.selected.size()); });
  EXPECT_EQ(out.ids(), (std::vector<std::string>{"s1", "s2", "s4", "s3"}));
  ASSERT_EQ(out.items.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(*out.items[i].score, expected_scores[i], 1e-12) << i;
  EXPECT_EQ(iteration_sizes, (std::vector<std::size_t>{2, 2}));

  // Without the query update s3 and s4 tie at 0 and fall back to id order.
  auto plain = ibm25_retrieve(query_vector(tokens("apple"), index, Weighting::bm25), index, params(2, 1.0, 0.0, 4));
  EXPECT_EQ(plain.ids(), (std::vector<std::string>{"s1", "s2", "s3", "s4"}));
}

TEST(Ibm25, SingleStatementCorpus) {
  auto index = make_index({{"only", "water boils"}});
  auto out = ibm25_retrieve(query_vector(tokens("ice"), index, Weighting::bm25), index, params(1, 2.0, 0.5, 5));
  EXPECT_EQ(out.ids(), (std::vector<std::string>{"only"}));
}

TEST(Ibm25, TruncatesToK) {
  auto index = four_statements();
  auto out = ibm25_retrieve(query_vector(tokens("apple"), index, Weighting::bm25), index, params(1, 2.0, 0.5, 3));
  EXPECT_EQ(out.items.size(), 3u);
}

TEST(IbmParams, Validation) {
  EXPECT_NO_THROW(IbmParams{}.validate());
  EXPECT_THROW(params(0, 2.0, 0.5, 10).validate(), UsageError);
  EXPECT_THROW(params(4, 0.9, 0.5, 10).validate(), UsageError);
  EXPECT_THROW(params(4, 2.0, 1.5, 10).validate(), UsageError);
  EXPECT_THROW(params(4, 2.0, -0.1, 10).validate(), UsageError);
  EXPECT_THROW(params(4, 2.0, 0.5, 3).validate(), UsageError);
}

TEST(Tune, TwoQuestionHandComputation) {
  PreprocessConfig identity;
  const std::vector<Question> qs{question("Q1", "apple"), question("Q2", "date")};
  const auto ratings = ratings_of({{"Q1", "s1", 2}, {"Q1", "s2", 1}, {"Q1", "s4", 1}, {"Q2", "s4", 1}, {"Q2", "s3", 2}});
  std::vector<std::string> ids{"s1", "s2", "s4", "s3"};
  IndexCache cache({tokens("apple banana"), tokens("apple cherry"), tokens("banana date"), tokens("elder fig")}, ids);

  // A retrieves Q1 {s1}, Q2 {s4}: category 1 (0 + 1)/2, category 2 (1 + 0)/2.
  // B retrieves Q1 {s1,s2}, Q2 {s4,s1}: category 1 (1/2 + 1)/2, category 2 (1 + 0)/2.
  // C retrieves exactly what B does and loses the tie by grid order.
  const std::vector<IbmParams> grid{params(1, 2.0, 0.5, 1), params(2, 1.0, 0.5, 2), params(2, 3.0, 0.5, 2)};
  auto result = tune(grid, qs, ratings, cache, identity);
  ASSERT_EQ(result.report.size(), 3u);
  EXPECT_NEAR(result.report[0].objective, (0.5 + 0.5) / 2, 1e-12);
  EXPECT_NEAR(result.report[1].objective, (0.75 + 0.5) / 2, 1e-12);
  EXPECT_NEAR(result.report[1].per_category.at(1), 0.75, 1e-12);
  EXPECT_NEAR(result.report[1].per_category.at(2), 0.5, 1e-12);
  EXPECT_EQ(result.report[2].objective, result.report[1].objective);
  EXPECT_EQ(result.best, grid[1]);

  std::ostringstream report;
  write_tune_report(report, result);
  const auto text = report.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Tune, SingletonGrid) {
  PreprocessConfig identity;
  const std::vector<Question> qs{question("Q1", "apple")};
  IndexCache cache({tokens("apple banana"), tokens("cherry")}, {"a", "b"});
  const std::vector<IbmParams> grid{params(1, 2.0, 0.5, 1)};
  auto result = tune(grid, qs, ratings_of({{"Q1", "a", 1}}), cache, identity);
  EXPECT_EQ(result.report.size(), 1u);
  EXPECT_EQ(result.best, grid[0]);
  EXPECT_EQ(result.report[0].objective, 1.0);
}

TEST(Tune, Errors) {
  PreprocessConfig identity;
  const std::vector<Question> qs{question("Q1", "apple")};
  IndexCache cache({tokens("apple")}, {"a"});
  EXPECT_THROW(tune({}, qs, ratings_of({{"Q1", "a", 1}}), cache, identity), UsageError);
  const std::vector<IbmParams> grid{params(1, 2.0, 0.5, 1)};
  EXPECT_THROW(tune(grid, qs, ratings_of({{"Q1", "a", 0}}), cache, identity), DataError);
}

TEST(RetrieveAll, MethodsAndQuestionOrder) {
  auto index = four_statements();
  PreprocessConfig identity;
  const std::vector<Question> qs{question("Q2", "date"), question("Q1", "apple")};
  for (auto method : {RetrievalMethod::ibm25, RetrievalMethod::bm25, RetrievalMethod::tfidf}) {
    auto runs = retrieve_all(qs, index, identity, params(1, 2.0, 0.5, 2), method, 3);
    ASSERT_EQ(runs.size(), 2u);
    EXPECT_EQ(runs[0].question_id, "Q2");
    EXPECT_EQ(runs[0].items.front().statement_id, "s4") << to_string(method);
    EXPECT_EQ(runs[1].items.front().statement_id, "s1") << to_string(method);
  }
}

TEST(Candidates, RoundTrip) {
  std::vector<Ranking> runs{{"Q1", {{"a", 0.5}, {"b", 0.25}}}, {"Q2", {{"c", std::nullopt}}}};
  TempDir dir;
  write_candidates(dir / "c.tsv", runs);
  EXPECT_EQ(read_file(dir / "c.tsv"),
            "question_id\trank\tstatement_id\tscore\nQ1\t0\ta\t0.500000\nQ1\t1\tb\t0.250000\nQ2\t0\tc\t\n");
  EXPECT_EQ(read_candidates(dir / "c.tsv"), runs);
}

TEST(Candidates, ReadsSubmissionFormat) {
  TempDir dir;
  write_file(dir / "s.tsv", "Q1\ta\nQ1\tb\nQ2\tc\n");
  auto runs = read_candidates(dir / "s.tsv");
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].ids(), (std::vector<std::string>{"a", "b"}));
}

TEST(Candidates, RejectsMalformedFiles) {
  TempDir dir;
  const std::string header = "question_id\trank\tstatement_id\tscore\n";
  write_file(dir / "gap.tsv", header + "Q1\t0\ta\t\nQ1\t2\tb\t\n");
  EXPECT_THROW(read_candidates(dir / "gap.tsv"), DataError);
  write_file(dir / "dup.tsv", header + "Q1\t0\ta\t\nQ1\t1\ta\t\n");
  EXPECT_THROW(read_candidates(dir / "dup.tsv"), DataError);
  write_file(dir / "split.tsv", header + "Q1\t0\ta\t\nQ2\t0\tb\t\nQ1\t1\tc\t\n");
  EXPECT_THROW(read_candidates(dir / "split.tsv"), DataError);
}
