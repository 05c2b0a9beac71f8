#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "golden_recipe.hpp"
#include "hoprank/cli.hpp"
#include "hoprank/config.hpp"
#include "hoprank/corpus.hpp"
#include "support.hpp"

using namespace hoprank;
using namespace hoprank::testing;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation hoprank_run(std::vector<std::string> args) {
  std::vector<const char*> argv{"hoprank"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int binary_exit_code(const std::string& args) {
  const std::string cmd = std::string(HOPRANK_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Two dev questions over four statements.
void write_tiny_dataset(const TempDir& dir) {
  write_file(dir / "tables/facts.tsv",
             "UID\tSUBJECT\tVERB\tOBJECT\n"
             "f1\tplants\tproduce\toxygen\n"
             "f2\tanimals\tbreathe\toxygen\n"
             "f3\tthe sun\tgives\tlight\n"
             "f4\ta magnet\tattracts\tiron\n");
  write_file(dir / "dev.tsv",
             "QuestionID\tquestion\tAnswerKey\n"
             "D1\tWhat do plants produce? (A) oxygen (B) iron\tA\n"
             "D2\tWhat does a magnet attract? (A) light (B) iron\tB\n");
  write_file(dir / "ratings.tsv", "D1\tf1\t3\nD1\tf2\t1\nD2\tf4\t2\n");
}

}  // namespace

TEST(Config, SectionsRelativePathsAndMembers) {
  TempDir dir;
  write_file(dir / "cfg/run.cfg",
             "# comment\n"
             "[paths]\n"
             "snapshot = ../snap\n"
             "stopwords = /abs/stop.txt\n"
             "ratings = a.tsv, b.tsv\n"
             "[retrieve]\n"
             "n0 = 8\n"
             "growth = 1.5\n"
             "method = tfidf\n"
             "[bm25]\n"
             "k1 = 1.2\n"
             "[eval]\n"
             "gain = linear\n"
             "[run]\n"
             "split = test\n"
             "seeds = 1, 2\n"
             "[ensemble]\n"
             "member = s/one.tsv:2.5\n"
             "member = s/two.tsv\n");
  RunConfig cfg;
  apply_config_file(cfg, dir / "cfg/run.cfg");
  const auto base = std::filesystem::absolute(dir / "cfg");
  EXPECT_EQ(cfg.snapshot_dir.lexically_normal(), (base / "../snap").lexically_normal());
  EXPECT_EQ(cfg.stopwords, "/abs/stop.txt");
  ASSERT_EQ(cfg.rating_files.size(), 2u);
  EXPECT_EQ(cfg.rating_files[1].filename(), "b.tsv");
  EXPECT_EQ(cfg.ibm.n0, 8u);
  EXPECT_EQ(cfg.ibm.growth, 1.5);
  EXPECT_EQ(cfg.method, RetrievalMethod::tfidf);
  EXPECT_EQ(cfg.ibm.bm25.k1, 1.2);
  EXPECT_EQ(cfg.eval.gain, Gain::linear);
  EXPECT_EQ(cfg.split, Split::test);
  EXPECT_EQ(cfg.seeds, (std::vector<long long>{1, 2}));
  ASSERT_EQ(cfg.ensemble_members.size(), 2u);
  EXPECT_EQ(cfg.ensemble_members[0].weight, 2.5);
  EXPECT_EQ(std::filesystem::path(cfg.ensemble_members[0].source).filename(), "one.tsv");
  EXPECT_EQ(cfg.ensemble_members[1].weight, 1.0);
}

TEST(Config, UnknownKeyNamesTheLine) {
  TempDir dir;
  write_file(dir / "bad.cfg", "[retrieve]\nn0 = 4\nfanciness = 3\n");
  RunConfig cfg;
  try {
    apply_config_file(cfg, dir / "bad.cfg");
    FAIL() << "expected UsageError";
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(apply_setting(cfg, "retrieve", "n0", "four"), UsageError);
  EXPECT_THROW(apply_setting(cfg, "eval", "gain", "cubic"), UsageError);
}

TEST(Config, ShippedConfigsLoad) {
  for (auto name : {"default.cfg", "tfidf_baseline.cfg", "ensemble_reproduction.cfg"}) {
    RunConfig cfg;
    EXPECT_NO_THROW(apply_config_file(cfg, kSourceDir / "data" / "configs" / name)) << name;
    EXPECT_NO_THROW(cfg.ibm.validate()) << name;
  }
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  auto r = hoprank_run({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(hoprank_run({"index", "--no-such-flag"}).code, 1);
  EXPECT_EQ(hoprank_run({}).code, 1);
}

TEST(Cli, MissingSnapshotIsDataErrorNamingThePath) {
  TempDir dir;
  const std::string missing = (dir / "nowhere").string();
  auto r = hoprank_run({"retrieve", "--snapshot", missing, "--output-dir", (dir / "out").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;
}

TEST(Cli, BinaryExitCodes) {
  TempDir dir;
  EXPECT_EQ(binary_exit_code("--help"), 0);
  EXPECT_EQ(binary_exit_code("frobnicate"), 1);
  EXPECT_EQ(binary_exit_code("index --snapshot " + (dir / "nowhere").string()), 2);
}

TEST(Cli, PerfectRunScoresOne) {
  TempDir dir;
  write_tiny_dataset(dir);
  const std::string snap = (dir / "snap").string();
  auto ingest = hoprank_run({"ingest", "--tables", (dir / "tables").string(), "--questions",
                             "dev=" + (dir / "dev.tsv").string(), "--ratings", (dir / "ratings.tsv").string(),
                             "--snapshot", snap});
  ASSERT_EQ(ingest.code, 0) << ingest.err;
  EXPECT_EQ(ingest.out.rfind("statements=4 questions=2 ratings=3", 0), 0u) << ingest.out;

  write_file(dir / "run.tsv", "D1\tf1\nD1\tf2\nD1\tf3\nD2\tf4\nD2\tf1\n");
  auto eval = hoprank_run({"evaluate", "--snapshot", snap, "--output-dir", (dir / "out").string(), "--run",
                           (dir / "run.tsv").string()});
  ASSERT_EQ(eval.code, 0) << eval.err;
  EXPECT_EQ(eval.out.rfind("mean_ndcg=1.000000 questions=2", 0), 0u) << eval.out;
  EXPECT_EQ(read_file(dir / "out/eval_report.tsv"), "question_id\tndcg\nD1\t1.000000\nD2\t1.000000\nall\t1.000000\n");
}

TEST(Cli, ConfigFromEnvironment) {
  TempDir dir;
  write_tiny_dataset(dir);
  write_file(dir / "env.cfg",
             "[paths]\ntables = tables\nquestions.dev = dev.tsv\nratings = ratings.tsv\nsnapshot = snap\n");
  ::setenv("HOPRANK_CONFIG", (dir / "env.cfg").c_str(), 1);
  auto r = hoprank_run({"ingest"});
  ::unsetenv("HOPRANK_CONFIG");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "snap" / "metadata.tsv"));
}

TEST(Cli, TuneWritesReportAndLoadableConfig) {
  TempDir dir;
  const auto cfg = (kFixtureDir / "pipeline.cfg").string();
  const std::string snap = (dir / "snap").string(), out = (dir / "out").string();
  ASSERT_EQ(hoprank_run({"--config", cfg, "ingest", "--snapshot", snap}).code, 0);
  auto r = hoprank_run({"--config", cfg, "tune", "--snapshot", snap, "--output-dir", out, "--n0", "2,4", "--k",
                        "24"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("configs=2 ", 0), 0u) << r.out;
  const auto report = read_file(dir / "out/tune_report.tsv");
  EXPECT_EQ(std::count(report.begin(), report.end(), '\n'), 3);
  RunConfig tuned;
  EXPECT_NO_THROW(apply_config_file(tuned, dir / "out/tuned.cfg"));
  EXPECT_EQ(tuned.ibm.k, 24u);
}

TEST(GoldenPipeline, SingleThread) {
  TempDir work;
  auto result = run_golden_recipe(work.path(), 1);
  for (const auto& m : result.mismatches) ADD_FAILURE() << m;
  EXPECT_TRUE(check_oracle_brute_force(work / "snapshot", work / "out/candidates.dev.tsv").empty());
}

TEST(GoldenPipeline, FourThreadsAndRerunAreIdentical) {
  TempDir work;
  auto first = run_golden_recipe(work.path(), 4);
  for (const auto& m : first.mismatches) ADD_FAILURE() << m;
  const auto candidates = read_file(work / "out/candidates.dev.tsv");
  auto second = run_golden_recipe(work.path(), 4);
  EXPECT_TRUE(second.mismatches.empty());
  EXPECT_EQ(first.stdout_text, second.stdout_text);
  EXPECT_EQ(read_file(work / "out/candidates.dev.tsv"), candidates);
}
