#include "hoprank/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include "hoprank/config.hpp"
#include "hoprank/corpus.hpp"
#include "hoprank/ensemble.hpp"
#include "hoprank/eval.hpp"
#include "hoprank/index.hpp"
#include "hoprank/retrieve.hpp"
#include "hoprank/textpipe.hpp"
#include "hoprank/tsv.hpp"

namespace fs = std::filesystem;

namespace hoprank {

namespace {

/// A flag that overrides one config setting when given.
struct Override {
  std::string section;
  std::string key;
  std::vector<std::string> values;
  CLI::Option* option = nullptr;
};

class Overrides {
 public:
  void add(CLI::App* app, const std::string& flag, const std::string& section,
           const std::string& key, const std::string& help, bool repeatable = false) {
    auto& o = items_.emplace_back(Override{section, key, {}, nullptr});
    o.option = app->add_option(flag, o.values, help);
    if (!repeatable) o.option->expected(1);
  }

  void apply(RunConfig& cfg) const {
    for (const auto& o : items_) {
      if (o.option->count() == 0) continue;
      for (const auto& v : o.values) apply_setting(cfg, o.section, o.key, v);
    }
  }

 private:
  std::deque<Override> items_;
};

void require_dir(const fs::path& p, const char* what) {
  if (p.empty()) throw UsageError(std::string(what) + " directory not set");
  if (!fs::is_directory(p)) throw DataError(std::string(what) + " directory not found: " + p.string());
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw UsageError(std::string(what) + " file not set");
  if (!fs::is_regular_file(p)) throw DataError(std::string(what) + " file not found: " + p.string());
}

PreprocessConfig load_preprocessing(const RunConfig& cfg) {
  if (!cfg.stopwords.empty()) require_file(cfg.stopwords, "stopword");
  if (!cfg.lemmas.empty()) require_file(cfg.lemmas, "lemma");
  return load_preprocess_config(cfg.preprocess_paths());
}

std::vector<std::string> question_ids(const std::vector<Question>& questions) {
  std::vector<std::string> ids;
  for (const auto& q : questions) ids.push_back(q.id);
  return ids;
}

void report_issues(std::ostream& err, const std::vector<RowIssue>& issues, const char* what) {
  constexpr std::size_t kShown = 5;
  for (std::size_t i = 0; i < issues.size() && i < kShown; ++i) {
    err << "warning: " << issues[i].source << ":" << issues[i].line << ": " << issues[i].message << '\n';
  }
  if (issues.size() > kShown) err << "warning: " << issues.size() - kShown << " more " << what << '\n';
}

struct Context {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
};

// ---------------------------------------------------------------------------

void cmd_ingest(Context& ctx) {
  auto& cfg = ctx.cfg;
  require_dir(cfg.tables_dir, "tables");
  if (cfg.snapshot_dir.empty()) throw UsageError("snapshot output directory not set (--snapshot)");
  for (const auto& [split, path] : cfg.question_files) require_file(path, "questions");
  for (const auto& path : cfg.rating_files) require_file(path, "ratings");

  std::vector<RowIssue> rejected;
  auto statements = load_tables(cfg.tables_dir, &rejected);
  report_issues(ctx.err, rejected, "rejected table rows");
  ctx.err << "loaded " << statements.size() << " statements from " << cfg.tables_dir.string() << '\n';

  std::vector<Question> questions;
  std::size_t skipped_questions = 0;
  for (const auto& [split, path] : cfg.question_files) {
    auto loaded = load_questions(path, split);
    report_issues(ctx.err, loaded.skipped, "skipped question rows");
    skipped_questions += loaded.skipped.size();
    ctx.err << "loaded " << loaded.questions.size() << " " << to_string(split) << " questions\n";
    for (auto& q : loaded.questions) questions.push_back(std::move(q));
  }

  RatingTable ratings;
  RatingsLoadReport rating_report;
  for (const auto& path : cfg.rating_files) {
    auto table = load_ratings(path, &rating_report);
    for (const auto& [qid, per_question] : table.by_question()) {
      for (const auto& [sid, r] : per_question) {
        if (ratings.set(qid, sid, r)) ++rating_report.duplicates;
      }
    }
  }
  report_issues(ctx.err, rating_report.errors, "rating row errors");
  if (rating_report.duplicates) {
    ctx.err << "warning: " << rating_report.duplicates << " duplicate ratings resolved to the maximum\n";
  }

  Corpus corpus(std::move(statements), std::move(questions), std::move(ratings));
  corpus.count_unknown_rating_ids(rating_report);
  if (rating_report.unknown_question_ids || rating_report.unknown_statement_ids) {
    ctx.err << "warning: ratings reference " << rating_report.unknown_question_ids
            << " unknown question ids and " << rating_report.unknown_statement_ids
            << " unknown statement ids (retained)\n";
  }
  write_snapshot(corpus, cfg.snapshot_dir);

  ctx.out << "statements=" << corpus.statements().size()
          << " questions=" << corpus.questions().size()
          << " ratings=" << corpus.ratings().size()
          << " max_rating=" << corpus.ratings().max_rating_observed()
          << " rejected_rows=" << rejected.size()
          << " skipped_questions=" << skipped_questions
          << " rating_errors=" << rating_report.errors.size()
          << " duplicate_ratings=" << rating_report.duplicates
          << " unknown_rating_ids="
          << rating_report.unknown_question_ids + rating_report.unknown_statement_ids << '\n';
}

struct Loaded {
  Corpus corpus;
  PreprocessConfig preprocess;
};

Loaded load_snapshot_and_preprocessing(Context& ctx) {
  require_dir(ctx.cfg.snapshot_dir, "snapshot");
  Loaded loaded{read_snapshot(ctx.cfg.snapshot_dir), load_preprocessing(ctx.cfg)};
  ctx.err << "snapshot: " << loaded.corpus.statements().size() << " statements, "
          << loaded.corpus.questions().size() << " questions, " << loaded.corpus.ratings().size()
          << " ratings\n";
  return loaded;
}

void cmd_index(Context& ctx, const std::string& dump_path) {
  auto loaded = load_snapshot_and_preprocessing(ctx);
  ctx.cfg.ibm.bm25.validate();
  auto index = build_statement_index(loaded.corpus.statements(), loaded.preprocess,
                                     ctx.cfg.ibm.bm25, ctx.cfg.threads);
  if (!dump_path.empty()) {
    auto out = tsv::open_output(dump_path);
    index.dump(out);
  }
  std::size_t empty_docs = 0;
  for (std::size_t d = 0; d < index.doc_count(); ++d) empty_docs += index.doc_length(d) == 0;
  ctx.out << "docs=" << index.doc_count() << " vocab=" << index.vocab().size()
          << " avg_doc_len=" << tsv::format_fixed(index.avg_doc_len())
          << " empty_docs=" << empty_docs << '\n';
}

std::vector<Ranking> retrieve_split(Context& ctx, const Loaded& loaded, const CorpusIndex& index,
                                    Split split) {
  const auto questions = loaded.corpus.questions_in(split);
  ctx.err << "retrieving " << questions.size() << " " << to_string(split) << " questions ("
          << to_string(ctx.cfg.method) << ")\n";
  return retrieve_all(questions, index, loaded.preprocess, ctx.cfg.ibm, ctx.cfg.method,
                      ctx.cfg.threads);
}

std::size_t item_count(const std::vector<Ranking>& rankings) {
  std::size_t n = 0;
  for (const auto& r : rankings) n += r.items.size();
  return n;
}

void cmd_retrieve(Context& ctx, const std::string& out_path) {
  ctx.cfg.ibm.validate();
  auto loaded = load_snapshot_and_preprocessing(ctx);
  auto index = build_statement_index(loaded.corpus.statements(), loaded.preprocess,
                                     ctx.cfg.ibm.bm25, ctx.cfg.threads);
  auto rankings = retrieve_split(ctx, loaded, index, ctx.cfg.split);
  const fs::path path = out_path.empty() ? ctx.cfg.output_dir / ("candidates." +
                                                                std::string(to_string(ctx.cfg.split)) + ".tsv")
                                         : fs::path(out_path);
  write_candidates(path, rankings);
  ctx.out << "method=" << to_string(ctx.cfg.method) << " split=" << to_string(ctx.cfg.split)
          << " questions=" << rankings.size() << " candidates=" << item_count(rankings) << '\n';
}

void cmd_export_candidates(Context& ctx, const std::string& splits_arg) {
  ctx.cfg.ibm.validate();
  std::vector<Split> splits;
  for (const auto& name : split_list(splits_arg)) {
    auto s = parse_split(name);
    if (!s) throw UsageError("unknown split '" + name + "'");
    splits.push_back(*s);
  }
  if (splits.empty()) throw UsageError("no splits selected");
  auto loaded = load_snapshot_and_preprocessing(ctx);
  auto index = build_statement_index(loaded.corpus.statements(), loaded.preprocess,
                                     ctx.cfg.ibm.bm25, ctx.cfg.threads);
  std::size_t questions = 0, candidates = 0;
  for (auto split : splits) {
    auto rankings = retrieve_split(ctx, loaded, index, split);
    write_candidates(ctx.cfg.output_dir / ("candidates." + std::string(to_string(split)) + ".tsv"),
                     rankings);
    questions += rankings.size();
    candidates += item_count(rankings);
  }
  ctx.out << "splits=" << splits_arg << " questions=" << questions << " candidates=" << candidates
          << '\n';
}

struct GridArgs {
  std::string n0, growth, downscale, k, k1, b, query_mode;
};

std::vector<IbmParams> expand_grid(const RunConfig& cfg, const GridArgs& args) {
  auto values = [](const std::string& arg, std::string fallback) {
    auto parts = split_list(arg.empty() ? fallback : arg);
    if (parts.empty()) throw UsageError("empty grid axis");
    return parts;
  };
  std::ostringstream n0, growth, downscale, k, k1, b;
  n0 << cfg.ibm.n0;
  growth << cfg.ibm.growth;
  downscale << cfg.ibm.downscale;
  k << cfg.ibm.k;
  k1 << cfg.ibm.bm25.k1;
  b << cfg.ibm.bm25.b;

  std::vector<IbmParams> grid;
  for (const auto& mode : values(args.query_mode, std::string(to_string(cfg.ibm.query_mode))))
  for (const auto& k1v : values(args.k1, k1.str()))
  for (const auto& bv : values(args.b, b.str()))
  for (const auto& n0v : values(args.n0, n0.str()))
  for (const auto& gv : values(args.growth, growth.str()))
  for (const auto& dv : values(args.downscale, downscale.str()))
  for (const auto& kv : values(args.k, k.str())) {
    RunConfig c = cfg;
    apply_setting(c, "retrieve", "query_mode", mode);
    apply_setting(c, "bm25", "k1", k1v);
    apply_setting(c, "bm25", "b", bv);
    apply_setting(c, "retrieve", "n0", n0v);
    apply_setting(c, "retrieve", "growth", gv);
    apply_setting(c, "retrieve", "downscale", dv);
    apply_setting(c, "retrieve", "k", kv);
    c.ibm.validate();
    grid.push_back(c.ibm);
  }
  return grid;
}

void cmd_tune(Context& ctx, const GridArgs& args, const std::string& report_path,
              const std::string& best_path) {
  auto grid = expand_grid(ctx.cfg, args);
  auto loaded = load_snapshot_and_preprocessing(ctx);
  const auto questions = loaded.corpus.questions_in(ctx.cfg.split);
  std::vector<std::string> ids;
  for (const auto& st : loaded.corpus.statements()) ids.push_back(st.id);
  IndexCache indexes(preprocess_statements(loaded.corpus.statements(), loaded.preprocess,
                                           ctx.cfg.threads),
                     std::move(ids));
  ctx.err << "tuning " << grid.size() << " configurations on " << questions.size() << " "
          << to_string(ctx.cfg.split) << " questions\n";
  auto result = tune(grid, questions, loaded.corpus.ratings(), indexes, loaded.preprocess,
                     ctx.cfg.threads);
  {
    auto out = tsv::open_output(report_path.empty() ? ctx.cfg.output_dir / "tune_report.tsv"
                                                    : fs::path(report_path));
    write_tune_report(out, result);
  }
  RunConfig best = ctx.cfg;
  best.ibm = result.best;
  best.method = RetrievalMethod::ibm25;
  {
    auto out = tsv::open_output(best_path.empty() ? ctx.cfg.output_dir / "tuned.cfg"
                                                  : fs::path(best_path));
    write_retrieval_config(out, best);
  }
  double objective = 0.0;
  for (const auto& row : result.report) {
    if (row.params == result.best) {
      objective = row.objective;
      break;
    }
  }
  const auto& p = result.best;
  ctx.out << "configs=" << grid.size() << " best_n0=" << p.n0 << " best_growth=" << p.growth
          << " best_downscale=" << p.downscale << " best_k=" << p.k
          << " best_query_mode=" << to_string(p.query_mode) << " best_k1=" << p.bm25.k1
          << " best_b=" << p.bm25.b << " objective=" << tsv::format_fixed(objective) << '\n';
}

std::vector<Ranking> load_run(const RunConfig& cfg, const std::string& run_path) {
  const fs::path path = run_path.empty() ? cfg.candidates : fs::path(run_path);
  require_file(path, "run");
  return read_candidates(path);
}

void cmd_evaluate(Context& ctx, const std::string& run_path, const std::string& report_path,
                  RunScoring scoring) {
  require_dir(ctx.cfg.snapshot_dir, "snapshot");
  auto rankings = load_run(ctx.cfg, run_path);
  auto corpus = read_snapshot(ctx.cfg.snapshot_dir);
  const auto scope = question_ids(corpus.questions_in(ctx.cfg.split));
  auto report = evaluate_run(rankings, corpus.ratings(), ctx.cfg.eval, &scope, scoring);
  const bool oracle = scoring == RunScoring::oracle_order;
  {
    const char* name = oracle ? "oracle_report.tsv" : "eval_report.tsv";
    auto out = tsv::open_output(report_path.empty() ? ctx.cfg.output_dir / name : fs::path(report_path));
    write_eval_report(out, report);
  }
  if (!report.zero_ideal.empty()) {
    ctx.err << "warning: " << report.zero_ideal.size()
            << " questions have no positively rated statements (scored 0)\n";
  }
  ctx.out << (oracle ? "mean_oracle_ndcg=" : "mean_ndcg=") << tsv::format_fixed(report.mean_ndcg)
          << " questions=" << report.question_count << " zero_ideal=" << report.zero_ideal.size()
          << " gain=" << to_string(ctx.cfg.eval.gain) << '\n';
}

void cmd_recall_curve(Context& ctx, const std::string& run_path, const std::string& depths_arg,
                      const std::string& out_path) {
  require_dir(ctx.cfg.snapshot_dir, "snapshot");
  std::vector<std::size_t> depths;
  for (const auto& d : split_list(depths_arg)) {
    auto v = tsv::parse_int(d);
    if (!v || *v <= 0) throw UsageError("bad depth '" + d + "'");
    depths.push_back(static_cast<std::size_t>(*v));
  }
  if (depths.empty()) throw UsageError("no depths given");
  auto rankings = load_run(ctx.cfg, run_path);
  auto corpus = read_snapshot(ctx.cfg.snapshot_dir);
  auto curve = recall_by_rating(rankings, corpus.ratings(), depths);
  {
    auto out = tsv::open_output(out_path.empty() ? ctx.cfg.output_dir / "recall_curve.tsv"
                                                 : fs::path(out_path));
    write_recall_curve(out, curve);
  }
  ctx.out << "questions=" << rankings.size();
  for (std::size_t i = 0; i < depths.size(); ++i) {
    ctx.out << " recall_positive_at_" << depths[i] << '=' << tsv::format_fixed(curve.positive[i]);
  }
  ctx.out << '\n';
}

void cmd_ensemble(Context& ctx, const std::string& out_path) {
  const auto& cfg = ctx.cfg;
  require_file(cfg.candidates, "candidates");
  if (cfg.ensemble_members.empty()) throw UsageError("no ensemble members (--scores)");
  EnsembleSpec spec{cfg.ensemble_members};
  spec.validate();

  auto candidates = read_candidates(cfg.candidates);
  std::vector<ScoreFile> scores;
  std::size_t warnings = 0;
  for (const auto& m : spec.members) {
    require_file(m.source, "score");
    scores.push_back(read_score_file(m.source));
    auto unknown = unknown_score_pairs(scores.back(), candidates);
    warnings += unknown.size();
    if (!unknown.empty()) {
      ctx.err << "warning: " << m.source << ": " << unknown.size()
              << " scored pairs are not candidates (ignored), e.g. " << unknown.front() << '\n';
    }
  }

  std::vector<Ranking> fused;
  fused.reserve(candidates.size());
  for (const auto& cand : candidates) {
    std::vector<Ranking> members;
    for (const auto& s : scores) members.push_back(score_to_ranking(cand, s));
    fused.push_back(aggregate(members, spec));
  }
  write_candidates(out_path.empty() ? cfg.output_dir / "ensemble.tsv" : fs::path(out_path), fused);
  ctx.out << "questions=" << fused.size() << " members=" << spec.members.size()
          << " warnings=" << warnings << '\n';
}

void cmd_submit(Context& ctx, const std::string& run_path, const std::string& out_path) {
  auto rankings = load_run(ctx.cfg, run_path);
  const fs::path path = out_path.empty() ? ctx.cfg.output_dir / "submission.tsv" : fs::path(out_path);
  write_submission(path, rankings);
  ctx.out << "questions=" << rankings.size() << " lines=" << item_count(rankings) << '\n';
}

}  // namespace

int run(int argc, const char* const argv[], std::ostream& out, std::ostream& err) {
  CLI::App app{"Explanation retrieval, ensembling and NDCG evaluation pipeline", "hoprank"};
  app.require_subcommand(1);

  std::string config_path;
  std::string threads;
  app.add_option("--config", config_path,
                 "Sectioned key=value config file (default: $HOPRANK_CONFIG)");
  app.add_option("--threads", threads, "Question-level worker threads (0 = all cores)");

  Overrides overrides;
  auto add_snapshot = [&](CLI::App* sub) {
    overrides.add(sub, "--snapshot", "paths", "snapshot", "Normalized snapshot directory");
  };
  auto add_output = [&](CLI::App* sub) {
    overrides.add(sub, "--output-dir", "paths", "output", "Directory for default output files");
  };
  auto add_preprocess = [&](CLI::App* sub) {
    overrides.add(sub, "--stopwords", "paths", "stopwords", "Stopword list (one per line)");
    overrides.add(sub, "--lemmas", "paths", "lemmas", "Lemma map (token<TAB>lemma)");
  };
  auto add_bm25 = [&](CLI::App* sub) {
    overrides.add(sub, "--k1", "bm25", "k1", "BM25 k1");
    overrides.add(sub, "--b", "bm25", "b", "BM25 b");
  };
  auto add_retrieval = [&](CLI::App* sub) {
    overrides.add(sub, "--method", "retrieve", "method", "ibm25 | bm25 | tfidf");
    overrides.add(sub, "--n0", "retrieve", "n0", "Initial selection size");
    overrides.add(sub, "--growth", "retrieve", "growth", "Selection size multiplier");
    overrides.add(sub, "--downscale", "retrieve", "downscale", "Aggregate down-scaling factor");
    overrides.add(sub, "--k", "retrieve", "k", "Candidate list length");
    overrides.add(sub, "--query-mode", "retrieve", "query_mode", "correct_answer_only | all_choices");
    add_bm25(sub);
  };
  auto add_split = [&](CLI::App* sub) {
    overrides.add(sub, "--split", "run", "split", "train | dev | test");
  };
  auto add_gain = [&](CLI::App* sub) {
    overrides.add(sub, "--gain", "eval", "gain", "exponential | linear");
  };

  auto* ingest = app.add_subcommand("ingest", "Load raw tables, questions and ratings into a snapshot");
  overrides.add(ingest, "--tables", "paths", "tables", "Directory of table .tsv files");
  std::vector<std::string> question_args;
  ingest->add_option("--questions", question_args, "SPLIT=PATH question file (repeatable)");
  overrides.add(ingest, "--ratings", "paths", "ratings", "Ratings file (repeatable)", true);
  add_snapshot(ingest);

  auto* index = app.add_subcommand("index", "Build the BM25 index and print statistics");
  std::string dump_path;
  index->add_option("--dump", dump_path, "Write a plain-text index dump");
  add_snapshot(index);
  add_preprocess(index);
  add_bm25(index);

  std::string out_path, run_path, report_path;

  auto* retrieve = app.add_subcommand("retrieve", "Retrieve candidates for one split");
  retrieve->add_option("--out", out_path, "Candidate file (default OUTPUT/candidates.SPLIT.tsv)");
  add_snapshot(retrieve);
  add_output(retrieve);
  add_preprocess(retrieve);
  add_retrieval(retrieve);
  add_split(retrieve);

  auto* export_cmd = app.add_subcommand("export-candidates",
                                        "Write candidate files for several splits");
  std::string splits_arg = "train,dev,test";
  export_cmd->add_option("--splits", splits_arg, "Comma-separated splits");
  add_snapshot(export_cmd);
  add_output(export_cmd);
  add_preprocess(export_cmd);
  add_retrieval(export_cmd);

  auto* tune_cmd = app.add_subcommand("tune", "Grid-search retrieval parameters by recall");
  GridArgs grid;
  tune_cmd->add_option("--n0", grid.n0, "Comma-separated n0 values");
  tune_cmd->add_option("--growth", grid.growth, "Comma-separated growth values");
  tune_cmd->add_option("--downscale", grid.downscale, "Comma-separated downscale values");
  tune_cmd->add_option("--k", grid.k, "Comma-separated K values");
  tune_cmd->add_option("--k1", grid.k1, "Comma-separated BM25 k1 values");
  tune_cmd->add_option("--b", grid.b, "Comma-separated BM25 b values");
  tune_cmd->add_option("--query-mode", grid.query_mode, "Comma-separated query modes");
  tune_cmd->add_option("--report", report_path, "Report file (default OUTPUT/tune_report.tsv)");
  std::string best_path;
  tune_cmd->add_option("--best-out", best_path, "Best config (default OUTPUT/tuned.cfg)");
  add_snapshot(tune_cmd);
  add_output(tune_cmd);
  add_preprocess(tune_cmd);
  add_split(tune_cmd);

  auto* evaluate = app.add_subcommand("evaluate", "NDCG of a run over one split");
  auto* oracle = app.add_subcommand("oracle", "Oracle NDCG of a run over one split");
  for (auto* sub : {evaluate, oracle}) {
    sub->add_option("--run", run_path, "Run or candidate file");
    sub->add_option("--report", report_path, "Per-question report file");
    add_snapshot(sub);
    add_output(sub);
    add_split(sub);
    add_gain(sub);
  }

  auto* recall = app.add_subcommand("recall-curve", "Recall by rating at several depths");
  std::string depths = "10,20,50,100,200,500,1000";
  recall->add_option("--run", run_path, "Run or candidate file");
  recall->add_option("--depths", depths, "Comma-separated depths");
  recall->add_option("--out", out_path, "Curve file (default OUTPUT/recall_curve.tsv)");
  add_snapshot(recall);
  add_output(recall);

  auto* ensemble = app.add_subcommand("ensemble", "Fuse re-ranker score files by rank");
  overrides.add(ensemble, "--candidates", "paths", "candidates", "Candidate file");
  std::vector<std::string> score_args;
  ensemble->add_option("--scores", score_args, "PATH[:WEIGHT] score file (repeatable)");
  ensemble->add_option("--out", out_path, "Fused run (default OUTPUT/ensemble.tsv)");
  add_output(ensemble);

  auto* submit = app.add_subcommand("submit", "Write a submission file from a run");
  submit->add_option("--run", run_path, "Run or candidate file");
  submit->add_option("--out", out_path, "Submission file (default OUTPUT/submission.tsv)");
  add_output(submit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  Context ctx{RunConfig{}, out, err};
  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv("HOPRANK_CONFIG"); env != nullptr && *env != '\0') {
        config_path = env;
      }
    }
    if (!config_path.empty()) apply_config_file(ctx.cfg, config_path);
    overrides.apply(ctx.cfg);
    if (!threads.empty()) apply_setting(ctx.cfg, "run", "threads", threads);
    for (const auto& arg : question_args) {
      auto eq = arg.find('=');
      if (eq == std::string::npos) throw UsageError("--questions expects SPLIT=PATH");
      apply_setting(ctx.cfg, "paths", "questions." + arg.substr(0, eq), arg.substr(eq + 1));
    }
    if (!score_args.empty()) {
      ctx.cfg.ensemble_members.clear();
      for (const auto& arg : score_args) apply_setting(ctx.cfg, "ensemble", "member", arg);
    }

    if (ingest->parsed()) cmd_ingest(ctx);
    if (index->parsed()) cmd_index(ctx, dump_path);
    if (retrieve->parsed()) cmd_retrieve(ctx, out_path);
    if (export_cmd->parsed()) cmd_export_candidates(ctx, splits_arg);
    if (tune_cmd->parsed()) cmd_tune(ctx, grid, report_path, best_path);
    if (evaluate->parsed()) cmd_evaluate(ctx, run_path, report_path, RunScoring::submitted_order);
    if (oracle->parsed()) cmd_evaluate(ctx, run_path, report_path, RunScoring::oracle_order);
    if (recall->parsed()) cmd_recall_curve(ctx, run_path, depths, out_path);
    if (ensemble->parsed()) cmd_ensemble(ctx, out_path);
    if (submit->parsed()) cmd_submit(ctx, run_path, out_path);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace hoprank
