#include "hoprank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>

#include "hoprank/tsv.hpp"

namespace fs = std::filesystem;

namespace hoprank {

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool header_has_uid_token(std::string_view header) {
  std::string token;
  auto flush = [&]() {
    bool hit = lower_ascii(token) == "uid";
    token.clear();
    return hit;
  };
  for (char c : header) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      token += c;
    } else if (flush()) {
      return true;
    }
  }
  return flush();
}

bool header_is_skipped(std::string_view header) {
  return lower_ascii(header).find("[skip]") != std::string::npos;
}

std::string source_of(const fs::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line);
}

}  // namespace

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view name) {
  auto lower = lower_ascii(tsv::trim(name));
  if (lower == "train") return Split::train;
  if (lower == "dev") return Split::dev;
  if (lower == "test") return Split::test;
  return std::nullopt;
}

std::string_view to_string(QueryMode mode) {
  return mode == QueryMode::all_choices ? "all_choices" : "correct_answer_only";
}

std::optional<QueryMode> parse_query_mode(std::string_view name) {
  if (name == "correct_answer_only") return QueryMode::correct_answer_only;
  if (name == "all_choices") return QueryMode::all_choices;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// RatingTable

bool RatingTable::set(const std::string& question_id, const std::string& statement_id,
                      int rating) {
  auto& per_question = by_question_[question_id];
  auto [it, inserted] = per_question.emplace(statement_id, rating);
  if (inserted) {
    ++size_;
  } else {
    it->second = std::max(it->second, rating);
  }
  max_rating_ = std::max(max_rating_, rating);
  return !inserted;
}

std::optional<int> RatingTable::rating(std::string_view question_id,
                                       std::string_view statement_id) const {
  const auto* per_question = for_question(question_id);
  if (per_question == nullptr) return std::nullopt;
  auto it = per_question->find(std::string(statement_id));
  if (it == per_question->end()) return std::nullopt;
  return it->second;
}

const RatingTable::QuestionRatings* RatingTable::for_question(std::string_view question_id) const {
  auto it = by_question_.find(question_id);
  return it == by_question_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Tables

std::vector<ExplanationStatement> load_table_file(const fs::path& file,
                                                  std::vector<RowIssue>* rejected) {
  std::vector<ExplanationStatement> out;
  std::vector<std::string> headers;
  std::size_t uid_column = 0;
  std::vector<bool> skipped;
  const std::string table_name = file.stem().string();

  tsv::for_each_line(file, [&](std::string_view line, std::size_t number) {
    if (headers.empty()) {
      for (auto cell : tsv::split(line)) headers.emplace_back(tsv::trim(cell));
      std::vector<std::size_t> uid_columns;
      for (std::size_t i = 0; i < headers.size(); ++i) {
        if (header_has_uid_token(headers[i])) uid_columns.push_back(i);
        skipped.push_back(header_is_skipped(headers[i]));
      }
      if (uid_columns.size() != 1) {
        throw DataError(file.string() + ": expected exactly one UID header column, found " +
                        std::to_string(uid_columns.size()));
      }
      uid_column = uid_columns.front();
      return;
    }
    if (tsv::trim(line).empty()) return;

    auto cells = tsv::split(line);
    auto cell = [&](std::size_t i) {
      return i < cells.size() ? tsv::trim(cells[i]) : std::string_view{};
    };
    ExplanationStatement st;
    st.id = std::string(cell(uid_column));
    st.table_name = table_name;
    if (st.id.empty()) {
      if (rejected) rejected->push_back({file.string(), number, "empty UID"});
      return;
    }
    for (std::size_t i = 0; i < headers.size(); ++i) {
      if (i == uid_column) continue;
      auto value = cell(i);
      if (value.empty()) continue;
      if (skipped[i]) {
        st.is_skipped_combined = true;
        continue;
      }
      if (!st.text.empty()) st.text += ' ';
      st.text += value;
    }
    if (st.text.empty()) {
      if (rejected) rejected->push_back({file.string(), number, "empty statement text"});
      return;
    }
    out.push_back(std::move(st));
  });
  return out;
}

std::vector<ExplanationStatement> load_tables(const fs::path& dir,
                                              std::vector<RowIssue>* rejected) {
  if (!fs::is_directory(dir)) throw DataError("tables directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<ExplanationStatement> all;
  std::unordered_map<std::string, std::string> origin;
  for (const auto& file : files) {
    for (auto& st : load_table_file(file, rejected)) {
      auto [it, inserted] = origin.emplace(st.id, file.string());
      if (!inserted) {
        throw DataError("duplicate UID " + st.id + " in " + it->second + " and " +
                        file.string());
      }
      all.push_back(std::move(st));
    }
  }
  return all;
}

// ---------------------------------------------------------------------------
// Questions

std::pair<std::string, std::map<char, std::string>> parse_choices(std::string_view full_text) {
  auto find_markers = [&](char first) {
    std::vector<std::pair<char, std::size_t>> markers;
    std::size_t from = 0;
    for (char label = first;; ++label) {
      const char marker[] = {'(', label, ')', '\0'};
      auto pos = full_text.find(marker, from);
      if (pos == std::string_view::npos) break;
      markers.emplace_back(label, pos);
      from = pos + 3;
    }
    return markers;
  };
  auto markers = find_markers('A');
  char offset = 0;
  if (markers.empty()) {
    markers = find_markers('1');
    offset = 'A' - '1';
  }
  if (markers.empty()) return {std::string(tsv::trim(full_text)), {}};

  std::map<char, std::string> choices;
  for (std::size_t i = 0; i < markers.size(); ++i) {
    auto begin = markers[i].second + 3;
    auto end = i + 1 < markers.size() ? markers[i + 1].second : full_text.size();
    choices[static_cast<char>(markers[i].first + offset)] =
        std::string(tsv::trim(full_text.substr(begin, end - begin)));
  }
  return {std::string(tsv::trim(full_text.substr(0, markers.front().second))), std::move(choices)};
}

QuestionsLoadResult load_questions(const fs::path& file, Split split) {
  QuestionsLoadResult result;
  std::optional<std::size_t> id_col, text_col, key_col;
  bool header_seen = false;
  std::unordered_map<std::string, std::size_t> seen;

  tsv::for_each_line(file, [&](std::string_view line, std::size_t number) {
    if (!header_seen) {
      header_seen = true;
      auto cells = tsv::split(line);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        auto name = lower_ascii(tsv::trim(cells[i]));
        if (!id_col && (name == "questionid" || name == "question_id" || name == "id")) id_col = i;
        if (!text_col && name == "question") text_col = i;
        if (!key_col && (name == "answerkey" || name == "answer_key")) key_col = i;
      }
      if (!id_col || !text_col || !key_col) {
        throw DataError(file.string() +
                        ": header must name QuestionID, question and AnswerKey columns");
      }
      return;
    }
    if (tsv::trim(line).empty()) return;
    auto cells = tsv::split(line);
    auto cell = [&](std::size_t i) {
      return i < cells.size() ? tsv::trim(cells[i]) : std::string_view{};
    };

    Question q;
    q.id = std::string(cell(*id_col));
    q.split = split;
    if (q.id.empty()) {
      result.skipped.push_back({file.string(), number, "empty question id"});
      return;
    }
    auto [stem, choices] = parse_choices(cell(*text_col));
    q.question_text = std::move(stem);
    q.choices = std::move(choices);

    auto key = cell(*key_col);
    char letter = 0;
    if (key.size() == 1 && key[0] >= '1' && key[0] <= '9') {
      letter = static_cast<char>('A' + (key[0] - '1'));
    } else if (key.size() == 1 && std::isalpha(static_cast<unsigned char>(key[0]))) {
      letter = static_cast<char>(std::toupper(static_cast<unsigned char>(key[0])));
    }
    if (letter == 0 || !q.choices.contains(letter)) {
      result.skipped.push_back({file.string(), number,
                                "answer key '" + std::string(key) + "' matches no choice"});
      return;
    }
    q.answer_key = letter;
    if (auto [it, inserted] = seen.emplace(q.id, number); !inserted) {
      throw DataError(source_of(file, number) + ": duplicate question id " + q.id +
                      " (first at line " + std::to_string(it->second) + ")");
    }
    result.questions.push_back(std::move(q));
  });
  return result;
}

std::string question_query_text(const Question& q, QueryMode mode) {
  std::string out = q.question_text;
  auto append = [&](const std::string& s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  if (mode == QueryMode::correct_answer_only) {
    auto it = q.choices.find(q.answer_key);
    if (it != q.choices.end()) append(it->second);
  } else {
    for (const auto& [letter, text] : q.choices) append(text);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ratings

RatingTable load_ratings(const fs::path& file, RatingsLoadReport* report) {
  RatingTable table;
  RatingsLoadReport local;
  RatingsLoadReport& rep = report ? *report : local;
  bool first_row = true;

  tsv::for_each_line(file, [&](std::string_view line, std::size_t number) {
    if (tsv::trim(line).empty()) return;
    const bool is_first = first_row;
    first_row = false;
    const char sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
    auto cells = tsv::split(line, sep);
    if (cells.size() < 3) {
      rep.errors.push_back({file.string(), number, "expected 3 fields"});
      return;
    }
    auto qid = tsv::trim(cells[0]);
    auto sid = tsv::trim(cells[1]);
    auto rating = tsv::parse_int(cells[2]);
    if (!rating) {
      if (is_first) return;  // header
      rep.errors.push_back({file.string(), number,
                            "non-integer rating '" + std::string(tsv::trim(cells[2])) + "'"});
      return;
    }
    if (*rating < 0) {
      rep.errors.push_back({file.string(), number, "negative rating"});
      return;
    }
    if (qid.empty() || sid.empty()) {
      rep.errors.push_back({file.string(), number, "empty id"});
      return;
    }
    if (table.set(std::string(qid), std::string(sid), static_cast<int>(*rating))) {
      ++rep.duplicates;
    }
  });
  return table;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<ExplanationStatement> statements, std::vector<Question> questions,
               RatingTable ratings)
    : statements_(std::move(statements)),
      questions_(std::move(questions)),
      ratings_(std::move(ratings)) {
  statement_lookup_.reserve(statements_.size());
  for (std::size_t i = 0; i < statements_.size(); ++i) {
    const auto& st = statements_[i];
    if (st.id.empty()) throw DataError("statement with empty id");
    if (st.text.empty()) throw DataError("statement " + st.id + " has empty text");
    if (!statement_lookup_.emplace(st.id, i).second) {
      throw DataError("duplicate statement id " + st.id);
    }
  }
  for (std::size_t i = 0; i < questions_.size(); ++i) {
    const auto& q = questions_[i];
    if (!q.choices.contains(q.answer_key)) {
      throw DataError("question " + q.id + ": answer key not among choices");
    }
    if (!question_lookup_.emplace(q.id, i).second) {
      throw DataError("duplicate question id " + q.id);
    }
  }
}

const ExplanationStatement* Corpus::find_statement(std::string_view id) const {
  auto it = statement_lookup_.find(std::string(id));
  return it == statement_lookup_.end() ? nullptr : &statements_[it->second];
}

const Question* Corpus::find_question(std::string_view id) const {
  auto it = question_lookup_.find(std::string(id));
  return it == question_lookup_.end() ? nullptr : &questions_[it->second];
}

std::vector<Question> Corpus::questions_in(Split split) const {
  std::vector<Question> out;
  for (const auto& q : questions_) {
    if (q.split == split) out.push_back(q);
  }
  return out;
}

void Corpus::count_unknown_rating_ids(RatingsLoadReport& report) const {
  for (const auto& [qid, per_question] : ratings_.by_question()) {
    if (!question_lookup_.contains(qid)) report.unknown_question_ids += per_question.size();
    for (const auto& [sid, rating] : per_question) {
      if (!statement_lookup_.contains(sid)) ++report.unknown_statement_ids;
    }
  }
}

// ---------------------------------------------------------------------------
// Snapshot

namespace {

constexpr int kSnapshotFormatVersion = 1;

void require_header(const fs::path& file, std::string_view line, std::string_view expected) {
  if (line != expected) {
    throw DataError(file.string() + ": unexpected header '" + std::string(line) + "'");
  }
}

}  // namespace

void write_snapshot(const Corpus& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  {
    auto out = tsv::open_output(dir / "statements.tsv");
    out << "statement_id\ttable_name\tskipped_combined\ttext\n";
    for (const auto& st : corpus.statements()) {
      out << tsv::escape(st.id) << '\t' << tsv::escape(st.table_name) << '\t'
          << (st.is_skipped_combined ? 1 : 0) << '\t' << tsv::escape(st.text) << '\n';
    }
  }
  {
    auto out = tsv::open_output(dir / "questions.tsv");
    out << "question_id\tsplit\tanswer_key\tquestion_text\tchoices\n";
    for (const auto& q : corpus.questions()) {
      out << tsv::escape(q.id) << '\t' << to_string(q.split) << '\t' << q.answer_key << '\t'
          << tsv::escape(q.question_text);
      for (const auto& [letter, text] : q.choices) out << '\t' << letter << '\t' << tsv::escape(text);
      out << '\n';
    }
  }
  {
    auto out = tsv::open_output(dir / "ratings.tsv");
    out << "question_id\tstatement_id\trating\n";
    for (const auto& [qid, per_question] : corpus.ratings().by_question()) {
      for (const auto& [sid, rating] : per_question) {
        out << tsv::escape(qid) << '\t' << tsv::escape(sid) << '\t' << rating << '\n';
      }
    }
  }
  {
    auto out = tsv::open_output(dir / "metadata.tsv");
    out << "key\tvalue\n"
        << "format_version\t" << kSnapshotFormatVersion << '\n'
        << "statement_count\t" << corpus.statements().size() << '\n'
        << "question_count\t" << corpus.questions().size() << '\n'
        << "rating_count\t" << corpus.ratings().size() << '\n'
        << "max_rating_observed\t" << corpus.ratings().max_rating_observed() << '\n';
  }
}

SnapshotMetadata read_snapshot_metadata(const fs::path& dir) {
  SnapshotMetadata meta;
  const auto file = dir / "metadata.tsv";
  tsv::for_each_line(file, [&](std::string_view line, std::size_t number) {
    if (number == 1) return require_header(file, line, "key\tvalue");
    auto cells = tsv::split(line);
    if (cells.size() != 2) throw DataError(source_of(file, number) + ": expected key and value");
    auto value = tsv::parse_int(cells[1]);
    if (!value || *value < 0) throw DataError(source_of(file, number) + ": bad value");
    if (cells[0] == "format_version" && *value != kSnapshotFormatVersion) {
      throw DataError(file.string() + ": unsupported format_version");
    }
    if (cells[0] == "statement_count") meta.statement_count = static_cast<std::size_t>(*value);
    if (cells[0] == "question_count") meta.question_count = static_cast<std::size_t>(*value);
    if (cells[0] == "rating_count") meta.rating_count = static_cast<std::size_t>(*value);
    if (cells[0] == "max_rating_observed") meta.max_rating_observed = static_cast<int>(*value);
  });
  return meta;
}

Corpus read_snapshot(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("snapshot directory not found: " + dir.string());
  const auto meta = read_snapshot_metadata(dir);

  std::vector<ExplanationStatement> statements;
  const auto statements_file = dir / "statements.tsv";
  tsv::for_each_line(statements_file, [&](std::string_view line, std::size_t number) {
    if (number == 1) {
      return require_header(statements_file, line, "statement_id\ttable_name\tskipped_combined\ttext");
    }
    auto cells = tsv::split(line);
    if (cells.size() != 4) throw DataError(source_of(statements_file, number) + ": expected 4 fields");
    statements.push_back({tsv::unescape(cells[0]), tsv::unescape(cells[3]),
                          tsv::unescape(cells[1]), cells[2] == "1"});
  });

  std::vector<Question> questions;
  const auto questions_file = dir / "questions.tsv";
  tsv::for_each_line(questions_file, [&](std::string_view line, std::size_t number) {
    if (number == 1) {
      return require_header(questions_file, line,
                            "question_id\tsplit\tanswer_key\tquestion_text\tchoices");
    }
    auto cells = tsv::split(line);
    if (cells.size() < 4 || cells.size() % 2 != 0 || cells[2].size() != 1) {
      throw DataError(source_of(questions_file, number) + ": malformed question row");
    }
    Question q;
    q.id = tsv::unescape(cells[0]);
    auto split = parse_split(cells[1]);
    if (!split) throw DataError(source_of(questions_file, number) + ": bad split");
    q.split = *split;
    q.answer_key = cells[2][0];
    q.question_text = tsv::unescape(cells[3]);
    for (std::size_t i = 4; i + 1 < cells.size(); i += 2) {
      if (cells[i].size() != 1) throw DataError(source_of(questions_file, number) + ": bad choice letter");
      q.choices[cells[i][0]] = tsv::unescape(cells[i + 1]);
    }
    questions.push_back(std::move(q));
  });

  RatingTable ratings;
  const auto ratings_file = dir / "ratings.tsv";
  tsv::for_each_line(ratings_file, [&](std::string_view line, std::size_t number) {
    if (number == 1) return require_header(ratings_file, line, "question_id\tstatement_id\trating");
    auto cells = tsv::split(line);
    auto rating = cells.size() == 3 ? tsv::parse_int(cells[2]) : std::nullopt;
    if (!rating || *rating < 0) throw DataError(source_of(ratings_file, number) + ": bad rating row");
    ratings.set(tsv::unescape(cells[0]), tsv::unescape(cells[1]), static_cast<int>(*rating));
  });

  if (statements.size() != meta.statement_count || questions.size() != meta.question_count ||
      ratings.size() != meta.rating_count) {
    throw DataError(dir.string() + ": snapshot counts disagree with metadata.tsv");
  }
  return Corpus(std::move(statements), std::move(questions), std::move(ratings));
}

}  // namespace hoprank
