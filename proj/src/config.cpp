#include "hoprank/config.hpp"

#include <cmath>

#include "hoprank/tsv.hpp"

namespace fs = std::filesystem;

namespace hoprank {

namespace {

fs::path resolve(std::string_view value, const fs::path& base_dir) {
  fs::path p{std::string(value)};
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.lexically_normal();
}

[[noreturn]] void bad_value(std::string_view section, std::string_view key, std::string_view value) {
  throw UsageError("invalid value '" + std::string(value) + "' for " + std::string(section) + "." +
                   std::string(key));
}

std::size_t to_size(std::string_view section, std::string_view key, std::string_view value) {
  auto v = tsv::parse_int(value);
  if (!v || *v < 0) bad_value(section, key, value);
  return static_cast<std::size_t>(*v);
}

double to_double(std::string_view section, std::string_view key, std::string_view value) {
  auto v = tsv::parse_double(value);
  if (!v) bad_value(section, key, value);
  return *v;
}

EnsembleMember parse_member(std::string_view value, const fs::path& base_dir) {
  // path[:weight]; the weight is taken only when the suffix parses as a number
  EnsembleMember member{std::string(value), 1.0};
  if (auto colon = value.rfind(':'); colon != std::string_view::npos) {
    if (auto w = tsv::parse_double(value.substr(colon + 1))) {
      member.source = std::string(value.substr(0, colon));
      member.weight = *w;
    }
  }
  member.source = resolve(member.source, base_dir).string();
  return member;
}

}  // namespace

PreprocessPaths RunConfig::preprocess_paths() const {
  return {stopwords, lemmas, true};
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  for (auto part : tsv::split(text, ',')) {
    part = tsv::trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

void apply_setting(RunConfig& cfg, std::string_view section, std::string_view key,
                   std::string_view value, const fs::path& base_dir) {
  value = tsv::trim(value);
  if (section == "paths") {
    if (key == "tables") return void(cfg.tables_dir = resolve(value, base_dir));
    if (key == "snapshot") return void(cfg.snapshot_dir = resolve(value, base_dir));
    if (key == "output") return void(cfg.output_dir = resolve(value, base_dir));
    if (key == "stopwords") return void(cfg.stopwords = resolve(value, base_dir));
    if (key == "lemmas") return void(cfg.lemmas = resolve(value, base_dir));
    if (key == "candidates") return void(cfg.candidates = resolve(value, base_dir));
    if (key == "ratings") {
      for (const auto& p : split_list(value)) cfg.rating_files.push_back(resolve(p, base_dir));
      return;
    }
    if (key.starts_with("questions.")) {
      auto split = parse_split(key.substr(10));
      if (!split) bad_value(section, key, value);
      cfg.question_files.emplace_back(*split, resolve(value, base_dir));
      return;
    }
  } else if (section == "retrieve") {
    if (key == "method") {
      auto m = parse_retrieval_method(value);
      if (!m) bad_value(section, key, value);
      return void(cfg.method = *m);
    }
    if (key == "n0") return void(cfg.ibm.n0 = to_size(section, key, value));
    if (key == "growth") return void(cfg.ibm.growth = to_double(section, key, value));
    if (key == "downscale") return void(cfg.ibm.downscale = to_double(section, key, value));
    if (key == "k") return void(cfg.ibm.k = to_size(section, key, value));
    if (key == "query_mode") {
      auto m = parse_query_mode(value);
      if (!m) bad_value(section, key, value);
      return void(cfg.ibm.query_mode = *m);
    }
  } else if (section == "bm25") {
    if (key == "k1") return void(cfg.ibm.bm25.k1 = to_double(section, key, value));
    if (key == "b") return void(cfg.ibm.bm25.b = to_double(section, key, value));
  } else if (section == "eval") {
    if (key == "gain") {
      auto g = parse_gain(value);
      if (!g) bad_value(section, key, value);
      return void(cfg.eval.gain = *g);
    }
  } else if (section == "run") {
    if (key == "split") {
      auto s = parse_split(value);
      if (!s) bad_value(section, key, value);
      return void(cfg.split = *s);
    }
    if (key == "threads") return void(cfg.threads = static_cast<unsigned>(to_size(section, key, value)));
    if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& s : split_list(value)) {
        auto v = tsv::parse_int(s);
        if (!v) bad_value(section, key, value);
        cfg.seeds.push_back(*v);
      }
      return;
    }
  } else if (section == "ensemble") {
    if (key == "member") return cfg.ensemble_members.push_back(parse_member(value, base_dir));
  }
  throw UsageError("unknown setting " + std::string(section) + "." + std::string(key));
}

void apply_config_file(RunConfig& cfg, const fs::path& file) {
  if (!fs::is_regular_file(file)) throw DataError("config file not found: " + file.string());
  const fs::path base_dir = fs::absolute(file).parent_path();
  std::string section;
  tsv::for_each_line(file, [&](std::string_view raw, std::size_t number) {
    auto line = tsv::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') return;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw UsageError(file.string() + ":" + std::to_string(number) + ": bad section header");
      }
      section = std::string(tsv::trim(line.substr(1, line.size() - 2)));
      return;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(file.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    try {
      apply_setting(cfg, section, tsv::trim(line.substr(0, eq)), line.substr(eq + 1), base_dir);
    } catch (const UsageError& e) {
      throw UsageError(file.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  });
}

void write_retrieval_config(std::ostream& out, const RunConfig& cfg) {
  const auto& p = cfg.ibm;
  out << "[retrieve]\n"
      << "method = " << to_string(cfg.method) << '\n'
      << "n0 = " << p.n0 << '\n'
      << "growth = " << p.growth << '\n'
      << "downscale = " << p.downscale << '\n'
      << "k = " << p.k << '\n'
      << "query_mode = " << to_string(p.query_mode) << '\n'
      << "\n[bm25]\n"
      << "k1 = " << p.bm25.k1 << '\n'
      << "b = " << p.bm25.b << '\n';
}

}  // namespace hoprank
