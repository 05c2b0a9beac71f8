#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hoprank {

/// Raised when input data is malformed, inconsistent or missing.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for invalid parameters or invocation (bad flags, bad config keys).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RankedItem {
  std::string statement_id;
  std::optional<double> score;

  bool operator==(const RankedItem&) const = default;
};

/// Ordered statement list for one question. The unit exchanged between
/// retrieval, re-ranking, ensembling and evaluation.
struct Ranking {
  std::string question_id;
  std::vector<RankedItem> items;

  bool operator==(const Ranking&) const = default;

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.statement_id);
    return out;
  }
};

/// Location of a rejected or suspicious input row.
struct RowIssue {
  std::string source;
  std::size_t line = 0;
  std::string message;
};

}  // namespace hoprank
