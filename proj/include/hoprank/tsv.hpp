#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hoprank::tsv {

/// Splits on `sep` without collapsing empty fields.
std::vector<std::string_view> split(std::string_view line, char sep = '\t');

std::string_view trim(std::string_view s);

/// Backslash escaping for tab, newline, carriage return and backslash so that
/// any text survives a round-trip through a single tab-separated cell.
std::string escape(std::string_view field);
std::string unescape(std::string_view field);

/// Calls `fn(line, line_number)` for every line, 1-based, with a trailing
/// '\r' removed. Throws DataError if the file cannot be opened.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& fn);

std::optional<long long> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);

/// Fixed six-decimal rendering used by every emitted score.
std::string format_fixed(double value, int decimals = 6);

/// Opens `path` for writing, creating parent directories; throws DataError
/// naming the path on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace hoprank::tsv
