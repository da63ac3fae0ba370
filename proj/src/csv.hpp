#pragma once

// Minimal reader for the numeric CSV tables shipped with the library.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "uwsynth/error.hpp"

namespace uwsynth::detail {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // data rows, header excluded
};

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool parse_double(std::string_view text, double& value) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

/// Reads a header line plus numeric rows. Blank lines are skipped; data
/// rows are numbered from 1 in errors.
inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCategory::load, "cannot open '" + path.string() + "'");
  }
  CsvTable table;
  std::string line;
  bool have_header = false;
  std::size_t row_index = 0;
  while (std::getline(in, line)) {
    const auto content = trim(line);
    if (content.empty()) continue;
    if (!have_header) {
      for (auto cell : split(content)) table.header.emplace_back(cell);
      have_header = true;
      continue;
    }
    ++row_index;
    const auto cells = split(content);
    if (cells.size() != table.header.size()) {
      throw ParseError(row_index,
                       path.filename().string() + ": expected " +
                           std::to_string(table.header.size()) + " columns, got " +
                           std::to_string(cells.size()),
                       "row");
    }
    std::vector<double> values(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!parse_double(cells[i], values[i])) {
        throw ParseError(row_index,
                         path.filename().string() + ": invalid number '" +
                             std::string(cells[i]) + "'",
                         "row");
      }
    }
    table.rows.push_back(std::move(values));
  }
  if (!have_header) {
    throw Error(ErrorCategory::load, "'" + path.string() + "' is empty");
  }
  return table;
}

}  // namespace uwsynth::detail
