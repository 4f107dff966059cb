#pragma once

// Internal comma-separated table reader shared by the bundle and run-directory
// parsers. Field values are trimmed; blank lines are skipped; errors carry
// "<file>:<line>[:<column>]: <what>" through Error("MalformedRow", ...).

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "storval/errors.hpp"

namespace storval::csv {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct Table {
  std::string file;  // short name, for error messages
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> lines;  // 1-based source line per row

  int col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  int require(const std::string& name) const {
    int c = col(name);
    if (c < 0) {
      throw Error("MalformedRow",
                  file + ":1:" + name + ": required column missing");
    }
    return c;
  }

  [[noreturn]] void fail(int row, const std::string& column,
                         const std::string& what) const {
    throw Error("MalformedRow", file + ":" + std::to_string(lines[row]) + ":" +
                                    column + ": " + what);
  }

  const std::string& cell(int row, int col) const { return rows[row][col]; }

  double number(int row, int col) const {
    const std::string& s = rows[row][col];
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      fail(row, header[col], "not a number: '" + s + "'");
    }
    return v;
  }

  std::optional<double> opt_number(int row, int col) const {
    if (rows[row][col].empty()) return std::nullopt;
    return number(row, col);
  }

  bool boolean(int row, int col) const {
    const std::string& s = rows[row][col];
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(row, header[col], "not a boolean: '" + s + "'");
  }
};

inline Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("MissingFile", path.filename().string());
  Table t;
  t.file = path.filename().string();

  std::string line;
  int line_no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = s.find(',', start);
      if (comma == std::string::npos) {
        out.push_back(trim(s.substr(start)));
        break;
      }
      out.push_back(trim(s.substr(start, comma - start)));
      start = comma + 1;
    }
    return out;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw Error("MalformedRow",
                  t.file + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(t.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.lines.push_back(line_no);
  }
  if (t.header.empty()) {
    throw Error("MalformedRow", t.file + ":1: empty file");
  }
  return t;
}

}  // namespace storval::csv
