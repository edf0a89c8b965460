#pragma once

// CSV tables with fixed formatting, and loaders for coefficient and
// probability-mass tables.

#include "entire_growth/entire.hpp"
#include "entire_growth/error.hpp"

#include <charconv>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace entire_growth::io {

/// 17 significant digits, '.' decimal point regardless of locale.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (x == kInf) return "inf";
  if (x == kNegInf) return "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  /// Cells are pre-formatted strings; an empty string leaves the cell blank.
  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw Error(ErrorKind::input, "row width does not match the header");
    rows_.push_back(std::move(cells));
  }

  void add_numbers(const std::vector<double>& xs) {
    std::vector<std::string> cells;
    for (double x : xs) cells.push_back(format_double(x));
    add_row(std::move(cells));
  }

  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t c = line.find(',', start);
    std::string_view cell = line.substr(start, c == std::string_view::npos ? std::string_view::npos : c - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) cell.remove_suffix(1);
    out.emplace_back(cell);
    if (c == std::string_view::npos) return out;
    start = c + 1;
  }
}

inline Error csv_error(const std::string& path, std::size_t line, const std::string& msg) {
  return Error(ErrorKind::parse, path + ":" + std::to_string(line) + ": " + msg);
}

/// Reads "index,value" rows with the given header names. `zero_word`, when
/// set, stands for an exactly zero entry.
inline std::vector<entire::LogCoeff> load_indexed(const std::string& path, const char* index_name,
                                                  const char* value_name, const char* zero_word) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open '" + path + "'");
  std::vector<entire::LogCoeff> table;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  long long last = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    if (!header_seen) {
      if (cells.size() != 2 || cells[0] != index_name || cells[1] != value_name)
        throw csv_error(path, line_no, std::string("expected header '") + index_name + "," + value_name + "'");
      header_seen = true;
      continue;
    }
    if (cells.size() != 2) throw csv_error(path, line_no, "expected two columns");
    long long idx = 0;
    const auto r = std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), idx);
    if (r.ec != std::errc{} || r.ptr != cells[0].data() + cells[0].size() || idx < 0)
      throw csv_error(path, line_no, "index must be a non-negative integer");
    if (idx <= last) throw csv_error(path, line_no, "indices must be strictly increasing");
    if (idx > 10'000'000) throw csv_error(path, line_no, "index too large");
    last = idx;
    table.resize(static_cast<std::size_t>(idx) + 1);
    if (zero_word && cells[1] == zero_word) continue;
    double v = 0.0;
    const auto rv = std::from_chars(cells[1].data(), cells[1].data() + cells[1].size(), v);
    if (rv.ec != std::errc{} || rv.ptr != cells[1].data() + cells[1].size() || !std::isfinite(v))
      throw csv_error(path, line_no, std::string("invalid ") + value_name + " '" + cells[1] + "'");
    table[static_cast<std::size_t>(idx)] = v;
  }
  if (!header_seen) throw csv_error(path, line_no, "empty file");
  while (!table.empty() && !table.back()) table.pop_back();
  return table;
}

}  // namespace detail

/// Coefficient table: header "n,ln_abs_c"; the literal ZERO marks c_n = 0 and
/// omitted indices are zero as well.
inline entire::CoefficientSequence load_coefficients_csv(const std::string& path, std::string name = "custom") {
  return entire::CoefficientSequence::from_table(std::move(name), detail::load_indexed(path, "n", "ln_abs_c", "ZERO"));
}

/// Probability masses: header "k,ln_mass".
inline std::vector<entire::LogCoeff> load_distribution_csv(const std::string& path) {
  return detail::load_indexed(path, "k", "ln_mass", "ZERO");
}

}  // namespace entire_growth::io
