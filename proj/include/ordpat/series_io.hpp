#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ordpat/errors.hpp"
#include "ordpat/montecarlo.hpp"

namespace ordpat {

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::optional<double> parse_double(std::string s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return std::nullopt;
  const auto b = s.find_last_not_of(" \t\r");
  s = s.substr(a, b - a + 1);
  double v;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

// Reads one-value-per-line text or CSV with a selectable column (0-based
// index or header name). A single leading non-numeric row is treated as a
// header. NaN and infinity are rejected.
inline std::vector<double> read_series(const std::string& path,
                                       const std::optional<std::string>& column = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open series file: " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  long col = -1;
  if (column) {
    const auto parsed = detail::parse_double(*column);
    if (parsed && *parsed == static_cast<long>(*parsed)) col = static_cast<long>(*parsed);
  }
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = detail::split_csv(line);
    if (column && col < 0) {  // resolve a named column from the header
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == *column) {
          col = static_cast<long>(i);
          break;
        }
      }
      if (col < 0) throw input_error("column '" + *column + "' not found in header");
      header_allowed = false;
      continue;
    }
    const std::size_t use = col >= 0 ? static_cast<std::size_t>(col) : 0;
    if (use >= fields.size())
      throw input_error("line " + std::to_string(line_no) + " has too few columns");
    const std::optional<double> v = detail::parse_double(fields[use]);
    if (!v) {
      if (header_allowed) {  // skip one non-numeric header row
        header_allowed = false;
        continue;
      }
      throw input_error("non-numeric value at line " + std::to_string(line_no));
    }
    header_allowed = false;
    if (!std::isfinite(*v))
      throw input_error("non-finite value at line " + std::to_string(line_no));
    values.push_back(*v);
  }
  if (values.empty()) throw input_error("series file is empty: " + path);
  return values;
}

inline void write_series(const std::string& path, std::span<const double> values) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write: " + path);
  out.precision(17);
  for (double v : values) out << v << '\n';
}

// Two-column CSV with a header row, '.' decimal separator, LF endings.
inline void write_xy_csv(const std::string& path, const std::string& xname,
                         const std::string& yname, std::span<const double> x,
                         std::span<const double> y) {
  if (x.size() != y.size()) throw input_error("column length mismatch");
  std::ofstream out(path);
  if (!out) throw input_error("cannot write: " + path);
  out.precision(17);
  out << xname << ',' << yname << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) out << x[i] << ',' << y[i] << '\n';
}

inline void write_histogram_csv(const std::string& path, const Histogram& h) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write: " + path);
  out.precision(17);
  out << "bin_left,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b)
    out << h.edges[b] << ',' << h.counts[b] << '\n';
}

}  // namespace ordpat
