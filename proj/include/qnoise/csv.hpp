#pragma once

// Comma-separated tables with a '#'-prefixed metadata block.

#include <charconv>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "qnoise/errors.hpp"

namespace qnoise {

inline constexpr std::string_view kToolName = "qnoise_repro";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Shortest round-trip-free rendering at 12 significant digits; locale independent.
inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  if (r.ec != std::errc{}) throw DomainError("number formatting failed");
  return {buf, r.ptr};
}

/// Locale-independent parse of a complete decimal token.
inline double parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc{} || r.ptr != s.data() + s.size())
    throw DomainError("not a number: '" + std::string(s) + "'");
  return v;
}

class CsvTable {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    detail::require(!header_.empty(), "table needs at least one column");
  }

  void add_metadata(std::string key, std::string value) { metadata_.emplace_back(std::move(key), std::move(value)); }

  void add_row(std::vector<Cell> row) {
    detail::require(row.size() == header_.size(), "row width differs from header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

  /// Numeric column by name; string cells are rejected.
  std::vector<double> column(std::string_view name) const {
    std::size_t idx = header_.size();
    for (std::size_t i = 0; i < header_.size(); ++i)
      if (header_[i] == name) idx = i;
    detail::require(idx < header_.size(), "no column named " + std::string(name));
    std::vector<double> out;
    for (const auto& r : rows_) {
      if (const auto* d = std::get_if<double>(&r[idx])) out.push_back(*d);
      else if (const auto* i = std::get_if<std::int64_t>(&r[idx])) out.push_back(static_cast<double>(*i));
      else throw DomainError("column " + std::string(name) + " is not numeric");
    }
    return out;
  }

  void write(std::ostream& os) const {
    for (const auto& [k, v] : metadata_) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << quote(header_[i]);
    os << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << render(r[i]);
      os << '\n';
    }
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }

  static std::string render(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return quote(std::get<std::string>(c));
  }

  std::vector<std::string> header_;
  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::vector<Cell>> rows_;
};

/// gnuplot script plotting column y against column x (1-based) of `csv_path`.
inline std::string plot_script(const std::string& csv_path, const CsvTable& table, int x, int y,
                               const std::string& title) {
  detail::require(x >= 1 && y >= 1 && x <= static_cast<int>(table.header().size()) &&
                      y <= static_cast<int>(table.header().size()),
                  "plot column out of range");
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key off\n"
     << "set title '" << title << "'\n"
     << "set xlabel '" << table.header()[static_cast<std::size_t>(x - 1)] << "'\n"
     << "set ylabel '" << table.header()[static_cast<std::size_t>(y - 1)] << "'\n"
     << "plot '" << csv_path << "' every ::1 using " << x << ':' << y << " with linespoints\n";
  return os.str();
}

}  // namespace qnoise
