#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace webimpact {

using CsvRow = std::vector<std::string>;

struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;
  std::vector<std::size_t> lines;  // source line of each row, 1-based

  // Throws ParseError when the column is missing.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and line
// breaks; CRLF and a leading UTF-8 BOM are accepted. Every row must have the
// header's width.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, std::span<const std::string> fields);
void write_csv_row(std::ostream& out, std::initializer_list<std::string_view> fields);

// Shortest text that reads back to the same double. Always '.' as decimal
// separator and no digit grouping, independent of the global locale.
std::string format_number(double value);
std::string format_fixed(double value, int decimals);

// Thousands-grouped integer for human-readable tables ("723,000").
std::string format_grouped(std::uint64_t value);

}  // namespace webimpact
