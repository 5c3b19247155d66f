#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gridrisk {

// Line-oriented reader for the project's CSV dialect: UTF-8, comma-separated,
// one header row, no quoting (field values never contain commas).
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string source_name);

  const std::vector<std::string>& header() const { return header_; }

  // Returns false at end of input. Blank lines are skipped. Throws DataError
  // when a row's field count does not match the header.
  bool next_row(std::vector<std::string>& fields);

  // 1-based line number of the row most recently returned.
  std::size_t line_number() const { return line_number_; }

  const std::string& source() const { return source_; }

  int column(const std::string& name) const;
  int require_column(const std::string& name) const;

 private:
  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::size_t line_number_ = 0;
  std::size_t cursor_ = 0;
};

void split_csv_line(const std::string& line, std::vector<std::string>& fields);

// Strict numeric field parsing; errors carry source name and line number.
double parse_double_field(const std::string& field, const std::string& column,
                          std::size_t line, const std::string& source);
std::int64_t parse_int_field(const std::string& field, const std::string& column,
                             std::size_t line, const std::string& source);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

}  // namespace gridrisk
