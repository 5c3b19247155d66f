#include "gridrisk/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>

#include "gridrisk/error.hpp"

namespace gridrisk {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

void split_csv_line(const std::string& line, std::vector<std::string>& fields) {
  fields.clear();
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
}

CsvReader::CsvReader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {
  std::string line;
  if (!std::getline(in_, line)) {
    throw DataError(source_ + ": missing header row");
  }
  ++cursor_;
  split_csv_line(strip_cr(line), header_);
}

bool CsvReader::next_row(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++cursor_;
    line = strip_cr(line);
    if (line.empty()) continue;
    split_csv_line(line, fields);
    if (fields.size() != header_.size()) {
      throw DataError(source_ + ":" + std::to_string(cursor_) + ": expected " +
                      std::to_string(header_.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    line_number_ = cursor_;
    return true;
  }
  return false;
}

int CsvReader::column(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int CsvReader::require_column(const std::string& name) const {
  const int idx = column(name);
  if (idx < 0) {
    throw DataError(source_ + ": required column '" + name + "' not found");
  }
  return idx;
}

double parse_double_field(const std::string& field, const std::string& column,
                          std::size_t line, const std::string& source) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw DataError(source + ":" + std::to_string(line) + ": malformed numeric value '" +
                    field + "' in column '" + column + "'");
  }
  return value;
}

std::int64_t parse_int_field(const std::string& field, const std::string& column,
                             std::size_t line, const std::string& source) {
  std::int64_t value = 0;
  const char* first = field.data();
  const char* last = first + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw DataError(source + ":" + std::to_string(line) + ": malformed integer value '" +
                    field + "' in column '" + column + "'");
  }
  return value;
}

std::string format_double(double value) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    double back = 0.0;
    const auto [ptr, ec] = std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
    (void)ptr;
    if (ec == std::errc() && back == value) break;
  }
  return buf;
}

}  // namespace gridrisk
