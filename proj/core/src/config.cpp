#include "gridrisk/config.hpp"

#include <fstream>
#include <istream>

#include "gridrisk/error.hpp"

namespace gridrisk {

namespace {

std::string trim(const std::string& s) {
  std::size_t lo = 0, hi = s.size();
  while (lo < hi && (s[lo] == ' ' || s[lo] == '\t' || s[lo] == '\r')) ++lo;
  while (hi > lo && (s[hi - 1] == ' ' || s[hi - 1] == '\t' || s[hi - 1] == '\r')) --hi;
  return s.substr(lo, hi - lo);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_value_text(std::istream& in,
                                                                      const std::string& source) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw UsageError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(trimmed.substr(0, eq));
    std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) {
      throw UsageError(source + ":" + std::to_string(line_no) + ": empty key");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_key_value_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open configuration file '" + path.string() + "'");
  return parse_key_value_text(in, path.string());
}

}  // namespace gridrisk
