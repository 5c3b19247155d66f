#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gridrisk {

// Flat "key = value" configuration files. '#' starts a comment; blank lines
// are skipped. Keys and values are whitespace-trimmed.
std::vector<std::pair<std::string, std::string>> parse_key_value_text(std::istream& in,
                                                                      const std::string& source);
std::vector<std::pair<std::string, std::string>> parse_key_value_file(
    const std::filesystem::path& path);

}  // namespace gridrisk
