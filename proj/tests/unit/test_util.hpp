#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>

#include "gridrisk/synth.hpp"

namespace testutil {

// Scratch directory under the system temp root, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("gridrisk_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

// Small world that trains in well under a second.
inline gridrisk::WorldSpec small_world(std::uint64_t seed) {
  gridrisk::WorldSpec spec;
  spec.seed = seed;
  spec.n_tracts = 20;
  spec.n_hours = 400;
  spec.storm_rate = 5.0;
  return spec;
}

inline std::vector<std::string> tract_ids(const gridrisk::World& world) {
  std::vector<std::string> ids;
  for (const auto& t : world.tracts) ids.push_back(t.tract_id);
  return ids;
}

}  // namespace testutil
