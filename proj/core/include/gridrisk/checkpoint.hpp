#pragma once

#include <filesystem>

#include "gridrisk/ingest.hpp"
#include "gridrisk/nn.hpp"
#include "gridrisk/train.hpp"

namespace gridrisk {

// Flat binary checkpoint: magic "GRSK", version u32 (little-endian), a
// length-prefixed architecture descriptor, then every parameter as a
// little-endian 64-bit float in declaration order.
void save_params(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_params(const std::filesystem::path& path);

// Everything inference needs besides the weights: the resolved run
// configuration, weather schema, station locations, normalization statistics
// and census bin counts. Stored as JSON beside the checkpoint.
struct ModelMeta {
  RunConfig config;
  WeatherSchema schema;
  std::vector<StationLocation> stations;
  ChannelStats stats;
  std::size_t k_income = 0;
  std::size_t k_year = 0;
};

std::filesystem::path meta_path_for(const std::filesystem::path& checkpoint_path);
void save_meta(const std::filesystem::path& path, const ModelMeta& meta);
ModelMeta load_meta(const std::filesystem::path& path);

}  // namespace gridrisk
