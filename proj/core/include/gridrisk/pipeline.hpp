#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "gridrisk/features.hpp"
#include "gridrisk/ingest.hpp"

namespace gridrisk {

// The five raw input files, parsed but not yet cleaned.
struct RawWorld {
  WeatherSchema schema;
  std::vector<WeatherObservation> weather;
  std::vector<StationLocation> stations;
  std::vector<OutageSnapshot> snapshots;
  std::vector<AllocationRow> allocations;
  std::vector<TractProfile> tracts;
};

RawWorld load_raw(const std::filesystem::path& data_dir);

// Cleaned, normalized, target-annotated dataset ready for sample assembly.
struct PreparedData {
  WeatherSchema schema;
  std::vector<StationLocation> stations;
  WeatherGrid grid;  // filled and z-scored
  ChannelStats stats;
  std::vector<TractProfile> tracts;
  std::vector<std::vector<double>> distances_km;  // [tract][station]
  TargetTable targets;
  std::size_t k_income = 0;
  std::size_t k_year = 0;

  std::int64_t hour_begin() const { return grid.hour_begin; }
  std::int64_t hour_end() const { return grid.hour_end; }
  std::size_t n_hours() const { return static_cast<std::size_t>(grid.n_hours()); }

  std::size_t base_width(const FeatureMask& mask) const {
    return base_dim(stations.size(), mask);
  }
  std::size_t condition_width(const FeatureMask& mask) const {
    return condition_dim(k_income, k_year, mask);
  }

  // Writes the base vector for (tract, hour) into out (resized as needed).
  void base_vector(std::size_t tract, std::int64_t hour, const FeatureMask& mask,
                   std::vector<double>& out) const;

  std::vector<double> condition_for(std::size_t tract, const FeatureMask& mask,
                                    Rng* augment = nullptr) const;
};

// Cleans a raw world: grid assembly, gap filling, z-scoring, event
// consolidation and target construction. Pass fixed_stats to reuse
// training-time normalization statistics at inference.
PreparedData prepare(const RawWorld& raw, const ChannelStats* fixed_stats = nullptr,
                     WarningSink* warnings = nullptr);

// samples.csv: tract_id, hour, target, base_0..B-1, cond_0..C-1 (no
// augmentation); schema.txt records the column layout.
void write_samples_csv(std::ostream& out, const PreparedData& data, const FeatureMask& mask);
void write_samples_schema(std::ostream& out, const PreparedData& data, const FeatureMask& mask);

}  // namespace gridrisk
