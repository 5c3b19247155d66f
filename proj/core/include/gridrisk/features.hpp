#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridrisk/error.hpp"
#include "gridrisk/ingest.hpp"
#include "gridrisk/rng.hpp"

namespace gridrisk {

// Feature-group switches. Weather is the base signal and always on; the other
// five groups form the nested ablation ladder.
struct FeatureMask {
  bool weather = true;
  bool distance = false;
  bool totals = false;
  bool income = false;
  bool year_built = false;
  bool power_infra = false;

  static FeatureMask full();
  static std::array<FeatureMask, 6> ablation_ladder();
  // Parses a comma list of group names ("weather,distance,totals,...").
  static FeatureMask parse(const std::string& list);
  std::string describe() const;
  bool operator==(const FeatureMask&) const = default;
};

struct HourlySample {
  std::string tract_id;
  std::int64_t hour = 0;
  std::vector<double> base;
  std::vector<double> condition;
  double target = 0.0;
};

enum class Subset { train, val, test };

struct SplitAssignment {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
  std::unordered_map<std::string, Subset> by_tract;

  Subset of(const std::string& tract_id) const;
};

// Dense (tract, hour) -> target probability table.
struct TargetTable {
  std::vector<std::string> tract_ids;  // tracts.csv order
  std::int64_t hour_begin = 0;
  std::int64_t hour_end = 0;
  std::vector<double> values;  // [tract * n_hours + (hour - hour_begin)]

  std::int64_t n_hours() const { return hour_end - hour_begin; }
  double at(std::size_t tract, std::int64_t hour) const {
    return values[tract * static_cast<std::size_t>(n_hours()) +
                  static_cast<std::size_t>(hour - hour_begin)];
  }
};

// Accumulates max_customers * fraction into every hour of each event's span,
// then divides by tract population and clips at 1. Hours with no event are 0.
TargetTable build_targets(const std::vector<OutageEvent>& events,
                          const std::vector<TractProfile>& tracts, std::int64_t hour_begin,
                          std::int64_t hour_end, WarningSink* warnings = nullptr);

// Training-time jitter: each bin redrawn uniformly from
// [estimate - moe, estimate + moe], floored at 0.
std::vector<double> augment_distribution(const std::vector<std::pair<double, double>>& bins,
                                         Rng& rng);

// Softmax over bins/total with max-subtraction. total <= 0 falls back to a
// uniform output with a warning.
std::vector<double> softmax_normalize(const std::vector<double>& bins, double total,
                                      WarningSink* warnings = nullptr);

std::size_t base_dim(std::size_t n_stations, const FeatureMask& mask);
std::size_t condition_dim(std::size_t k_income, std::size_t k_year, const FeatureMask& mask);

// Condition vector for one tract: income simplex, year-built simplex,
// infrastructure simplex, then log1p-scaled totals — each included iff masked.
// Pass an Rng to enable training-time augmentation of the census bins.
std::vector<double> condition_vector(const TractProfile& tract, const FeatureMask& mask,
                                     Rng* augment = nullptr, WarningSink* warnings = nullptr);

// Base vector: per-station weather channels for the hour, then per-station
// distances when masked. weather_slice must hold n_stations*10 values.
HourlySample assemble_sample(const TractProfile& tract, std::int64_t hour,
                             std::span<const double> weather_slice,
                             std::span<const double> distances_km, double target,
                             const FeatureMask& mask, Rng* augment = nullptr,
                             WarningSink* warnings = nullptr);

// Deterministic 72/8/20 split by tract (floor rounding, remainder to train;
// an empty validation set borrows one tract from train).
SplitAssignment split_tracts(const std::vector<std::string>& tract_ids, std::uint64_t seed);

}  // namespace gridrisk
