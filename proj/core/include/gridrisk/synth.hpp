#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gridrisk/features.hpp"
#include "gridrisk/ingest.hpp"

namespace gridrisk {

// Synthetic world parameters. The outage process is a logistic link: at hour
// h, tract t loses power with probability
//   sigma(wind_gain * driver(h) + fragility_scale * fragility(t) - base_offset)
// where driver(h) is the storm intensity profile and fragility(t) a fixed
// linear functional of the year-built shares and infrastructure mix. Customer
// counts are binomial draws from (population, probability).
struct WorldSpec {
  std::uint64_t seed = 1;
  int n_tracts = 60;
  int n_stations = 4;
  int n_hours = 2000;
  double storm_rate = 2.0;       // storms per 1000 hours
  double wind_gain = 2.9;        // logit gain per storm-driver unit
  double fragility_scale = 1.2;  // logit gain on fragility in [0, 1]
  double base_offset = 12.0;     // logit offset
  // Weights over [year-built shares..., infrastructure shares...]; empty
  // selects the built-in default (old structures and pole/line-heavy mixes
  // are fragile).
  std::vector<double> fragility_weights;
  double missing_rate = 0.01;  // per interpolated channel cell
  double absent_rate = 0.002;  // per (station, hour) row
  double target_outage_fraction = 0.007;  // design point for default settings
  int income_bins = 10;
  int year_built_bins = 9;

  void validate() const;
  static WorldSpec from_file(const std::filesystem::path& path);
  void set(const std::string& key, const std::string& value);
  void print(std::ostream& out) const;
};

struct World {
  WorldSpec spec;
  WeatherSchema schema;
  std::vector<StationLocation> stations;
  std::vector<WeatherObservation> weather;
  std::vector<TractProfile> tracts;
  std::vector<OutageSnapshot> snapshots;
  std::vector<AllocationRow> allocations;
  std::int64_t hour_begin = 0;
  std::int64_t hour_end = 0;
  // Hidden truth, never consumed by the training pipeline.
  std::vector<double> p_true;                 // [tract * n_hours + hour]
  std::vector<std::int64_t> drawn_customers;  // same layout

  std::size_t cell(std::size_t tract, std::int64_t hour) const {
    return tract * static_cast<std::size_t>(hour_end - hour_begin) +
           static_cast<std::size_t>(hour - hour_begin);
  }
};

// Built-in fragility weights when WorldSpec.fragility_weights is empty: old
// structures weigh most, pole/line/tower-heavy infrastructure adds the rest.
std::vector<double> default_fragility_weights(int year_built_bins);

// Linear functional of the tract's raw year-built shares and infrastructure
// mix; weights ordered [year-built bins..., 11 infrastructure types].
double tract_fragility(const TractProfile& tract, const std::vector<double>& weights);

World generate_world(const WorldSpec& spec);

// Writes weather.csv, stations.csv, outage_snapshots.csv,
// event_allocations.csv, tracts.csv and truth.csv into the directory.
void write_world(const World& world, const std::filesystem::path& out_dir);

struct TruthTable {
  std::vector<std::string> tract_ids;
  std::int64_t hour_begin = 0;
  std::int64_t hour_end = 0;
  std::vector<double> p;  // [tract * n_hours + hour]

  double at(std::size_t tract, std::int64_t hour) const {
    return p[tract * static_cast<std::size_t>(hour_end - hour_begin) +
             static_cast<std::size_t>(hour - hour_begin)];
  }
};

void write_truth_csv(std::ostream& out, const TruthTable& truth);
TruthTable load_truth(const std::filesystem::path& path);
TruthTable truth_of(const World& world);

// RMSE of the thresholded true probability against the realized pipeline
// targets on the test tracts: the floor any learned model is measured against.
double bayes_rmse(const TruthTable& truth, const TargetTable& targets,
                  const SplitAssignment& split);

}  // namespace gridrisk
