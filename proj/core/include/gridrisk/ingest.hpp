#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridrisk/error.hpp"

namespace gridrisk {

inline constexpr int kNumWeatherChannels = 10;
inline constexpr int kNumInfraTypes = 11;

// Node types counted per tract, in column order infra_1..infra_11:
// compensator, generator, insulator, line, pole, portal, substation,
// switch, terminal, tower, transformer.

struct WeatherSchema {
  std::array<std::string, kNumWeatherChannels> names;
  // Channels repaired by temporal interpolation; the rest are zero-filled.
  std::array<bool, kNumWeatherChannels> interpolated{};

  static WeatherSchema standard();
  int index_of(std::string_view name) const;
  void validate() const;
};

struct WeatherObservation {
  std::string station_id;
  std::int64_t hour = 0;  // hours since the Unix epoch, UTC
  std::array<double, kNumWeatherChannels> channels{};
  std::array<bool, kNumWeatherChannels> missing{};

  bool operator==(const WeatherObservation&) const = default;
};

struct StationLocation {
  std::string station_id;
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const StationLocation&) const = default;
};

struct OutageSnapshot {
  std::string event_id;
  std::int64_t observed_at = 0;  // seconds since the Unix epoch
  std::int64_t customers = 0;

  bool operator==(const OutageSnapshot&) const = default;
};

struct AllocationRow {
  std::string event_id;
  std::string tract_id;
  double fraction = 0.0;

  bool operator==(const AllocationRow&) const = default;
};

struct OutageEvent {
  std::string event_id;
  std::int64_t start_hour = 0;
  std::int64_t end_hour = 0;
  std::int64_t max_customers = 0;
  std::vector<std::pair<std::string, double>> allocations;  // (tract_id, fraction)
};

struct TractProfile {
  std::string tract_id;
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t population = 0;
  std::int64_t households = 0;
  std::int64_t houses = 0;
  std::vector<std::pair<double, double>> income_bins;      // (estimate, margin of error)
  std::vector<std::pair<double, double>> year_built_bins;  // (estimate, margin of error)
  std::array<std::int64_t, kNumInfraTypes> infra_counts{};
  std::int64_t infra_total = 0;

  bool operator==(const TractProfile&) const = default;
};

struct ChannelStats {
  std::array<double, kNumWeatherChannels> mean{};
  std::array<double, kNumWeatherChannels> stddev{};
};

// Dense (station, hour, channel) lattice over a contiguous hour range.
struct WeatherGrid {
  std::vector<std::string> stations;  // stations.csv order
  std::int64_t hour_begin = 0;
  std::int64_t hour_end = 0;  // exclusive
  std::vector<double> values;
  std::vector<std::uint8_t> missing;  // parallel to values
  std::vector<std::uint8_t> absent;   // per (station, hour): no source row

  std::int64_t n_hours() const { return hour_end - hour_begin; }

  std::size_t cell(std::size_t station, std::int64_t hour) const {
    return (station * static_cast<std::size_t>(n_hours()) +
            static_cast<std::size_t>(hour - hour_begin)) *
           kNumWeatherChannels;
  }

  std::span<const double> slice(std::size_t station, std::int64_t hour) const {
    return {values.data() + cell(station, hour), kNumWeatherChannels};
  }

  bool any_missing() const;
};

// --- parsers ---------------------------------------------------------------
// All parsers are strict about headers and report malformed cells with
// source name and line number. Duplicate (station, hour) weather rows keep
// the last occurrence.

std::vector<WeatherObservation> parse_weather(std::istream& in, const WeatherSchema& schema,
                                              const std::string& source = "weather.csv");
std::vector<StationLocation> parse_stations(std::istream& in,
                                            const std::string& source = "stations.csv");
std::vector<OutageSnapshot> parse_snapshots(std::istream& in,
                                            const std::string& source = "outage_snapshots.csv");
std::vector<AllocationRow> parse_allocations(std::istream& in,
                                             const std::string& source = "event_allocations.csv");
std::vector<TractProfile> parse_tracts(std::istream& in,
                                       const std::string& source = "tracts.csv");

// --- writers (same formats; lossless double round-trip) ---------------------

void write_weather_csv(std::ostream& out, const WeatherSchema& schema,
                       const std::vector<WeatherObservation>& observations);
void write_stations_csv(std::ostream& out, const std::vector<StationLocation>& stations);
void write_snapshots_csv(std::ostream& out, const std::vector<OutageSnapshot>& snapshots);
void write_allocations_csv(std::ostream& out, const std::vector<AllocationRow>& rows);
void write_tracts_csv(std::ostream& out, const std::vector<TractProfile>& tracts);

// --- cleaning --------------------------------------------------------------

// Lays observations onto the dense lattice spanned by the observed hour range.
// Every station in `stations` gets a row block; hours with no source row are
// flagged absent. Stations appearing in observations but not in `stations`
// are a data error.
WeatherGrid build_grid(const std::vector<WeatherObservation>& observations,
                       const std::vector<StationLocation>& stations);

// Repairs the grid in place:
//   1. hours where a station is entirely absent take the per-channel mean of
//      the stations reporting that hour,
//   2. interpolation-group channels are linearly interpolated between the
//      nearest filled neighbors (endpoints extended constant),
//   3. everything still missing is zero-filled.
// A channel with no value anywhere in the network is a fatal data error.
void fill_missing(WeatherGrid& grid, const WeatherSchema& schema);

// Per-channel mean / population standard deviation over the whole grid.
// Zero-variance channels fall back to stddev 1 with a warning.
ChannelStats compute_stats(const WeatherGrid& grid, WarningSink* warnings = nullptr);

void normalize(WeatherGrid& grid, const ChannelStats& stats);

// Groups snapshots into events: start/end hours from the earliest/latest
// snapshot, max_customers over the period. Events affecting <= 1 customer are
// removed. Events without allocation rows are skipped with a warning;
// allocation fractions off by more than 1e-6 are renormalized with a warning.
std::vector<OutageEvent> consolidate_events(const std::vector<OutageSnapshot>& snapshots,
                                            const std::vector<AllocationRow>& allocations,
                                            WarningSink* warnings = nullptr);

double haversine_km(double lat1, double lon1, double lat2, double lon2);

// Great-circle distance from (lat, lon) to every station, in station order.
std::vector<double> station_distances(double lat, double lon,
                                      const std::vector<StationLocation>& stations);

}  // namespace gridrisk
