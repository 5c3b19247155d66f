#include "gridrisk/pipeline.hpp"

#include <fstream>
#include <ostream>

#include "gridrisk/csv.hpp"

namespace gridrisk {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open '" + path.string() + "'");
  }
  return in;
}

}  // namespace

RawWorld load_raw(const std::filesystem::path& data_dir) {
  RawWorld raw;
  raw.schema = WeatherSchema::standard();
  {
    auto in = open_input(data_dir / "weather.csv");
    raw.weather = parse_weather(in, raw.schema, (data_dir / "weather.csv").string());
  }
  {
    auto in = open_input(data_dir / "stations.csv");
    raw.stations = parse_stations(in, (data_dir / "stations.csv").string());
  }
  {
    auto in = open_input(data_dir / "outage_snapshots.csv");
    raw.snapshots = parse_snapshots(in, (data_dir / "outage_snapshots.csv").string());
  }
  {
    auto in = open_input(data_dir / "event_allocations.csv");
    raw.allocations = parse_allocations(in, (data_dir / "event_allocations.csv").string());
  }
  {
    auto in = open_input(data_dir / "tracts.csv");
    raw.tracts = parse_tracts(in, (data_dir / "tracts.csv").string());
  }
  return raw;
}

void PreparedData::base_vector(std::size_t tract, std::int64_t hour, const FeatureMask& mask,
                               std::vector<double>& out) const {
  const std::size_t n_stations = stations.size();
  out.resize(base_width(mask));
  double* dst = out.data();
  for (std::size_t s = 0; s < n_stations; ++s) {
    const auto slice = grid.slice(s, hour);
    for (int c = 0; c < kNumWeatherChannels; ++c) *dst++ = slice[static_cast<std::size_t>(c)];
  }
  if (mask.distance) {
    const auto& d = distances_km[tract];
    for (std::size_t s = 0; s < n_stations; ++s) *dst++ = d[s];
  }
}

std::vector<double> PreparedData::condition_for(std::size_t tract, const FeatureMask& mask,
                                                Rng* augment) const {
  return condition_vector(tracts[tract], mask, augment);
}

PreparedData prepare(const RawWorld& raw, const ChannelStats* fixed_stats,
                     WarningSink* warnings) {
  if (raw.tracts.empty()) throw DataError("no census tracts defined");

  PreparedData data;
  data.schema = raw.schema;
  data.stations = raw.stations;
  data.grid = build_grid(raw.weather, raw.stations);
  fill_missing(data.grid, data.schema);
  data.stats = fixed_stats != nullptr ? *fixed_stats : compute_stats(data.grid, warnings);
  normalize(data.grid, data.stats);

  data.tracts = raw.tracts;
  data.k_income = raw.tracts.front().income_bins.size();
  data.k_year = raw.tracts.front().year_built_bins.size();
  for (const auto& t : raw.tracts) {
    if (t.income_bins.size() != data.k_income || t.year_built_bins.size() != data.k_year) {
      throw DataError("tract '" + t.tract_id + "' has inconsistent census bin counts");
    }
  }

  data.distances_km.reserve(raw.tracts.size());
  for (const auto& t : raw.tracts) {
    data.distances_km.push_back(station_distances(t.lat, t.lon, raw.stations));
  }

  const auto events = consolidate_events(raw.snapshots, raw.allocations, warnings);
  data.targets =
      build_targets(events, raw.tracts, data.grid.hour_begin, data.grid.hour_end, warnings);
  return data;
}

void write_samples_csv(std::ostream& out, const PreparedData& data, const FeatureMask& mask) {
  const std::size_t b = data.base_width(mask);
  const std::size_t c = data.condition_width(mask);
  out << "tract_id,hour,target";
  for (std::size_t i = 0; i < b; ++i) out << ",base_" << i;
  for (std::size_t i = 0; i < c; ++i) out << ",cond_" << i;
  out << '\n';

  std::vector<double> base;
  for (std::size_t t = 0; t < data.tracts.size(); ++t) {
    const auto condition = data.condition_for(t, mask);
    for (std::int64_t h = data.hour_begin(); h < data.hour_end(); ++h) {
      out << data.tracts[t].tract_id << ',' << h << ','
          << format_double(data.targets.at(t, h));
      data.base_vector(t, h, mask, base);
      for (const double v : base) out << ',' << format_double(v);
      for (const double v : condition) out << ',' << format_double(v);
      out << '\n';
    }
  }
}

void write_samples_schema(std::ostream& out, const PreparedData& data, const FeatureMask& mask) {
  out << "n_stations = " << data.stations.size() << '\n'
      << "n_channels = " << kNumWeatherChannels << '\n'
      << "base_dim = " << data.base_width(mask) << '\n'
      << "cond_dim = " << data.condition_width(mask) << '\n'
      << "income_bins = " << data.k_income << '\n'
      << "year_built_bins = " << data.k_year << '\n'
      << "mask = " << mask.describe() << '\n'
      << "hour_begin = " << data.hour_begin() << '\n'
      << "hour_end = " << data.hour_end() << '\n';
}

}  // namespace gridrisk
