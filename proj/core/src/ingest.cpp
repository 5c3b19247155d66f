#include "gridrisk/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "gridrisk/csv.hpp"
#include "gridrisk/timeutil.hpp"

namespace gridrisk {

WeatherSchema WeatherSchema::standard() {
  WeatherSchema s;
  s.names = {"air_temp_c",       "rel_humidity_pct", "pressure_altimeter_inhg",
             "wind_speed_kt",    "wind_dir_deg",     "wind_gust_kt",
             "visibility_mi",    "precip_1hr_in",    "dew_point_c",
             "sky_cover_frac"};
  // Physically continuous channels; the rest are zero-filled when missing.
  for (const char* name : {"air_temp_c", "rel_humidity_pct", "pressure_altimeter_inhg",
                           "dew_point_c"}) {
    s.interpolated[static_cast<std::size_t>(s.index_of(name))] = true;
  }
  return s;
}

int WeatherSchema::index_of(std::string_view name) const {
  for (int i = 0; i < kNumWeatherChannels; ++i) {
    if (names[static_cast<std::size_t>(i)] == name) return i;
  }
  return -1;
}

void WeatherSchema::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& name : names) {
    if (name.empty()) throw DataError("weather schema: empty channel name");
    if (!seen.insert(name).second) {
      throw DataError("weather schema: duplicate channel name '" + name + "'");
    }
  }
}

bool WeatherGrid::any_missing() const {
  return std::any_of(missing.begin(), missing.end(), [](std::uint8_t m) { return m != 0; });
}

// --- parsers -----------------------------------------------------------------

std::vector<WeatherObservation> parse_weather(std::istream& in, const WeatherSchema& schema,
                                              const std::string& source) {
  schema.validate();
  CsvReader reader(in, source);
  const auto& header = reader.header();
  if (header.size() != 2 + kNumWeatherChannels || header[0] != "station" ||
      header[1] != "valid") {
    throw DataError(source + ": header must be station,valid,<10 channel columns>");
  }
  for (int c = 0; c < kNumWeatherChannels; ++c) {
    if (header[static_cast<std::size_t>(c + 2)] != schema.names[static_cast<std::size_t>(c)]) {
      throw DataError(source + ": channel column " + std::to_string(c + 1) + " is '" +
                      header[static_cast<std::size_t>(c + 2)] + "', expected '" +
                      schema.names[static_cast<std::size_t>(c)] + "'");
    }
  }

  std::vector<WeatherObservation> result;
  std::unordered_map<std::string, std::size_t> index;  // "station@hour" -> slot
  std::vector<std::string> fields;
  while (reader.next_row(fields)) {
    WeatherObservation obs;
    obs.station_id = fields[0];
    if (obs.station_id.empty()) {
      throw DataError(source + ":" + std::to_string(reader.line_number()) + ": empty station id");
    }
    obs.hour = hour_of(parse_iso8601_utc(fields[1]));
    for (int c = 0; c < kNumWeatherChannels; ++c) {
      const std::string& cell = fields[static_cast<std::size_t>(c + 2)];
      if (cell.empty()) {
        obs.missing[static_cast<std::size_t>(c)] = true;
      } else {
        obs.channels[static_cast<std::size_t>(c)] = parse_double_field(
            cell, schema.names[static_cast<std::size_t>(c)], reader.line_number(), source);
      }
    }
    const std::string key = obs.station_id + "@" + std::to_string(obs.hour);
    auto [it, inserted] = index.emplace(key, result.size());
    if (inserted) {
      result.push_back(std::move(obs));
    } else {
      result[it->second] = std::move(obs);  // duplicate rows keep the last occurrence
    }
  }
  return result;
}

std::vector<StationLocation> parse_stations(std::istream& in, const std::string& source) {
  CsvReader reader(in, source);
  if (reader.header() != std::vector<std::string>{"station", "lat", "lon"}) {
    throw DataError(source + ": header must be station,lat,lon");
  }
  std::vector<StationLocation> result;
  std::unordered_set<std::string> seen;
  std::vector<std::string> fields;
  while (reader.next_row(fields)) {
    StationLocation st;
    st.station_id = fields[0];
    st.lat = parse_double_field(fields[1], "lat", reader.line_number(), source);
    st.lon = parse_double_field(fields[2], "lon", reader.line_number(), source);
    if (st.station_id.empty() || !seen.insert(st.station_id).second) {
      throw DataError(source + ":" + std::to_string(reader.line_number()) +
                      ": empty or duplicate station id '" + st.station_id + "'");
    }
    if (st.lat < -90.0 || st.lat > 90.0 || st.lon < -180.0 || st.lon > 180.0) {
      throw DataError(source + ":" + std::to_string(reader.line_number()) +
                      ": coordinates out of range");
    }
    result.push_back(std::move(st));
  }
  return result;
}

std::vector<OutageSnapshot> parse_snapshots(std::istream& in, const std::string& source) {
  CsvReader reader(in, source);
  if (reader.header() != std::vector<std::string>{"event_id", "observed_at", "customers"}) {
    throw DataError(source + ": header must be event_id,observed_at,customers");
  }
  std::vector<OutageSnapshot> result;
  std::vector<std::string> fields;
  while (reader.next_row(fields)) {
    OutageSnapshot snap;
    snap.event_id = fields[0];
    snap.observed_at = parse_iso8601_utc(fields[1]);
    snap.customers = parse_int_field(fields[2], "customers", reader.line_number(), source);
    if (snap.event_id.empty()) {
      throw DataError(source + ":" + std::to_string(reader.line_number()) + ": empty event id");
    }
    if (snap.customers < 0) {
      throw DataError(source + ":" + std::to_string(reader.line_number()) +
                      ": negative customer count");
    }
    result.push_back(std::move(snap));
  }
  return result;
}

std::vector<AllocationRow> parse_allocations(std::istream& in, const std::string& source) {
  CsvReader reader(in, source);
  if (reader.header() != std::vector<std::string>{"event_id", "tract_id", "fraction"}) {
    throw DataError(source + ": header must be event_id,tract_id,fraction");
  }
  std::vector<AllocationRow> result;
  std::vector<std::string> fields;
  while (reader.next_row(fields)) {
    AllocationRow row;
    row.event_id = fields[0];
    row.tract_id = fields[1];
    row.fraction = parse_double_field(fields[2], "fraction", reader.line_number(), source);
    if (row.event_id.empty() || row.tract_id.empty()) {
      throw DataError(source + ":" + std::to_string(reader.line_number()) + ": empty identifier");
    }
    if (!(row.fraction > 0.0) || row.fraction > 1.0 + 1e-6) {
      throw DataError(source + ":" + std::to_string(reader.line_number()) +
                      ": allocation fraction must lie in (0, 1]");
    }
    result.push_back(std::move(row));
  }
  return result;
}

namespace {

// Counts a contiguous run of columns named <prefix>1..<prefixN> starting at
// header position `pos`.
std::size_t count_prefixed(const std::vector<std::string>& header, std::size_t pos,
                           const std::string& prefix) {
  std::size_t n = 0;
  while (pos + n < header.size() && header[pos + n] == prefix + std::to_string(n + 1)) ++n;
  return n;
}

}  // namespace

std::vector<TractProfile> parse_tracts(std::istream& in, const std::string& source) {
  CsvReader reader(in, source);
  const auto& header = reader.header();
  const std::vector<std::string> fixed = {"tract_id", "lat",        "lon",
                                          "population", "households", "houses"};
  if (header.size() < fixed.size() ||
      !std::equal(fixed.begin(), fixed.end(), header.begin())) {
    throw DataError(source + ": header must start with tract_id,lat,lon,population,households,houses");
  }
  std::size_t pos = fixed.size();
  const std::size_t k_income = count_prefixed(header, pos, "inc_est_");
  pos += k_income;
  const std::size_t k_income_moe = count_prefixed(header, pos, "inc_moe_");
  pos += k_income_moe;
  const std::size_t k_year = count_prefixed(header, pos, "yb_est_");
  pos += k_year;
  const std::size_t k_year_moe = count_prefixed(header, pos, "yb_moe_");
  pos += k_year_moe;
  const std::size_t k_infra = count_prefixed(header, pos, "infra_");
  pos += k_infra;
  if (k_income == 0 || k_income != k_income_moe || k_year == 0 || k_year != k_year_moe ||
      k_infra != kNumInfraTypes || pos != header.size()) {
    throw DataError(source +
                    ": header must continue with inc_est_1..K,inc_moe_1..K,"
                    "yb_est_1..K,yb_moe_1..K,infra_1..11");
  }

  std::vector<TractProfile> result;
  std::unordered_set<std::string> seen;
  std::vector<std::string> fields;
  while (reader.next_row(fields)) {
    const std::size_t line = reader.line_number();
    TractProfile t;
    t.tract_id = fields[0];
    if (t.tract_id.empty() || !seen.insert(t.tract_id).second) {
      throw DataError(source + ":" + std::to_string(line) + ": empty or duplicate tract id '" +
                      t.tract_id + "'");
    }
    t.lat = parse_double_field(fields[1], "lat", line, source);
    t.lon = parse_double_field(fields[2], "lon", line, source);
    t.population = parse_int_field(fields[3], "population", line, source);
    t.households = parse_int_field(fields[4], "households", line, source);
    t.houses = parse_int_field(fields[5], "houses", line, source);
    if (t.lat < -90.0 || t.lat > 90.0 || t.lon < -180.0 || t.lon > 180.0) {
      throw DataError(source + ":" + std::to_string(line) + ": coordinates out of range");
    }
    if (t.population < 0 || t.households < 0 || t.houses < 0) {
      throw DataError(source + ":" + std::to_string(line) + ": negative count");
    }
    std::size_t f = 6;
    auto read_bins = [&](std::size_t k, const char* what) {
      std::vector<std::pair<double, double>> bins(k);
      for (std::size_t i = 0; i < k; ++i) {
        bins[i].first = parse_double_field(fields[f + i], what, line, source);
      }
      for (std::size_t i = 0; i < k; ++i) {
        bins[i].second = parse_double_field(fields[f + k + i], what, line, source);
      }
      for (const auto& [est, moe] : bins) {
        if (est < 0.0 || moe < 0.0) {
          throw DataError(source + ":" + std::to_string(line) + ": negative " +
                          std::string(what) + " value");
        }
      }
      f += 2 * k;
      return bins;
    };
    t.income_bins = read_bins(k_income, "income bin");
    t.year_built_bins = read_bins(k_year, "year-built bin");
    t.infra_total = 0;
    for (int i = 0; i < kNumInfraTypes; ++i) {
      const auto count =
          parse_int_field(fields[f + static_cast<std::size_t>(i)], "infra count", line, source);
      if (count < 0) {
        throw DataError(source + ":" + std::to_string(line) + ": negative infra count");
      }
      t.infra_counts[static_cast<std::size_t>(i)] = count;
      t.infra_total += count;
    }
    result.push_back(std::move(t));
  }
  return result;
}

// --- writers -----------------------------------------------------------------

void write_weather_csv(std::ostream& out, const WeatherSchema& schema,
                       const std::vector<WeatherObservation>& observations) {
  out << "station,valid";
  for (const auto& name : schema.names) out << ',' << name;
  out << '\n';
  for (const auto& obs : observations) {
    out << obs.station_id << ',' << format_iso8601_minutes(obs.hour * 3600);
    for (int c = 0; c < kNumWeatherChannels; ++c) {
      out << ',';
      if (!obs.missing[static_cast<std::size_t>(c)]) {
        out << format_double(obs.channels[static_cast<std::size_t>(c)]);
      }
    }
    out << '\n';
  }
}

void write_stations_csv(std::ostream& out, const std::vector<StationLocation>& stations) {
  out << "station,lat,lon\n";
  for (const auto& st : stations) {
    out << st.station_id << ',' << format_double(st.lat) << ',' << format_double(st.lon)
        << '\n';
  }
}

void write_snapshots_csv(std::ostream& out, const std::vector<OutageSnapshot>& snapshots) {
  out << "event_id,observed_at,customers\n";
  for (const auto& s : snapshots) {
    out << s.event_id << ',' << format_iso8601_minutes(s.observed_at) << ',' << s.customers
        << '\n';
  }
}

void write_allocations_csv(std::ostream& out, const std::vector<AllocationRow>& rows) {
  out << "event_id,tract_id,fraction\n";
  for (const auto& r : rows) {
    out << r.event_id << ',' << r.tract_id << ',' << format_double(r.fraction) << '\n';
  }
}

void write_tracts_csv(std::ostream& out, const std::vector<TractProfile>& tracts) {
  if (tracts.empty()) {
    throw DataError("tracts.csv: refusing to write an empty tract table");
  }
  const std::size_t k_income = tracts.front().income_bins.size();
  const std::size_t k_year = tracts.front().year_built_bins.size();
  out << "tract_id,lat,lon,population,households,houses";
  for (std::size_t i = 1; i <= k_income; ++i) out << ",inc_est_" << i;
  for (std::size_t i = 1; i <= k_income; ++i) out << ",inc_moe_" << i;
  for (std::size_t i = 1; i <= k_year; ++i) out << ",yb_est_" << i;
  for (std::size_t i = 1; i <= k_year; ++i) out << ",yb_moe_" << i;
  for (int i = 1; i <= kNumInfraTypes; ++i) out << ",infra_" << i;
  out << '\n';
  for (const auto& t : tracts) {
    if (t.income_bins.size() != k_income || t.year_built_bins.size() != k_year) {
      throw DataError("tracts.csv: tract '" + t.tract_id + "' has inconsistent bin counts");
    }
    out << t.tract_id << ',' << format_double(t.lat) << ',' << format_double(t.lon) << ','
        << t.population << ',' << t.households << ',' << t.houses;
    for (const auto& [est, moe] : t.income_bins) out << ',' << format_double(est);
    for (const auto& [est, moe] : t.income_bins) out << ',' << format_double(moe);
    for (const auto& [est, moe] : t.year_built_bins) out << ',' << format_double(est);
    for (const auto& [est, moe] : t.year_built_bins) out << ',' << format_double(moe);
    for (const auto count : t.infra_counts) out << ',' << count;
    out << '\n';
  }
}

// --- cleaning ----------------------------------------------------------------

WeatherGrid build_grid(const std::vector<WeatherObservation>& observations,
                       const std::vector<StationLocation>& stations) {
  if (stations.empty()) throw DataError("no weather stations defined");
  if (observations.empty()) throw DataError("no weather observations");

  WeatherGrid grid;
  grid.stations.reserve(stations.size());
  std::unordered_map<std::string, std::size_t> station_index;
  for (const auto& st : stations) {
    station_index.emplace(st.station_id, grid.stations.size());
    grid.stations.push_back(st.station_id);
  }

  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& obs : observations) {
    if (!station_index.contains(obs.station_id)) {
      throw DataError("weather station '" + obs.station_id + "' not present in the station table");
    }
    lo = std::min(lo, obs.hour);
    hi = std::max(hi, obs.hour);
  }
  grid.hour_begin = lo;
  grid.hour_end = hi + 1;

  const std::size_t n_cells = grid.stations.size() * static_cast<std::size_t>(grid.n_hours());
  grid.values.assign(n_cells * kNumWeatherChannels, 0.0);
  grid.missing.assign(n_cells * kNumWeatherChannels, 1);
  grid.absent.assign(n_cells, 1);

  for (const auto& obs : observations) {
    const std::size_t s = station_index.at(obs.station_id);
    const std::size_t base = grid.cell(s, obs.hour);
    grid.absent[base / kNumWeatherChannels] = 0;
    for (int c = 0; c < kNumWeatherChannels; ++c) {
      const auto idx = base + static_cast<std::size_t>(c);
      grid.values[idx] = obs.channels[static_cast<std::size_t>(c)];
      grid.missing[idx] = obs.missing[static_cast<std::size_t>(c)] ? 1 : 0;
    }
  }
  return grid;
}

void fill_missing(WeatherGrid& grid, const WeatherSchema& schema) {
  const std::size_t n_stations = grid.stations.size();
  const auto n_hours = static_cast<std::size_t>(grid.n_hours());

  // 1. absent station-hours: per-channel mean of the stations reporting that hour
  for (std::size_t h = 0; h < n_hours; ++h) {
    for (int c = 0; c < kNumWeatherChannels; ++c) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t s = 0; s < n_stations; ++s) {
        const std::size_t cell = s * n_hours + h;
        if (grid.absent[cell]) continue;
        const std::size_t idx = cell * kNumWeatherChannels + static_cast<std::size_t>(c);
        if (!grid.missing[idx]) {
          sum += grid.values[idx];
          ++count;
        }
      }
      if (count == 0) continue;
      const double mean = sum / static_cast<double>(count);
      for (std::size_t s = 0; s < n_stations; ++s) {
        const std::size_t cell = s * n_hours + h;
        if (!grid.absent[cell]) continue;
        const std::size_t idx = cell * kNumWeatherChannels + static_cast<std::size_t>(c);
        grid.values[idx] = mean;
        grid.missing[idx] = 0;
      }
    }
  }

  // 2. temporal interpolation within each station series; step-1 fills count
  //    as anchors. A series with no anchors falls back to the network mean.
  for (int c = 0; c < kNumWeatherChannels; ++c) {
    if (!schema.interpolated[static_cast<std::size_t>(c)]) continue;
    double network_sum = 0.0;
    std::size_t network_count = 0;
    for (std::size_t s = 0; s < n_stations; ++s) {
      for (std::size_t h = 0; h < n_hours; ++h) {
        const std::size_t idx = (s * n_hours + h) * kNumWeatherChannels + static_cast<std::size_t>(c);
        if (!grid.missing[idx]) {
          network_sum += grid.values[idx];
          ++network_count;
        }
      }
    }
    if (network_count == 0) {
      throw DataError("weather channel '" + schema.names[static_cast<std::size_t>(c)] +
                      "' is missing at every station for every hour");
    }
    const double network_mean = network_sum / static_cast<double>(network_count);

    for (std::size_t s = 0; s < n_stations; ++s) {
      std::vector<std::size_t> anchors;
      for (std::size_t h = 0; h < n_hours; ++h) {
        const std::size_t idx = (s * n_hours + h) * kNumWeatherChannels + static_cast<std::size_t>(c);
        if (!grid.missing[idx]) anchors.push_back(h);
      }
      auto value_at = [&](std::size_t h) -> double& {
        return grid.values[(s * n_hours + h) * kNumWeatherChannels + static_cast<std::size_t>(c)];
      };
      auto missing_at = [&](std::size_t h) -> std::uint8_t& {
        return grid.missing[(s * n_hours + h) * kNumWeatherChannels + static_cast<std::size_t>(c)];
      };
      if (anchors.empty()) {
        for (std::size_t h = 0; h < n_hours; ++h) {
          value_at(h) = network_mean;
          missing_at(h) = 0;
        }
        continue;
      }
      for (std::size_t h = 0; h < anchors.front(); ++h) {
        value_at(h) = value_at(anchors.front());
        missing_at(h) = 0;
      }
      for (std::size_t a = 0; a + 1 < anchors.size(); ++a) {
        const std::size_t h0 = anchors[a], h1 = anchors[a + 1];
        const double v0 = value_at(h0), v1 = value_at(h1);
        for (std::size_t h = h0 + 1; h < h1; ++h) {
          const double t = static_cast<double>(h - h0) / static_cast<double>(h1 - h0);
          value_at(h) = v0 + (v1 - v0) * t;
          missing_at(h) = 0;
        }
      }
      for (std::size_t h = anchors.back() + 1; h < n_hours; ++h) {
        value_at(h) = value_at(anchors.back());
        missing_at(h) = 0;
      }
    }
  }

  // 3. zero-fill the rest
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (grid.missing[i]) {
      grid.values[i] = 0.0;
      grid.missing[i] = 0;
    }
  }
  std::fill(grid.absent.begin(), grid.absent.end(), 0);
}

ChannelStats compute_stats(const WeatherGrid& grid, WarningSink* warnings) {
  if (grid.any_missing()) {
    throw DataError("compute_stats requires a filled grid");
  }
  const std::size_t n_cells = grid.stations.size() * static_cast<std::size_t>(grid.n_hours());
  if (n_cells == 0) throw DataError("compute_stats on empty grid");

  ChannelStats stats;
  for (int c = 0; c < kNumWeatherChannels; ++c) {
    double sum = 0.0;
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
      sum += grid.values[cell * kNumWeatherChannels + static_cast<std::size_t>(c)];
    }
    const double mean = sum / static_cast<double>(n_cells);
    double sq = 0.0;
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
      const double d = grid.values[cell * kNumWeatherChannels + static_cast<std::size_t>(c)] - mean;
      sq += d * d;
    }
    double std_dev = std::sqrt(sq / static_cast<double>(n_cells));
    if (!(std_dev > 0.0)) {
      warn(warnings, "weather channel " + std::to_string(c) +
                         " has zero variance; normalizing with std 1");
      std_dev = 1.0;
    }
    stats.mean[static_cast<std::size_t>(c)] = mean;
    stats.stddev[static_cast<std::size_t>(c)] = std_dev;
  }
  return stats;
}

void normalize(WeatherGrid& grid, const ChannelStats& stats) {
  const std::size_t n_cells = grid.stations.size() * static_cast<std::size_t>(grid.n_hours());
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    for (int c = 0; c < kNumWeatherChannels; ++c) {
      const std::size_t idx = cell * kNumWeatherChannels + static_cast<std::size_t>(c);
      grid.values[idx] = (grid.values[idx] - stats.mean[static_cast<std::size_t>(c)]) /
                         stats.stddev[static_cast<std::size_t>(c)];
    }
  }
}

std::vector<OutageEvent> consolidate_events(const std::vector<OutageSnapshot>& snapshots,
                                            const std::vector<AllocationRow>& allocations,
                                            WarningSink* warnings) {
  std::map<std::string, std::vector<const OutageSnapshot*>> by_event;
  for (const auto& snap : snapshots) by_event[snap.event_id].push_back(&snap);

  std::unordered_map<std::string, std::map<std::string, double>> alloc_by_event;
  for (const auto& row : allocations) {
    alloc_by_event[row.event_id][row.tract_id] += row.fraction;
  }

  std::vector<OutageEvent> events;
  for (const auto& [event_id, snaps] : by_event) {
    OutageEvent ev;
    ev.event_id = event_id;
    std::int64_t first = std::numeric_limits<std::int64_t>::max();
    std::int64_t last = std::numeric_limits<std::int64_t>::min();
    std::int64_t max_customers = 0;
    for (const auto* s : snaps) {
      first = std::min(first, s->observed_at);
      last = std::max(last, s->observed_at);
      max_customers = std::max(max_customers, s->customers);
    }
    if (max_customers <= 1) continue;  // small-event filter
    ev.start_hour = hour_of(first);
    ev.end_hour = hour_of(last);
    ev.max_customers = max_customers;

    const auto alloc_it = alloc_by_event.find(event_id);
    if (alloc_it == alloc_by_event.end()) {
      warn(warnings, "event '" + event_id + "' has no allocation rows; skipped");
      continue;
    }
    double sum = 0.0;
    for (const auto& [tract, fraction] : alloc_it->second) sum += fraction;
    if (!(sum > 0.0)) {
      warn(warnings, "event '" + event_id + "' has non-positive allocation total; skipped");
      continue;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      warn(warnings, "event '" + event_id + "' allocation fractions sum to " +
                         format_double(sum) + "; renormalized");
    }
    ev.allocations.reserve(alloc_it->second.size());
    for (const auto& [tract, fraction] : alloc_it->second) {
      ev.allocations.emplace_back(tract, fraction / sum);
    }
    events.push_back(std::move(ev));
  }
  return events;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusKm = 6371.0;
  constexpr double kDegToRad = 0.017453292519943295;
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlambda = (lon2 - lon1) * kDegToRad;
  const double sp = std::sin(dphi / 2.0);
  const double sl = std::sin(dlambda / 2.0);
  double a = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
  a = std::clamp(a, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(a));
}

std::vector<double> station_distances(double lat, double lon,
                                      const std::vector<StationLocation>& stations) {
  if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0) {
    throw DataError("station_distances: coordinates out of range");
  }
  std::vector<double> result;
  result.reserve(stations.size());
  for (const auto& st : stations) {
    result.push_back(haversine_km(lat, lon, st.lat, st.lon));
  }
  return result;
}

}  // namespace gridrisk
