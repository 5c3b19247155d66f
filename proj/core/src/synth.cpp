#include "gridrisk/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include "gridrisk/csv.hpp"
#include "gridrisk/config.hpp"
#include "gridrisk/eval.hpp"
#include "gridrisk/rng.hpp"
#include "gridrisk/timeutil.hpp"

namespace gridrisk {

namespace {

constexpr std::uint64_t kStationSalt = 0x57A7ull;
constexpr std::uint64_t kTractSalt = 0x7AC7ull;
constexpr std::uint64_t kStormSalt = 0x5702ull;
constexpr std::uint64_t kWeatherSalt = 0x3EA7ull;
constexpr std::uint64_t kOutageSalt = 0x007Aull;
constexpr std::uint64_t kEventSalt = 0xE4E7ull;
constexpr std::uint64_t kMissingSalt = 0x3155ull;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::string zero_padded(const char* prefix, std::size_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, value);
  return buf;
}

}  // namespace

void WorldSpec::validate() const {
  if (n_tracts < 10) throw UsageError("world spec: n_tracts must be at least 10");
  if (n_stations < 1) throw UsageError("world spec: n_stations must be positive");
  if (n_hours < 48) throw UsageError("world spec: n_hours must be at least 48");
  if (storm_rate < 0.0) throw UsageError("world spec: storm_rate must be nonnegative");
  if (income_bins < 1 || year_built_bins < 1) {
    throw UsageError("world spec: census bin counts must be positive");
  }
  if (missing_rate < 0.0 || missing_rate > 0.5 || absent_rate < 0.0 || absent_rate > 0.5) {
    throw UsageError("world spec: missing/absent rates must lie in [0, 0.5]");
  }
  if (!fragility_weights.empty() &&
      fragility_weights.size() != static_cast<std::size_t>(year_built_bins) + kNumInfraTypes) {
    throw UsageError("world spec: fragility_weights must have year_built_bins + 11 entries");
  }
}

WorldSpec WorldSpec::from_file(const std::filesystem::path& path) {
  WorldSpec spec;
  for (const auto& [key, value] : parse_key_value_file(path)) {
    spec.set(key, value);
  }
  spec.validate();
  return spec;
}

void WorldSpec::set(const std::string& key, const std::string& value) {
  try {
    if (key == "seed") {
      seed = std::stoull(value);
    } else if (key == "n_tracts") {
      n_tracts = std::stoi(value);
    } else if (key == "n_stations") {
      n_stations = std::stoi(value);
    } else if (key == "n_hours") {
      n_hours = std::stoi(value);
    } else if (key == "storm_rate") {
      storm_rate = std::stod(value);
    } else if (key == "wind_gain") {
      wind_gain = std::stod(value);
    } else if (key == "fragility_scale") {
      fragility_scale = std::stod(value);
    } else if (key == "base_offset") {
      base_offset = std::stod(value);
    } else if (key == "fragility_weights") {
      fragility_weights.clear();
      std::size_t start = 0;
      for (std::size_t i = 0; i <= value.size(); ++i) {
        if (i != value.size() && value[i] != ',') continue;
        if (i > start) fragility_weights.push_back(std::stod(value.substr(start, i - start)));
        start = i + 1;
      }
    } else if (key == "missing_rate") {
      missing_rate = std::stod(value);
    } else if (key == "absent_rate") {
      absent_rate = std::stod(value);
    } else if (key == "target_outage_fraction") {
      target_outage_fraction = std::stod(value);
    } else if (key == "income_bins") {
      income_bins = std::stoi(value);
    } else if (key == "year_built_bins") {
      year_built_bins = std::stoi(value);
    } else {
      throw UsageError("unknown world spec key '" + key + "'");
    }
  } catch (const std::invalid_argument&) {
    throw UsageError("malformed value '" + value + "' for world spec key '" + key + "'");
  } catch (const std::out_of_range&) {
    throw UsageError("out-of-range value '" + value + "' for world spec key '" + key + "'");
  }
}

void WorldSpec::print(std::ostream& out) const {
  out << "seed = " << seed << '\n'
      << "n_tracts = " << n_tracts << '\n'
      << "n_stations = " << n_stations << '\n'
      << "n_hours = " << n_hours << '\n'
      << "storm_rate = " << storm_rate << '\n'
      << "wind_gain = " << wind_gain << '\n'
      << "fragility_scale = " << fragility_scale << '\n'
      << "base_offset = " << base_offset << '\n'
      << "missing_rate = " << missing_rate << '\n'
      << "absent_rate = " << absent_rate << '\n'
      << "target_outage_fraction = " << target_outage_fraction << '\n'
      << "income_bins = " << income_bins << '\n'
      << "year_built_bins = " << year_built_bins << '\n';
}

std::vector<double> default_fragility_weights(int year_built_bins) {
  // Oldest structures weigh most; pole/line/tower-heavy infrastructure mixes
  // add the rest. Year-built part spans [0, 0.65], infra part [0, 0.35].
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(year_built_bins) + kNumInfraTypes);
  for (int k = 0; k < year_built_bins; ++k) {
    const double oldness =
        year_built_bins == 1
            ? 1.0
            : static_cast<double>(year_built_bins - 1 - k) / (year_built_bins - 1);
    weights.push_back(0.65 * oldness);
  }
  // compensator, generator, insulator, line, pole, portal, substation,
  // switch, terminal, tower, transformer
  const std::array<double, kNumInfraTypes> infra = {0.0, 0.0,  0.05, 0.3, 0.35, 0.0,
                                                    0.0, 0.05, 0.0,  0.2, 0.05};
  for (double w : infra) weights.push_back(0.35 * w);
  return weights;
}

double tract_fragility(const TractProfile& tract, const std::vector<double>& weights) {
  if (weights.size() != tract.year_built_bins.size() + kNumInfraTypes) {
    throw DataError("tract_fragility: weight vector does not match the tract profile");
  }
  double houses_total = 0.0;
  for (const auto& [est, moe] : tract.year_built_bins) houses_total += est;
  double f = 0.0;
  for (std::size_t k = 0; k < tract.year_built_bins.size(); ++k) {
    const double share = houses_total > 0.0 ? tract.year_built_bins[k].first / houses_total : 0.0;
    f += weights[k] * share;
  }
  for (int j = 0; j < kNumInfraTypes; ++j) {
    const double share = static_cast<double>(tract.infra_counts[static_cast<std::size_t>(j)]) /
                         static_cast<double>(std::max<std::int64_t>(1, tract.infra_total));
    f += weights[tract.year_built_bins.size() + static_cast<std::size_t>(j)] * share;
  }
  return f;
}

namespace {

struct Storm {
  int start = 0;
  int duration = 0;
  double intensity = 0.0;
};

}  // namespace

World generate_world(const WorldSpec& spec) {
  spec.validate();
  World world;
  world.spec = spec;
  world.schema = WeatherSchema::standard();
  world.hour_begin = hour_of(parse_iso8601_utc("2023-03-01T00:00"));
  world.hour_end = world.hour_begin + spec.n_hours;
  const auto n_hours = static_cast<std::size_t>(spec.n_hours);

  // stations
  {
    Rng rng(mix_seed({spec.seed, kStationSalt}));
    for (int s = 0; s < spec.n_stations; ++s) {
      StationLocation st;
      st.station_id = zero_padded("S", static_cast<std::size_t>(s + 1), 2);
      st.lat = 42.0 + rng.uniform(0.0, 1.2);
      st.lon = -84.2 + rng.uniform(0.0, 1.4);
      world.stations.push_back(std::move(st));
    }
  }

  // tracts
  const std::vector<double> frag_weights = world.spec.fragility_weights.empty()
                                               ? default_fragility_weights(spec.year_built_bins)
                                               : world.spec.fragility_weights;
  std::vector<double> fragility(static_cast<std::size_t>(spec.n_tracts), 0.0);
  {
    Rng rng(mix_seed({spec.seed, kTractSalt}));
    for (int t = 0; t < spec.n_tracts; ++t) {
      TractProfile tract;
      tract.tract_id = zero_padded("T", static_cast<std::size_t>(t + 1), 4);
      tract.lat = 42.0 + rng.uniform(0.0, 1.2);
      tract.lon = -84.2 + rng.uniform(0.0, 1.4);
      tract.population =
          static_cast<std::int64_t>(std::llround(std::exp(rng.uniform(std::log(150.0), std::log(1500.0)))));
      tract.households =
          std::max<std::int64_t>(1, std::llround(static_cast<double>(tract.population) / rng.uniform(2.2, 3.0)));
      tract.houses =
          std::max<std::int64_t>(1, std::llround(static_cast<double>(tract.households) * rng.uniform(1.0, 1.12)));

      // income distribution: pure nuisance features
      {
        std::vector<double> shares(static_cast<std::size_t>(spec.income_bins));
        double total = 0.0;
        for (double& s : shares) {
          s = -std::log(std::max(rng.uniform01(), 1e-12));
          total += s;
        }
        tract.income_bins.resize(shares.size());
        for (std::size_t k = 0; k < shares.size(); ++k) {
          const double estimate =
              std::round(shares[k] / total * static_cast<double>(tract.households));
          const double moe = std::round(estimate * rng.uniform(0.05, 0.25)) + 1.0;
          tract.income_bins[k] = {estimate, moe};
        }
      }

      // year-built distribution: age parameter sets the center of mass
      const double age = rng.uniform(0.05, 0.95);
      {
        const int k_bins = spec.year_built_bins;
        std::vector<double> shares(static_cast<std::size_t>(k_bins));
        const double center = (1.0 - age) * static_cast<double>(k_bins - 1);
        double total = 0.0;
        for (int k = 0; k < k_bins; ++k) {
          const double d = (static_cast<double>(k) - center) / 1.8;
          shares[static_cast<std::size_t>(k)] = std::exp(-d * d) * rng.uniform(0.7, 1.3);
          total += shares[static_cast<std::size_t>(k)];
        }
        tract.year_built_bins.resize(shares.size());
        for (std::size_t k = 0; k < shares.size(); ++k) {
          const double estimate =
              std::round(shares[k] / total * static_cast<double>(tract.houses));
          const double moe = std::round(estimate * rng.uniform(0.05, 0.2)) + 1.0;
          tract.year_built_bins[k] = {estimate, moe};
        }
      }

      // infrastructure counts per 1000 population; older tracts skew toward
      // poles, lines and towers
      {
        const std::array<double, kNumInfraTypes> rate = {0.05, 0.2, 1.0, 3.0, 8.0, 0.1,
                                                         0.15, 0.8, 0.3, 0.5, 2.0};
        const std::array<bool, kNumInfraTypes> age_linked = {false, false, false, true, true, false,
                                                             false, false, false, true, false};
        tract.infra_total = 0;
        for (int j = 0; j < kNumInfraTypes; ++j) {
          double expected = static_cast<double>(tract.population) / 1000.0 *
                            rate[static_cast<std::size_t>(j)] * rng.uniform(0.6, 1.4);
          if (age_linked[static_cast<std::size_t>(j)]) expected *= 0.6 + 0.9 * age;
          const auto count = static_cast<std::int64_t>(std::llround(expected));
          tract.infra_counts[static_cast<std::size_t>(j)] = std::max<std::int64_t>(0, count);
          tract.infra_total += tract.infra_counts[static_cast<std::size_t>(j)];
        }
        if (tract.infra_total == 0) {
          tract.infra_counts[4] = 1;  // at least one pole
          tract.infra_total = 1;
        }
      }

      fragility[static_cast<std::size_t>(t)] = tract_fragility(tract, frag_weights);
      world.tracts.push_back(std::move(tract));
    }
  }

  // storm driver profile
  std::vector<double> driver(n_hours, 0.0);
  {
    Rng rng(mix_seed({spec.seed, kStormSalt}));
    const std::int64_t n_storms =
        spec.storm_rate <= 0.0
            ? 0
            : std::max<std::int64_t>(
                  1, std::llround(spec.storm_rate * static_cast<double>(spec.n_hours) / 1000.0));
    for (std::int64_t i = 0; i < n_storms; ++i) {
      Storm storm;
      storm.duration = 4 + static_cast<int>(rng.below(5));
      storm.start = static_cast<int>(rng.below(n_hours - static_cast<std::size_t>(storm.duration)));
      storm.intensity = rng.uniform(2.8, 4.4);
      for (int h = storm.start; h < storm.start + storm.duration; ++h) {
        const double phase =
            (static_cast<double>(h - storm.start) + 0.5) / static_cast<double>(storm.duration);
        const double level = storm.intensity * std::sin(3.141592653589793 * phase);
        driver[static_cast<std::size_t>(h)] = std::max(driver[static_cast<std::size_t>(h)], level);
      }
    }
  }

  // weather observations, hour-major
  {
    std::vector<Rng> station_rng;
    std::vector<double> temp_offset, ar_noise, pressure_walk, wind_dir;
    for (int s = 0; s < spec.n_stations; ++s) {
      station_rng.emplace_back(mix_seed({spec.seed, kWeatherSalt, static_cast<std::uint64_t>(s)}));
      temp_offset.push_back(station_rng.back().uniform(-1.5, 1.5));
      ar_noise.push_back(0.0);
      pressure_walk.push_back(0.0);
      wind_dir.push_back(station_rng.back().uniform(0.0, 360.0));
    }
    Rng missing_rng(mix_seed({spec.seed, kMissingSalt}));
    world.weather.reserve(n_hours * static_cast<std::size_t>(spec.n_stations));

    for (std::size_t h = 0; h < n_hours; ++h) {
      const double daily = 2.0 * 3.141592653589793 * static_cast<double>(h % 24) / 24.0;
      const double seasonal =
          8.0 * std::sin(2.0 * 3.141592653589793 * static_cast<double>(h) / (24.0 * 30.0));
      const double d = driver[h];
      const double d_frac = d / 4.5;
      for (int s = 0; s < spec.n_stations; ++s) {
        Rng& rng = station_rng[static_cast<std::size_t>(s)];
        // keep the very first station-hour fully observed so every channel has
        // at least one network-wide anchor
        const bool immune = (h == 0 && s == 0);
        if (!immune && missing_rng.uniform01() < spec.absent_rate) {
          continue;  // station offline this hour
        }
        ar_noise[static_cast<std::size_t>(s)] =
            0.8 * ar_noise[static_cast<std::size_t>(s)] + 0.6 * rng.normal();
        const double temp = 10.0 + seasonal + 6.0 * std::sin(daily - 2.5) +
                            temp_offset[static_cast<std::size_t>(s)] +
                            ar_noise[static_cast<std::size_t>(s)];
        pressure_walk[static_cast<std::size_t>(s)] = std::clamp(
            pressure_walk[static_cast<std::size_t>(s)] + 0.01 * rng.normal(), -0.4, 0.4);
        wind_dir[static_cast<std::size_t>(s)] =
            std::fmod(wind_dir[static_cast<std::size_t>(s)] + 12.0 * rng.normal() + 40.0 * d_frac +
                          360.0 * 4.0,
                      360.0);

        WeatherObservation obs;
        obs.station_id = world.stations[static_cast<std::size_t>(s)].station_id;
        obs.hour = world.hour_begin + static_cast<std::int64_t>(h);
        const double wind = std::max(0.0, 5.0 + 2.0 * rng.normal() + 4.0 * d);
        const double gust = wind + 1.5 + (d > 0.0 ? 2.0 * d : 0.0) + std::abs(rng.normal()) * 0.8;
        const double humidity =
            std::clamp(65.0 - 1.2 * (temp - 10.0) + 12.0 * std::sin(daily + 1.0) +
                           3.0 * rng.normal() + 22.0 * d_frac,
                       5.0, 100.0);
        const double visibility =
            std::clamp(10.0 - 1.9 * d + 0.35 * rng.normal() - 0.3 * rng.uniform01(), 0.3, 10.0);
        double precip = 0.0;
        if (d > 0.3) {
          precip = 0.05 * (d - 0.3) * rng.uniform(0.95, 1.05);
        } else if (rng.uniform01() < 0.02) {
          precip = 0.002 * rng.uniform01();
        }
        const double dew = temp - (3.5 + 2.0 * rng.uniform01()) * (1.0 - 0.6 * d_frac);
        const double sky = std::clamp(
            0.32 + 0.22 * std::sin(daily * 0.8 + 2.0) + 0.14 * d + 0.05 * rng.normal(), 0.0, 1.0);

        obs.channels = {temp,
                        humidity,
                        29.92 + pressure_walk[static_cast<std::size_t>(s)] - 0.5 * d_frac,
                        wind,
                        wind_dir[static_cast<std::size_t>(s)],
                        gust,
                        visibility,
                        precip,
                        dew,
                        sky};
        for (int c = 0; c < kNumWeatherChannels; ++c) {
          if (!immune && world.schema.interpolated[static_cast<std::size_t>(c)] &&
              missing_rng.uniform01() < spec.missing_rate) {
            obs.missing[static_cast<std::size_t>(c)] = true;
            obs.channels[static_cast<std::size_t>(c)] = 0.0;
          }
        }
        world.weather.push_back(std::move(obs));
      }
    }
  }

  // outage process: binomial draws, hour-major so same-hour events can share
  // an allocation row pair
  world.p_true.assign(static_cast<std::size_t>(spec.n_tracts) * n_hours, 0.0);
  world.drawn_customers.assign(world.p_true.size(), 0);
  {
    Rng outage_rng(mix_seed({spec.seed, kOutageSalt}));
    Rng event_rng(mix_seed({spec.seed, kEventSalt}));
    std::size_t event_counter = 0;

    struct Cell {
      int tract;
      std::int64_t customers;
    };
    std::vector<Cell> hour_cells;

    for (std::size_t h = 0; h < n_hours; ++h) {
      hour_cells.clear();
      for (int t = 0; t < spec.n_tracts; ++t) {
        const double p = sigmoid(spec.wind_gain * driver[h] +
                                 spec.fragility_scale * fragility[static_cast<std::size_t>(t)] -
                                 spec.base_offset);
        const std::size_t cell = static_cast<std::size_t>(t) * n_hours + h;
        world.p_true[cell] = p;
        const std::int64_t customers = outage_rng.binomial(world.tracts[static_cast<std::size_t>(t)].population, p);
        world.drawn_customers[cell] = customers;
        if (customers >= 1) hour_cells.push_back(Cell{t, customers});
      }

      const std::int64_t hour_start_sec = (world.hour_begin + static_cast<std::int64_t>(h)) * 3600;
      std::size_t i = 0;
      while (i < hour_cells.size()) {
        // occasionally merge two same-hour cells into one multi-tract event
        const bool paired = i + 1 < hour_cells.size() && event_rng.uniform01() < 0.15;
        const std::int64_t total = hour_cells[i].customers +
                                   (paired ? hour_cells[i + 1].customers : 0);
        const std::string event_id = zero_padded("E", ++event_counter, 6);

        const int n_snaps = 2 + static_cast<int>(event_rng.below(3));
        const std::size_t peak = event_rng.below(static_cast<std::uint64_t>(n_snaps));
        for (int snap = 0; snap < n_snaps; ++snap) {
          OutageSnapshot s;
          s.event_id = event_id;
          s.observed_at = hour_start_sec + static_cast<std::int64_t>(snap) * 900;
          s.customers = static_cast<std::size_t>(snap) == peak
                            ? total
                            : 1 + static_cast<std::int64_t>(
                                      event_rng.below(static_cast<std::uint64_t>(total)));
          world.snapshots.push_back(std::move(s));
        }

        if (paired) {
          const double fa = static_cast<double>(hour_cells[i].customers) / static_cast<double>(total);
          world.allocations.push_back(
              AllocationRow{event_id, world.tracts[static_cast<std::size_t>(hour_cells[i].tract)].tract_id, fa});
          world.allocations.push_back(AllocationRow{
              event_id, world.tracts[static_cast<std::size_t>(hour_cells[i + 1].tract)].tract_id, 1.0 - fa});
          i += 2;
        } else {
          world.allocations.push_back(AllocationRow{
              event_id, world.tracts[static_cast<std::size_t>(hour_cells[i].tract)].tract_id, 1.0});
          i += 1;
        }
      }
    }
  }
  return world;
}

void write_world(const World& world, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto open = [&](const char* name) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw DataError("cannot write '" + (out_dir / name).string() + "'");
    return out;
  };
  {
    auto out = open("weather.csv");
    write_weather_csv(out, world.schema, world.weather);
  }
  {
    auto out = open("stations.csv");
    write_stations_csv(out, world.stations);
  }
  {
    auto out = open("outage_snapshots.csv");
    write_snapshots_csv(out, world.snapshots);
  }
  {
    auto out = open("event_allocations.csv");
    write_allocations_csv(out, world.allocations);
  }
  {
    auto out = open("tracts.csv");
    write_tracts_csv(out, world.tracts);
  }
  {
    auto out = open("truth.csv");
    write_truth_csv(out, truth_of(world));
  }
}

TruthTable truth_of(const World& world) {
  TruthTable truth;
  truth.hour_begin = world.hour_begin;
  truth.hour_end = world.hour_end;
  truth.tract_ids.reserve(world.tracts.size());
  for (const auto& t : world.tracts) truth.tract_ids.push_back(t.tract_id);
  truth.p = world.p_true;
  return truth;
}

void write_truth_csv(std::ostream& out, const TruthTable& truth) {
  out << "tract_id,hour,p_true\n";
  const auto n_hours = static_cast<std::size_t>(truth.hour_end - truth.hour_begin);
  for (std::size_t t = 0; t < truth.tract_ids.size(); ++t) {
    for (std::size_t h = 0; h < n_hours; ++h) {
      out << truth.tract_ids[t] << ',' << (truth.hour_begin + static_cast<std::int64_t>(h)) << ','
          << format_double(truth.p[t * n_hours + h]) << '\n';
    }
  }
}

TruthTable load_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  CsvReader reader(in, path.string());
  if (reader.header() != std::vector<std::string>{"tract_id", "hour", "p_true"}) {
    throw DataError(path.string() + ": header must be tract_id,hour,p_true");
  }
  struct Row {
    std::string tract;
    std::int64_t hour;
    double p;
  };
  std::vector<Row> rows;
  std::vector<std::string> fields;
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  while (reader.next_row(fields)) {
    Row row;
    row.tract = fields[0];
    row.hour = parse_int_field(fields[1], "hour", reader.line_number(), path.string());
    row.p = parse_double_field(fields[2], "p_true", reader.line_number(), path.string());
    lo = std::min(lo, row.hour);
    hi = std::max(hi, row.hour);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError(path.string() + ": empty truth table");

  TruthTable truth;
  truth.hour_begin = lo;
  truth.hour_end = hi + 1;
  const auto n_hours = static_cast<std::size_t>(truth.hour_end - truth.hour_begin);
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& row : rows) {
    if (index.emplace(row.tract, truth.tract_ids.size()).second) {
      truth.tract_ids.push_back(row.tract);
    }
  }
  truth.p.assign(truth.tract_ids.size() * n_hours, 0.0);
  for (const auto& row : rows) {
    truth.p[index.at(row.tract) * n_hours + static_cast<std::size_t>(row.hour - truth.hour_begin)] =
        row.p;
  }
  return truth;
}

double bayes_rmse(const TruthTable& truth, const TargetTable& targets,
                  const SplitAssignment& split) {
  if (truth.hour_begin != targets.hour_begin || truth.hour_end != targets.hour_end) {
    throw DataError("bayes_rmse: truth and target hour ranges differ");
  }
  std::unordered_map<std::string, std::size_t> truth_index, target_index;
  for (std::size_t i = 0; i < truth.tract_ids.size(); ++i) truth_index.emplace(truth.tract_ids[i], i);
  for (std::size_t i = 0; i < targets.tract_ids.size(); ++i) {
    target_index.emplace(targets.tract_ids[i], i);
  }

  std::vector<double> gt, pred;
  for (const auto& tract_id : split.test) {
    const auto ti = truth_index.find(tract_id);
    const auto gi = target_index.find(tract_id);
    if (ti == truth_index.end() || gi == target_index.end()) {
      throw DataError("bayes_rmse: tract '" + tract_id + "' missing from truth or targets");
    }
    for (std::int64_t h = truth.hour_begin; h < truth.hour_end; ++h) {
      pred.push_back(threshold_value(truth.at(ti->second, h)));
      gt.push_back(targets.at(gi->second, h));
    }
  }
  return rmse(gt, pred);
}

}  // namespace gridrisk
