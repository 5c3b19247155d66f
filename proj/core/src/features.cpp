#include "gridrisk/features.hpp"

#include <algorithm>
#include <cmath>

#include "gridrisk/csv.hpp"

namespace gridrisk {

FeatureMask FeatureMask::full() {
  return FeatureMask{true, true, true, true, true, true};
}

std::array<FeatureMask, 6> FeatureMask::ablation_ladder() {
  std::array<FeatureMask, 6> ladder;
  ladder[0] = FeatureMask{};
  ladder[1] = ladder[0];
  ladder[1].distance = true;
  ladder[2] = ladder[1];
  ladder[2].totals = true;
  ladder[3] = ladder[2];
  ladder[3].income = true;
  ladder[4] = ladder[3];
  ladder[4].year_built = true;
  ladder[5] = ladder[4];
  ladder[5].power_infra = true;
  return ladder;
}

FeatureMask FeatureMask::parse(const std::string& list) {
  FeatureMask mask;
  mask.weather = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= list.size(); ++i) {
    if (i != list.size() && list[i] != ',') continue;
    std::string name = list.substr(start, i - start);
    start = i + 1;
    // trim spaces
    while (!name.empty() && name.front() == ' ') name.erase(name.begin());
    while (!name.empty() && name.back() == ' ') name.pop_back();
    if (name.empty()) continue;
    if (name == "weather") {
      mask.weather = true;
    } else if (name == "distance") {
      mask.distance = true;
    } else if (name == "totals") {
      mask.totals = true;
    } else if (name == "income") {
      mask.income = true;
    } else if (name == "year_built") {
      mask.year_built = true;
    } else if (name == "power_infra") {
      mask.power_infra = true;
    } else {
      throw UsageError("unknown feature group '" + name + "'");
    }
  }
  if (!mask.weather) {
    throw UsageError("feature mask must include the weather group");
  }
  return mask;
}

std::string FeatureMask::describe() const {
  std::string out = "weather";
  if (distance) out += "+distance";
  if (totals) out += "+totals";
  if (income) out += "+income";
  if (year_built) out += "+year_built";
  if (power_infra) out += "+power_infra";
  return out;
}

Subset SplitAssignment::of(const std::string& tract_id) const {
  const auto it = by_tract.find(tract_id);
  if (it == by_tract.end()) {
    throw DataError("tract '" + tract_id + "' not present in the split");
  }
  return it->second;
}

TargetTable build_targets(const std::vector<OutageEvent>& events,
                          const std::vector<TractProfile>& tracts, std::int64_t hour_begin,
                          std::int64_t hour_end, WarningSink* warnings) {
  if (hour_end <= hour_begin) throw DataError("build_targets: empty hour range");
  TargetTable table;
  table.hour_begin = hour_begin;
  table.hour_end = hour_end;
  const auto n_hours = static_cast<std::size_t>(hour_end - hour_begin);
  table.tract_ids.reserve(tracts.size());
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& t : tracts) {
    index.emplace(t.tract_id, table.tract_ids.size());
    table.tract_ids.push_back(t.tract_id);
  }

  // customers that lost power, per (tract, hour)
  std::vector<double> counts(tracts.size() * n_hours, 0.0);
  for (const auto& ev : events) {
    const std::int64_t lo = std::max(ev.start_hour, hour_begin);
    const std::int64_t hi = std::min(ev.end_hour, hour_end - 1);
    for (const auto& [tract_id, fraction] : ev.allocations) {
      const auto it = index.find(tract_id);
      if (it == index.end()) {
        warn(warnings, "event '" + ev.event_id + "' allocates to unknown tract '" + tract_id +
                           "'; ignored");
        continue;
      }
      const double allocated = static_cast<double>(ev.max_customers) * fraction;
      for (std::int64_t h = lo; h <= hi; ++h) {
        counts[it->second * n_hours + static_cast<std::size_t>(h - hour_begin)] += allocated;
      }
    }
  }

  table.values.assign(counts.size(), 0.0);
  for (std::size_t t = 0; t < tracts.size(); ++t) {
    const double population = static_cast<double>(tracts[t].population);
    bool warned = false;
    for (std::size_t h = 0; h < n_hours; ++h) {
      const double count = counts[t * n_hours + h];
      if (count <= 0.0) continue;
      double target;
      if (population <= 0.0) {
        if (!warned) {
          warn(warnings, "tract '" + tracts[t].tract_id +
                             "' has zero population but outage customers; target set to 1");
          warned = true;
        }
        target = 1.0;
      } else {
        target = std::min(count / population, 1.0);
      }
      table.values[t * n_hours + h] = target;
    }
  }
  return table;
}

std::vector<double> augment_distribution(const std::vector<std::pair<double, double>>& bins,
                                         Rng& rng) {
  std::vector<double> out;
  out.reserve(bins.size());
  for (const auto& [estimate, moe] : bins) {
    out.push_back(std::max(0.0, rng.uniform(estimate - moe, estimate + moe)));
  }
  return out;
}

std::vector<double> softmax_normalize(const std::vector<double>& bins, double total,
                                      WarningSink* warnings) {
  if (bins.empty()) throw DataError("softmax_normalize: empty bin vector");
  std::vector<double> logits(bins.size(), 0.0);
  if (total > 0.0) {
    for (std::size_t i = 0; i < bins.size(); ++i) logits[i] = bins[i] / total;
  } else {
    warn(warnings, "softmax_normalize: non-positive total " + format_double(total) +
                       "; falling back to uniform");
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  std::vector<double> out(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    out[i] = std::exp(logits[i] - max_logit);
    denom += out[i];
  }
  for (double& v : out) v /= denom;
  return out;
}

std::size_t base_dim(std::size_t n_stations, const FeatureMask& mask) {
  return n_stations * kNumWeatherChannels + (mask.distance ? n_stations : 0);
}

std::size_t condition_dim(std::size_t k_income, std::size_t k_year, const FeatureMask& mask) {
  std::size_t dim = 0;
  if (mask.income) dim += k_income;
  if (mask.year_built) dim += k_year;
  if (mask.power_infra) dim += kNumInfraTypes;
  if (mask.totals) dim += 4;
  return dim;
}

std::vector<double> condition_vector(const TractProfile& tract, const FeatureMask& mask,
                                     Rng* augment, WarningSink* warnings) {
  std::vector<double> out;
  out.reserve(condition_dim(tract.income_bins.size(), tract.year_built_bins.size(), mask));

  auto append_simplex = [&](const std::vector<std::pair<double, double>>& bins, double total) {
    std::vector<double> estimates;
    if (augment != nullptr) {
      estimates = augment_distribution(bins, *augment);
    } else {
      estimates.reserve(bins.size());
      for (const auto& [est, moe] : bins) estimates.push_back(est);
    }
    const auto simplex = softmax_normalize(estimates, total, warnings);
    out.insert(out.end(), simplex.begin(), simplex.end());
  };

  if (mask.income) {
    append_simplex(tract.income_bins, static_cast<double>(tract.households));
  }
  if (mask.year_built) {
    append_simplex(tract.year_built_bins, static_cast<double>(tract.houses));
  }
  if (mask.power_infra) {
    std::vector<double> counts(tract.infra_counts.begin(), tract.infra_counts.end());
    const auto simplex =
        softmax_normalize(counts, static_cast<double>(tract.infra_total), warnings);
    out.insert(out.end(), simplex.begin(), simplex.end());
  }
  if (mask.totals) {
    out.push_back(std::log1p(static_cast<double>(tract.population)));
    out.push_back(std::log1p(static_cast<double>(tract.households)));
    out.push_back(std::log1p(static_cast<double>(tract.houses)));
    out.push_back(std::log1p(static_cast<double>(tract.infra_total)));
  }
  return out;
}

HourlySample assemble_sample(const TractProfile& tract, std::int64_t hour,
                             std::span<const double> weather_slice,
                             std::span<const double> distances_km, double target,
                             const FeatureMask& mask, Rng* augment, WarningSink* warnings) {
  if (weather_slice.size() % kNumWeatherChannels != 0) {
    throw DataError("assemble_sample: weather slice is not a whole number of stations");
  }
  const std::size_t n_stations = weather_slice.size() / kNumWeatherChannels;
  if (distances_km.size() != n_stations) {
    throw DataError("assemble_sample: distance vector does not match station count");
  }
  if (target < 0.0 || target > 1.0) {
    throw DataError("assemble_sample: target outside [0, 1]");
  }

  HourlySample sample;
  sample.tract_id = tract.tract_id;
  sample.hour = hour;
  sample.target = target;
  sample.base.reserve(base_dim(n_stations, mask));
  sample.base.assign(weather_slice.begin(), weather_slice.end());
  if (mask.distance) {
    sample.base.insert(sample.base.end(), distances_km.begin(), distances_km.end());
  }
  sample.condition = condition_vector(tract, mask, augment, warnings);
  return sample;
}

SplitAssignment split_tracts(const std::vector<std::string>& tract_ids, std::uint64_t seed) {
  const std::size_t n = tract_ids.size();
  if (n < 10) throw DataError("split_tracts requires at least 10 tracts");

  std::vector<std::string> shuffled = tract_ids;
  Rng rng(mix_seed({seed, 0x5A117ull}));
  rng.shuffle(shuffled);

  std::size_t n_train = static_cast<std::size_t>(std::floor(0.72 * static_cast<double>(n)));
  std::size_t n_val = static_cast<std::size_t>(std::floor(0.08 * static_cast<double>(n)));
  const std::size_t n_test = static_cast<std::size_t>(std::floor(0.20 * static_cast<double>(n)));
  n_train += n - (n_train + n_val + n_test);  // remainder to train
  if (n_val == 0 && n_train >= 2) {
    n_val = 1;
    --n_train;
  }

  SplitAssignment split;
  split.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.val.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train),
                   shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  split.test.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train + n_val),
                    shuffled.end());
  for (const auto& id : split.train) split.by_tract.emplace(id, Subset::train);
  for (const auto& id : split.val) split.by_tract.emplace(id, Subset::val);
  for (const auto& id : split.test) split.by_tract.emplace(id, Subset::test);
  return split;
}

}  // namespace gridrisk
