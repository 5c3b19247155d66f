#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "gridrisk/features.hpp"

using namespace gridrisk;

namespace {

TractProfile make_tract(const std::string& id, std::int64_t population) {
  TractProfile t;
  t.tract_id = id;
  t.lat = 42.0;
  t.lon = -83.0;
  t.population = population;
  t.households = population / 2;
  t.houses = population / 2;
  t.income_bins.assign(10, {5.0, 1.0});
  t.year_built_bins.assign(9, {4.0, 1.0});
  t.infra_counts.fill(1);
  t.infra_total = kNumInfraTypes;
  return t;
}

OutageEvent make_event(const std::string& id, std::int64_t start, std::int64_t end,
                       std::int64_t max_customers,
                       std::vector<std::pair<std::string, double>> alloc) {
  OutageEvent ev;
  ev.event_id = id;
  ev.start_hour = start;
  ev.end_hour = end;
  ev.max_customers = max_customers;
  ev.allocations = std::move(alloc);
  return ev;
}

}  // namespace

TEST_CASE("targets are allocated customers over population, clipped at 1") {
  const std::vector<TractProfile> tracts = {make_tract("T1", 100), make_tract("T2", 200)};
  const std::vector<OutageEvent> events = {
      make_event("E1", 5, 5, 150, {{"T1", 1.0}}),
      make_event("E2", 6, 6, 50, {{"T2", 1.0}}),
  };
  const TargetTable table = build_targets(events, tracts, 0, 10);
  CHECK(table.at(0, 5) == 1.0);   // 150 allocated onto population 100
  CHECK(table.at(1, 6) == 0.25);  // 50 / 200
  CHECK(table.at(0, 6) == 0.0);
  CHECK(table.at(1, 5) == 0.0);
}

TEST_CASE("overlapping events accumulate before clipping") {
  // oracle: brute-force hour-by-hour accumulation
  const std::vector<TractProfile> tracts = {make_tract("T1", 400)};
  const std::vector<OutageEvent> events = {
      make_event("E1", 3, 6, 30, {{"T1", 1.0}}),
      make_event("E2", 5, 8, 20, {{"T1", 1.0}}),
  };
  const TargetTable table = build_targets(events, tracts, 0, 12);
  std::vector<double> oracle(12, 0.0);
  for (const auto& ev : events) {
    for (std::int64_t h = ev.start_hour; h <= ev.end_hour; ++h) {
      oracle[static_cast<std::size_t>(h)] += static_cast<double>(ev.max_customers);
    }
  }
  for (std::int64_t h = 0; h < 12; ++h) {
    CHECK(table.at(0, h) ==
          doctest::Approx(std::min(oracle[static_cast<std::size_t>(h)] / 400.0, 1.0))
              .epsilon(1e-12));
  }
  CHECK(table.at(0, 5) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("hours outside every event window have target exactly zero") {
  const std::vector<TractProfile> tracts = {make_tract("T1", 100)};
  const TargetTable table =
      build_targets({make_event("E1", 4, 5, 10, {{"T1", 1.0}})}, tracts, 0, 10);
  for (std::int64_t h = 0; h < 10; ++h) {
    if (h == 4 || h == 5) continue;
    CHECK(table.at(0, h) == 0.0);
  }
}

TEST_CASE("zero population with outage customers warns and clamps to 1") {
  WarningSink warnings;
  const std::vector<TractProfile> tracts = {make_tract("T1", 0)};
  const TargetTable table =
      build_targets({make_event("E1", 1, 1, 5, {{"T1", 1.0}})}, tracts, 0, 4, &warnings);
  CHECK(table.at(0, 1) == 1.0);
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("augmented bins stay inside the margin-of-error interval") {
  Rng rng(12345);
  SUBCASE("zero margin reproduces estimates") {
    const auto out = augment_distribution({{3.0, 0.0}, {7.0, 0.0}}, rng);
    CHECK(out == std::vector<double>{3.0, 7.0});
  }
  SUBCASE("draws cover [estimate-moe, estimate+moe]") {
    // oracle: 10^4 draws, bounds check
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < 10000; ++i) {
      const auto out = augment_distribution({{10.0, 4.0}}, rng);
      REQUIRE(out.size() == 1);
      CHECK(out[0] >= 6.0);
      CHECK(out[0] <= 14.0);
      lo = std::min(lo, out[0]);
      hi = std::max(hi, out[0]);
    }
    CHECK(lo < 6.5);
    CHECK(hi > 13.5);
  }
  SUBCASE("negative draws floor at zero") {
    for (int i = 0; i < 10000; ++i) {
      const auto out = augment_distribution({{1.0, 5.0}}, rng);
      CHECK(out[0] >= 0.0);
      CHECK(out[0] <= 6.0);
    }
  }
}

TEST_CASE("softmax_normalize matches direct exp/sum evaluation") {
  SUBCASE("equal bins give the uniform vector") {
    const auto out = softmax_normalize({5.0, 5.0, 5.0, 5.0}, 20.0);
    for (const double v : out) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("one-hot mass concentrates by a factor of e") {
    // oracle: direct evaluation with logits (1, 0, 0)
    const double total = 12.0;
    const auto out = softmax_normalize({total, 0.0, 0.0}, total);
    const double e = std::exp(1.0);
    CHECK(out[0] == doctest::Approx(e / (e + 2.0)).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(1.0 / (e + 2.0)).epsilon(1e-12));
    CHECK(out[2] == doctest::Approx(1.0 / (e + 2.0)).epsilon(1e-12));
    CHECK(out[0] == doctest::Approx(0.576).epsilon(1e-3));
  }
  SUBCASE("output is a strictly positive simplex vector") {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
      std::vector<double> bins(1 + rng.below(12));
      for (double& b : bins) b = rng.uniform(0.0, 50.0);
      const auto out = softmax_normalize(bins, 50.0);
      double sum = 0.0;
      for (const double v : out) {
        CHECK(v > 0.0);
        sum += v;
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
  SUBCASE("non-positive totals warn and fall back to uniform") {
    WarningSink warnings;
    const auto out = softmax_normalize({1.0, 2.0}, 0.0, &warnings);
    CHECK(out[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(warnings.empty());
  }
}

TEST_CASE("assemble_sample respects the feature mask layout") {
  const TractProfile tract = make_tract("T1", 500);
  const std::size_t n_stations = 5;
  std::vector<double> weather(n_stations * kNumWeatherChannels, 0.5);
  std::vector<double> distances(n_stations, 10.0);

  SUBCASE("weather-only mask leaves the condition empty") {
    FeatureMask mask;  // weather only
    const auto sample = assemble_sample(tract, 7, weather, distances, 0.25, mask);
    CHECK(sample.base.size() == n_stations * kNumWeatherChannels);
    CHECK(sample.condition.empty());
    CHECK(sample.target == 0.25);
  }
  SUBCASE("full mask matches the sum of configured group lengths") {
    // oracle: 5*10 + 5 distances; condition 10 + 9 + 11 + 4
    const auto sample = assemble_sample(tract, 7, weather, distances, 0.0, FeatureMask::full());
    CHECK(sample.base.size() == 55);
    CHECK(sample.condition.size() == 34);
    CHECK(base_dim(n_stations, FeatureMask::full()) == 55);
    CHECK(condition_dim(10, 9, FeatureMask::full()) == 34);
  }
  SUBCASE("condition is hour-independent without augmentation") {
    const auto a = assemble_sample(tract, 7, weather, distances, 0.0, FeatureMask::full());
    const auto b = assemble_sample(tract, 8, weather, distances, 0.0, FeatureMask::full());
    CHECK(a.condition == b.condition);
  }
  SUBCASE("dimension mismatches are fatal") {
    std::vector<double> short_distances(n_stations - 1, 1.0);
    CHECK_THROWS_AS(
        assemble_sample(tract, 7, weather, short_distances, 0.0, FeatureMask::full()),
        DataError);
    std::vector<double> ragged(n_stations * kNumWeatherChannels - 3, 0.0);
    CHECK_THROWS_AS(assemble_sample(tract, 7, ragged, distances, 0.0, FeatureMask::full()),
                    DataError);
    CHECK_THROWS_AS(assemble_sample(tract, 7, weather, distances, 1.5, FeatureMask::full()),
                    DataError);
  }
}

TEST_CASE("feature mask parsing and the ablation ladder") {
  const auto ladder = FeatureMask::ablation_ladder();
  CHECK(ladder[0] == FeatureMask{});
  CHECK(ladder[5] == FeatureMask::full());
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    // each row adds exactly one group
    const auto count = [](const FeatureMask& m) {
      return int(m.weather) + int(m.distance) + int(m.totals) + int(m.income) +
             int(m.year_built) + int(m.power_infra);
    };
    CHECK(count(ladder[i]) == count(ladder[i - 1]) + 1);
  }
  CHECK(FeatureMask::parse("weather,distance").distance);
  CHECK_FALSE(FeatureMask::parse("weather,distance").totals);
  CHECK(FeatureMask::parse("weather, totals").totals);
  CHECK_THROWS_AS(FeatureMask::parse("distance"), UsageError);  // weather required
  CHECK_THROWS_AS(FeatureMask::parse("weather,bogus"), UsageError);
  CHECK(ladder[5].describe() == "weather+distance+totals+income+year_built+power_infra");
}

TEST_CASE("split_tracts honors the 72/8/20 proportions") {
  std::vector<std::string> ids;
  for (int i = 0; i < 100; ++i) ids.push_back("T" + std::to_string(i));
  const SplitAssignment split = split_tracts(ids, 9);
  CHECK(split.train.size() == 72);
  CHECK(split.val.size() == 8);
  CHECK(split.test.size() == 20);

  // partition: disjoint and exhaustive
  std::set<std::string> seen;
  for (const auto& id : split.train) CHECK(seen.insert(id).second);
  for (const auto& id : split.val) CHECK(seen.insert(id).second);
  for (const auto& id : split.test) CHECK(seen.insert(id).second);
  CHECK(seen.size() == ids.size());
}

TEST_CASE("tiny splits borrow one validation tract from train") {
  // oracle: floor arithmetic (7/0/2, remainder to train -> 8/0/2) + fallback
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("T" + std::to_string(i));
  const SplitAssignment split = split_tracts(ids, 1);
  CHECK(split.train.size() == 7);
  CHECK(split.val.size() == 1);
  CHECK(split.test.size() == 2);
  CHECK_THROWS_AS(split_tracts({"a", "b"}, 1), DataError);
}

TEST_CASE("split_tracts is deterministic in the seed") {
  std::vector<std::string> ids;
  for (int i = 0; i < 25; ++i) ids.push_back("T" + std::to_string(i));
  const SplitAssignment a = split_tracts(ids, 77);
  const SplitAssignment b = split_tracts(ids, 77);
  CHECK(a.train == b.train);
  CHECK(a.val == b.val);
  CHECK(a.test == b.test);
  const SplitAssignment c = split_tracts(ids, 78);
  CHECK(a.train != c.train);
}
