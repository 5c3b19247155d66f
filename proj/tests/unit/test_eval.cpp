#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "gridrisk/eval.hpp"
#include "gridrisk/pipeline.hpp"
#include "gridrisk/rng.hpp"
#include "gridrisk/synth.hpp"
#include "gridrisk/train.hpp"

#include "test_util.hpp"

using namespace gridrisk;

TEST_CASE("thresholding zeroes strictly-below-0.05 predictions") {
  CHECK(threshold_value(0.04) == 0.0);
  CHECK(threshold_value(0.05) == 0.05);  // boundary kept
  CHECK(threshold_value(0.0) == 0.0);
  CHECK(threshold_value(0.9) == 0.9);

  Rng rng(41);
  std::vector<double> preds(1000);
  for (double& p : preds) p = rng.uniform01();
  const auto once = threshold(preds);
  const auto twice = threshold(once);
  CHECK(once == twice);  // idempotent
  for (std::size_t i = 0; i < preds.size(); ++i) {
    CHECK(once[i] <= preds[i]);  // monotone non-increasing
    if (preds[i] >= 0.05) CHECK(once[i] == preds[i]);
  }
}

TEST_CASE("mae and rmse follow their formulas") {
  const std::vector<double> gt = {0.0, 1.0};
  const std::vector<double> zeros = {0.0, 0.0};
  CHECK(mae(gt, gt) == 0.0);
  CHECK(rmse(gt, gt) == 0.0);
  CHECK(mae(gt, zeros) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rmse(gt, zeros) == doctest::Approx(0.7071067811865476).epsilon(1e-12));

  // constant error: power-mean equality case
  const std::vector<double> a = {0.2, 0.5, 0.9};
  const std::vector<double> b = {0.3, 0.6, 1.0};
  CHECK(mae(a, b) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rmse(a, b) == doctest::Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(mae(gt, std::vector<double>{1.0}), DataError);
  CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), DataError);
}

TEST_CASE("mae never exceeds rmse") {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 1 + rng.below(20);
    std::vector<double> gt(n), pred(n);
    for (std::size_t k = 0; k < n; ++k) {
      gt[k] = rng.uniform01();
      pred[k] = rng.uniform01();
    }
    CHECK(mae(gt, pred) <= rmse(gt, pred) + 1e-15);
  }
}

TEST_CASE("an all-zero slice with sub-threshold predictions scores zero") {
  const std::vector<double> gt(50, 0.0);
  std::vector<double> preds(50);
  Rng rng(43);
  for (double& p : preds) p = rng.uniform(0.0, 0.049);
  const auto thresholded = threshold(preds);
  CHECK(mae(gt, thresholded) == 0.0);
  CHECK(rmse(gt, thresholded) == 0.0);
}

TEST_CASE("aggregate_runs reports mean and population std") {
  SUBCASE("single run has zero std") {
    const auto agg = aggregate_runs({MetricPair{0.2, 0.4}});
    CHECK(agg.mean.mae == 0.2);
    CHECK(agg.mean.rmse == 0.4);
    CHECK(agg.stddev.mae == 0.0);
    CHECK(agg.stddev.rmse == 0.0);
  }
  SUBCASE("identical runs have zero std") {
    const auto agg = aggregate_runs({{0.1, 0.3}, {0.1, 0.3}, {0.1, 0.3}});
    CHECK(agg.stddev.mae == 0.0);
    CHECK(agg.stddev.rmse == 0.0);
  }
  SUBCASE("mean matches an independent recomputation") {
    const std::vector<MetricPair> runs = {{0.1, 0.2}, {0.3, 0.5}, {0.2, 0.35}};
    const auto agg = aggregate_runs(runs);
    double mean_mae = 0.0, mean_rmse = 0.0;
    for (const auto& r : runs) {
      mean_mae += r.mae;
      mean_rmse += r.rmse;
    }
    mean_mae /= 3.0;
    mean_rmse /= 3.0;
    CHECK(std::abs(agg.mean.mae - mean_mae) < 1e-12);
    CHECK(std::abs(agg.mean.rmse - mean_rmse) < 1e-12);
    double var = 0.0;
    for (const auto& r : runs) var += (r.mae - mean_mae) * (r.mae - mean_mae) / 3.0;
    CHECK(std::abs(agg.stddev.mae - std::sqrt(var)) < 1e-12);
  }
}

TEST_CASE("evaluate scores the requested subset deterministically") {
  const World world = generate_world(testutil::small_world(3));
  testutil::TempDir dir("eval");
  write_world(world, dir.path);
  const RawWorld raw = load_raw(dir.path);
  const PreparedData data = prepare(raw);
  const SplitAssignment split = split_tracts(testutil::tract_ids(world), 8);

  RunConfig config;
  config.hidden = {16, 8};
  const ModelParams params = init_params(make_arch(config, data), 90);
  const EvalResult a = evaluate(params, data, split, Subset::test, config.mask);
  const EvalResult b = evaluate(params, data, split, Subset::test, config.mask);
  CHECK(a.metrics.mae == b.metrics.mae);
  CHECK(a.metrics.rmse == b.metrics.rmse);
  CHECK(a.rows.size() == split.test.size() * data.n_hours());
  CHECK(a.metrics.mae <= a.metrics.rmse);
  for (const auto& row : a.rows) {
    CHECK(row.thresholded == threshold_value(row.raw));
  }
}

TEST_CASE("the ablation ladder emits six nested rows under both losses") {
  WorldSpec spec = testutil::small_world(4);
  spec.n_tracts = 12;
  spec.n_hours = 150;
  const World world = generate_world(spec);
  testutil::TempDir dir("ablate");
  write_world(world, dir.path);
  const PreparedData data = prepare(load_raw(dir.path));

  RunConfig base;
  base.epochs = 1;
  base.n_runs = 1;
  base.hidden = {8, 4};
  base.batch_size = 256;
  base.seed = 5;

  const auto rows = ablate(base, data);
  REQUIRE(rows.size() == 6);
  const auto ladder = FeatureMask::ablation_ladder();
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(rows[i].mask == ladder[i]);
    CHECK(rows[i].exponential.per_run.size() == 1);
    CHECK(rows[i].cross_entropy.per_run.size() == 1);
  }

  std::ostringstream csv;
  write_report_csv(csv, rows);
  std::istringstream lines(csv.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 13);  // header + 6 masks x 2 losses
}
