#include <benchmark/benchmark.h>

#include <sstream>
#include <vector>

#include "gridrisk/ingest.hpp"
#include "gridrisk/loss.hpp"
#include "gridrisk/nn.hpp"
#include "gridrisk/rng.hpp"
#include "gridrisk/synth.hpp"

using namespace gridrisk;

namespace {

ArchConfig bench_unconditional() {
  ArchConfig arch;
  arch.kind = ArchKind::unconditional;
  arch.d_base = 44;
  arch.d_cond = 34;
  arch.d_out = 1;
  arch.hidden = {64, 32};
  return arch;
}

ArchConfig bench_conditional() {
  ArchConfig arch;
  arch.kind = ArchKind::conditional;
  arch.d_base = 44;
  arch.d_cond = 34;
  arch.d_out = 1;
  arch.branch_base = {48, 24};
  arch.branch_cond = {24, 12};
  arch.output_head = {16};
  return arch;
}

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

}  // namespace

static void BM_ForwardUnconditional(benchmark::State& state) {
  const ModelParams params = init_params(bench_unconditional(), 1);
  Rng rng(2);
  const auto x = random_vector(78, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_unconditional(params, x));
  }
}
BENCHMARK(BM_ForwardUnconditional);

static void BM_ForwardConditional(benchmark::State& state) {
  const ModelParams params = init_params(bench_conditional(), 1);
  Rng rng(3);
  const auto base = random_vector(44, rng);
  const auto cond = random_vector(34, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_conditional(params, base, cond));
  }
}
BENCHMARK(BM_ForwardConditional);

static void BM_ForwardBackwardUnconditional(benchmark::State& state) {
  const ModelParams params = init_params(bench_unconditional(), 1);
  Rng rng(4);
  const auto x = random_vector(78, rng);
  Gradients grads = zeros_like(params);
  ForwardCache cache;
  const LossKind loss = LossKind::exponential();
  std::vector<double> d_logits(1);
  for (auto _ : state) {
    const auto out = forward_unconditional(params, x, &cache);
    loss_logits_gradient(loss, out, 0.3, d_logits);
    backward_from_logits(params, cache, d_logits, grads);
    benchmark::DoNotOptimize(grads);
  }
}
BENCHMARK(BM_ForwardBackwardUnconditional);

static void BM_ForwardBackwardConditional(benchmark::State& state) {
  const ModelParams params = init_params(bench_conditional(), 1);
  Rng rng(5);
  const auto base = random_vector(44, rng);
  const auto cond = random_vector(34, rng);
  Gradients grads = zeros_like(params);
  ForwardCache cache;
  const LossKind loss = LossKind::exponential();
  std::vector<double> d_logits(1);
  for (auto _ : state) {
    const auto out = forward_conditional(params, base, cond, &cache);
    loss_logits_gradient(loss, out, 0.3, d_logits);
    backward_from_logits(params, cache, d_logits, grads);
    benchmark::DoNotOptimize(grads);
  }
}
BENCHMARK(BM_ForwardBackwardConditional);

static void BM_WeightedCrossEntropy(benchmark::State& state) {
  Rng rng(6);
  double gt = rng.uniform01();
  double p1 = rng.uniform(0.01, 0.99);
  for (auto _ : state) {
    benchmark::DoNotOptimize(weighted_cross_entropy({1.0 - p1, p1}, gt, 500.0));
  }
}
BENCHMARK(BM_WeightedCrossEntropy);

static void BM_ExponentialLoss(benchmark::State& state) {
  Rng rng(7);
  double gt = rng.uniform01();
  double pred = rng.uniform01();
  for (auto _ : state) {
    benchmark::DoNotOptimize(exponential_loss(pred, gt, 20.0));
  }
}
BENCHMARK(BM_ExponentialLoss);

static void BM_Haversine(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(haversine_km(42.33, -83.05, 42.96, -83.74));
  }
}
BENCHMARK(BM_Haversine);

static void BM_ParseWeather(benchmark::State& state) {
  WorldSpec spec;
  spec.n_tracts = 10;
  spec.n_hours = static_cast<int>(state.range(0));
  const World world = generate_world(spec);
  std::ostringstream csv;
  write_weather_csv(csv, world.schema, world.weather);
  const std::string text = csv.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(parse_weather(in, world.schema));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseWeather)->Arg(256)->Arg(1024);

static void BM_FillMissing(benchmark::State& state) {
  WorldSpec spec;
  spec.n_tracts = 10;
  spec.n_hours = 1024;
  spec.missing_rate = 0.05;
  spec.absent_rate = 0.01;
  const World world = generate_world(spec);
  const WeatherGrid grid = build_grid(world.weather, world.stations);
  const WeatherSchema schema = WeatherSchema::standard();
  for (auto _ : state) {
    WeatherGrid copy = grid;
    fill_missing(copy, schema);
    benchmark::DoNotOptimize(copy);
  }
}
BENCHMARK(BM_FillMissing);

static void BM_GenerateWorld(benchmark::State& state) {
  WorldSpec spec;
  spec.n_tracts = 30;
  spec.n_hours = 500;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_world(spec));
  }
}
BENCHMARK(BM_GenerateWorld);

BENCHMARK_MAIN();
