#include "gridrisk/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridrisk/checkpoint.hpp"
#include "gridrisk/csv.hpp"
#include "gridrisk/eval.hpp"
#include "gridrisk/pipeline.hpp"
#include "gridrisk/synth.hpp"
#include "gridrisk/train.hpp"

namespace gridrisk {

namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

void print_warnings(const WarningSink& warnings) {
  for (const auto& message : warnings.messages()) {
    std::cerr << "warning: " << message << '\n';
  }
}

struct ConfigOverrides {
  std::string seed, epochs, loss, arch, mask;

  void apply(RunConfig& config) const {
    if (!seed.empty()) config.set("seed", seed);
    if (!epochs.empty()) config.set("epochs", epochs);
    if (!loss.empty()) config.set("loss", loss);
    if (!arch.empty()) config.set("arch", arch);
    if (!mask.empty()) config.set("mask", mask);
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Override the configured seed");
    cmd->add_option("--epochs", epochs, "Override the configured epoch count");
    cmd->add_option("--loss", loss, "Override the loss function (exp or xent)");
    cmd->add_option("--arch", arch, "Override the architecture (uncond or cond)");
    cmd->add_option("--mask", mask, "Override the feature mask (comma list of groups)");
  }
};

void echo_config(const RunConfig& config) {
  std::cout << "resolved configuration:\n";
  config.print(std::cout);
  std::cout.flush();
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir,
              const std::string& seed) {
  WorldSpec spec = WorldSpec::from_file(spec_path);
  if (!seed.empty()) spec.set("seed", seed);
  spec.validate();
  std::cout << "resolved world spec:\n";
  spec.print(std::cout);
  const World world = generate_world(spec);
  write_world(world, out_dir);
  std::cout << "wrote " << world.tracts.size() << " tracts, " << world.stations.size()
            << " stations, " << world.weather.size() << " weather rows, "
            << world.snapshots.size() << " outage snapshots to " << out_dir << '\n';
  return 0;
}

int cmd_ingest(const std::string& data_dir, const std::string& out_dir) {
  WarningSink warnings;
  const RawWorld raw = load_raw(data_dir);
  const PreparedData data = prepare(raw, nullptr, &warnings);
  print_warnings(warnings);

  const FeatureMask mask = FeatureMask::full();
  {
    auto out = open_output(fs::path(out_dir) / "samples.csv");
    write_samples_csv(out, data, mask);
  }
  {
    auto out = open_output(fs::path(out_dir) / "schema.txt");
    write_samples_schema(out, data, mask);
  }
  std::cout << "ingested " << data.tracts.size() << " tracts, " << data.stations.size()
            << " stations, " << data.n_hours() << " hours ("
            << data.tracts.size() * data.n_hours() << " samples, " << warnings.size()
            << " warnings)\n";
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& data_dir,
              const std::string& out_path, const ConfigOverrides& overrides) {
  RunConfig config = RunConfig::from_file(config_path);
  overrides.apply(config);
  config.validate();
  echo_config(config);

  WarningSink warnings;
  const RawWorld raw = load_raw(data_dir);
  const PreparedData data = prepare(raw, nullptr, &warnings);
  print_warnings(warnings);

  std::vector<std::string> tract_ids;
  for (const auto& t : data.tracts) tract_ids.push_back(t.tract_id);
  const SplitAssignment split = split_tracts(tract_ids, config.seed);
  std::cout << "split: " << split.train.size() << " train / " << split.val.size() << " val / "
            << split.test.size() << " test tracts\n";

  auto [params, report] = train_one(config, data, split);
  save_params(out_path, params);
  save_meta(meta_path_for(out_path),
            ModelMeta{config, data.schema, data.stations, data.stats, data.k_income, data.k_year});

  std::cout << "selected epoch: " << report.selected_epoch << '\n';
  if (!report.train_loss.empty()) {
    std::cout << "final train loss: " << format_double(report.train_loss.back()) << '\n';
  }
  std::cout << "test mae: " << format_double(report.test.mae)
            << "  test rmse: " << format_double(report.test.rmse) << '\n'
            << "wall seconds: " << report.wall_seconds << '\n'
            << "checkpoint: " << out_path << '\n';
  return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& data_dir,
             const std::string& report_path, std::string predictions_path) {
  const ModelParams params = load_params(checkpoint_path);
  const ModelMeta meta = load_meta(meta_path_for(checkpoint_path));
  echo_config(meta.config);

  WarningSink warnings;
  const RawWorld raw = load_raw(data_dir);
  const PreparedData data = prepare(raw, &meta.stats, &warnings);
  print_warnings(warnings);

  if (data.stations.size() != meta.stations.size()) {
    throw DataError("station set does not match the checkpoint metadata");
  }
  for (std::size_t s = 0; s < data.stations.size(); ++s) {
    if (data.stations[s].station_id != meta.stations[s].station_id) {
      throw DataError("station order does not match the checkpoint metadata");
    }
  }

  std::vector<std::string> tract_ids;
  for (const auto& t : data.tracts) tract_ids.push_back(t.tract_id);
  const SplitAssignment split = split_tracts(tract_ids, meta.config.seed);

  const EvalResult result = evaluate(params, data, split, Subset::test, meta.config.mask);
  {
    auto out = open_output(report_path);
    out << "mask,loss,mae_mean,mae_std,rmse_mean,rmse_std\n";
    write_report_csv(out, meta.config.mask.describe(), meta.config.loss.name(),
                     aggregate_runs({result.metrics}));
  }
  if (predictions_path.empty()) {
    predictions_path = (fs::path(report_path).parent_path() / "predictions.csv").string();
  }
  {
    auto out = open_output(predictions_path);
    write_predictions_csv(out, result.rows);
  }
  std::cout << "test mae: " << format_double(result.metrics.mae)
            << "  test rmse: " << format_double(result.metrics.rmse) << '\n'
            << "report: " << report_path << '\n'
            << "predictions: " << predictions_path << '\n';
  return 0;
}

int cmd_ablate(const std::string& config_path, const std::string& data_dir,
               const std::string& report_path, const ConfigOverrides& overrides) {
  RunConfig config = RunConfig::from_file(config_path);
  overrides.apply(config);
  config.validate();
  echo_config(config);

  WarningSink warnings;
  const RawWorld raw = load_raw(data_dir);
  const PreparedData data = prepare(raw, nullptr, &warnings);
  print_warnings(warnings);

  const std::vector<AblationRow> rows = ablate(config, data);
  {
    auto out = open_output(report_path);
    write_report_csv(out, rows);
  }
  for (const auto& row : rows) {
    std::cout << row.mask.describe() << ": exp rmse " << format_double(row.exponential.mean.rmse)
              << " (" << format_double(row.exponential.stddev.rmse) << "), xent rmse "
              << format_double(row.cross_entropy.mean.rmse) << " ("
              << format_double(row.cross_entropy.stddev.rmse) << ")\n";
  }
  std::cout << "report: " << report_path << '\n';
  return 0;
}

int cmd_predict(const std::string& checkpoint_path, const std::string& weather_path,
                const std::string& tracts_path, const std::string& out_path) {
  const ModelParams params = load_params(checkpoint_path);
  const ModelMeta meta = load_meta(meta_path_for(checkpoint_path));
  echo_config(meta.config);

  std::ifstream weather_in(weather_path);
  if (!weather_in) throw DataError("cannot open '" + weather_path + "'");
  const auto forecast = parse_weather(weather_in, meta.schema, weather_path);

  std::ifstream tracts_in(tracts_path);
  if (!tracts_in) throw DataError("cannot open '" + tracts_path + "'");
  const auto tracts = parse_tracts(tracts_in, tracts_path);
  if (tracts.empty()) throw DataError("no tracts to predict for");
  for (const auto& t : tracts) {
    if (t.income_bins.size() != meta.k_income || t.year_built_bins.size() != meta.k_year) {
      throw DataError("tract '" + t.tract_id + "' census bins do not match the checkpoint");
    }
  }

  WeatherGrid grid = build_grid(forecast, meta.stations);
  fill_missing(grid, meta.schema);
  normalize(grid, meta.stats);  // training-time statistics, not recomputed

  const FeatureMask& mask = meta.config.mask;
  const std::size_t n_stations = meta.stations.size();

  auto out = open_output(out_path);
  out << "tract_id,hour,probability\n";
  std::vector<double> base, x_scratch;
  for (const auto& tract : tracts) {
    const auto distances = station_distances(tract.lat, tract.lon, meta.stations);
    const auto condition = condition_vector(tract, mask);  // raw estimates at inference
    for (std::int64_t h = grid.hour_begin; h < grid.hour_end; ++h) {
      base.clear();
      for (std::size_t s = 0; s < n_stations; ++s) {
        const auto slice = grid.slice(s, h);
        base.insert(base.end(), slice.begin(), slice.end());
      }
      if (mask.distance) base.insert(base.end(), distances.begin(), distances.end());

      std::vector<double> model_out;
      if (params.arch.kind == ArchKind::unconditional) {
        x_scratch.assign(base.begin(), base.end());
        x_scratch.insert(x_scratch.end(), condition.begin(), condition.end());
        model_out = forward_unconditional(params, x_scratch);
      } else {
        model_out = forward_conditional(params, base, condition);
      }
      const double raw = params.arch.d_out == 2 ? model_out[1] : model_out[0];
      out << tract.tract_id << ',' << h << ',' << format_double(threshold_value(raw)) << '\n';
    }
  }
  std::cout << "wrote " << tracts.size() * static_cast<std::size_t>(grid.n_hours())
            << " predictions to " << out_path << '\n';
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"gridrisk: hourly census-tract power outage probability forecasting"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic world from a spec file");
  std::string synth_spec, synth_out, synth_seed;
  synth->add_option("--spec", synth_spec, "World spec file (key = value)")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Override the spec seed");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate raw CSVs and emit samples.csv");
  std::string ingest_data, ingest_out;
  ingest->add_option("--data", ingest_data, "Directory with the five input CSVs")->required();
  ingest->add_option("--out", ingest_out, "Output directory")->required();

  // train
  auto* train = app.add_subcommand("train", "Train a model and write a checkpoint");
  std::string train_config, train_data, train_out;
  ConfigOverrides train_overrides;
  train->add_option("--config", train_config, "Run configuration file")->required();
  train->add_option("--data", train_data, "Directory with the five input CSVs")->required();
  train->add_option("--out", train_out, "Checkpoint output path")->required();
  train_overrides.attach(train);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the test split");
  std::string eval_checkpoint, eval_data, eval_report, eval_predictions;
  eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint path")->required();
  eval->add_option("--data", eval_data, "Directory with the five input CSVs")->required();
  eval->add_option("--report", eval_report, "Metrics report output path")->required();
  eval->add_option("--predictions", eval_predictions,
                   "Predictions output path (default: predictions.csv beside the report)");

  // ablate
  auto* ablate_cmd = app.add_subcommand("ablate", "Run the feature-group ablation ladder");
  std::string ablate_config, ablate_data, ablate_report;
  ConfigOverrides ablate_overrides;
  ablate_cmd->add_option("--config", ablate_config, "Run configuration file")->required();
  ablate_cmd->add_option("--data", ablate_data, "Directory with the five input CSVs")->required();
  ablate_cmd->add_option("--report", ablate_report, "Report CSV output path")->required();
  ablate_overrides.attach(ablate_cmd);

  // predict
  auto* predict = app.add_subcommand("predict", "Predict outage probabilities from a forecast");
  std::string predict_checkpoint, predict_weather, predict_tracts, predict_out;
  predict->add_option("--checkpoint", predict_checkpoint, "Checkpoint path")->required();
  predict->add_option("--weather", predict_weather, "Forecast weather CSV")->required();
  predict->add_option("--tracts", predict_tracts, "Tract profile CSV")->required();
  predict->add_option("--out", predict_out, "Prediction CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_spec, synth_out, synth_seed);
    if (ingest->parsed()) return cmd_ingest(ingest_data, ingest_out);
    if (train->parsed()) return cmd_train(train_config, train_data, train_out, train_overrides);
    if (eval->parsed()) return cmd_eval(eval_checkpoint, eval_data, eval_report, eval_predictions);
    if (ablate_cmd->parsed()) {
      return cmd_ablate(ablate_config, ablate_data, ablate_report, ablate_overrides);
    }
    if (predict->parsed()) {
      return cmd_predict(predict_checkpoint, predict_weather, predict_tracts, predict_out);
    }
    std::cerr << "error: no subcommand selected\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace gridrisk
