#include "gridrisk/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "gridrisk/config.hpp"

namespace gridrisk {

std::string to_string(OptimizerKind kind) {
  return kind == OptimizerKind::adam ? "adam" : "sgd";
}

OptimizerKind optimizer_from_string(const std::string& text) {
  if (text == "adam") return OptimizerKind::adam;
  if (text == "sgd") return OptimizerKind::sgd;
  throw UsageError("unknown optimizer '" + text + "'");
}

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i != text.size() && text[i] != ',') continue;
    if (i > start) out.push_back(std::stoi(text.substr(start, i - start)));
    start = i + 1;
  }
  return out;
}

std::string join_int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw UsageError("expected a boolean, got '" + text + "'");
}

}  // namespace

void RunConfig::validate() const {
  if (epochs < 0) throw UsageError("epochs must be nonnegative");
  if (batch_size < 1) throw UsageError("batch_size must be positive");
  if (!(learning_rate > 0.0)) throw UsageError("learning_rate must be positive");
  if (n_runs < 1) throw UsageError("n_runs must be at least 1");
  if (!(loss.w > 0.0) || !(loss.beta > 0.0)) {
    throw UsageError("loss parameters w and beta must be positive");
  }
  if (!mask.weather) throw UsageError("feature mask must include the weather group");
  if (!(grad_clip_norm > 0.0)) throw UsageError("grad_clip_norm must be positive");
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  RunConfig config;
  for (const auto& [key, value] : parse_key_value_file(path)) {
    config.set(key, value);
  }
  config.validate();
  return config;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  try {
    if (key == "arch") {
      arch = arch_kind_from_string(value);
    } else if (key == "loss") {
      if (value == "exp" || value == "exponential") {
        loss.type = LossKind::Type::exponential;
      } else if (value == "xent" || value == "cross_entropy") {
        loss.type = LossKind::Type::weighted_cross_entropy;
      } else {
        throw UsageError("unknown loss '" + value + "' (expected exp or xent)");
      }
    } else if (key == "w") {
      loss.w = std::stod(value);
    } else if (key == "beta") {
      loss.beta = std::stod(value);
    } else if (key == "mask") {
      mask = FeatureMask::parse(value);
    } else if (key == "seed") {
      seed = std::stoull(value);
    } else if (key == "epochs") {
      epochs = std::stoi(value);
    } else if (key == "batch_size") {
      batch_size = std::stoi(value);
    } else if (key == "learning_rate") {
      learning_rate = std::stod(value);
    } else if (key == "optimizer") {
      optimizer = optimizer_from_string(value);
    } else if (key == "adam_beta1") {
      adam_beta1 = std::stod(value);
    } else if (key == "adam_beta2") {
      adam_beta2 = std::stod(value);
    } else if (key == "adam_eps") {
      adam_eps = std::stod(value);
    } else if (key == "sgd_momentum") {
      sgd_momentum = std::stod(value);
    } else if (key == "n_runs") {
      n_runs = std::stoi(value);
    } else if (key == "hidden") {
      hidden = parse_int_list(value);
    } else if (key == "branch_base") {
      branch_base = parse_int_list(value);
    } else if (key == "branch_cond") {
      branch_cond = parse_int_list(value);
    } else if (key == "output_head") {
      output_head = parse_int_list(value);
    } else if (key == "grad_clip_norm") {
      grad_clip_norm = std::stod(value);
    } else if (key == "augment") {
      augment = parse_bool(value);
    } else {
      throw UsageError("unknown configuration key '" + key + "'");
    }
  } catch (const std::invalid_argument&) {
    throw UsageError("malformed value '" + value + "' for configuration key '" + key + "'");
  } catch (const std::out_of_range&) {
    throw UsageError("out-of-range value '" + value + "' for configuration key '" + key + "'");
  }
}

void RunConfig::print(std::ostream& out) const {
  out << "arch = " << to_string(arch) << '\n'
      << "loss = " << loss.name() << '\n'
      << "w = " << loss.w << '\n'
      << "beta = " << loss.beta << '\n'
      << "mask = " << mask.describe() << '\n'
      << "seed = " << seed << '\n'
      << "epochs = " << epochs << '\n'
      << "batch_size = " << batch_size << '\n'
      << "learning_rate = " << learning_rate << '\n'
      << "optimizer = " << to_string(optimizer) << '\n'
      << "n_runs = " << n_runs << '\n'
      << "hidden = " << join_int_list(hidden) << '\n'
      << "branch_base = " << join_int_list(branch_base) << '\n'
      << "branch_cond = " << join_int_list(branch_cond) << '\n'
      << "output_head = " << join_int_list(output_head) << '\n'
      << "grad_clip_norm = " << grad_clip_norm << '\n'
      << "augment = " << (augment ? "true" : "false") << '\n';
}

ArchConfig make_arch(const RunConfig& config, const PreparedData& data) {
  ArchConfig arch;
  arch.kind = config.arch;
  arch.d_out = config.loss.d_out();
  arch.hidden = config.hidden;
  arch.branch_base = config.branch_base;
  arch.branch_cond = config.branch_cond;
  arch.output_head = config.output_head;
  arch.d_base = static_cast<int>(data.base_width(config.mask));
  arch.d_cond = static_cast<int>(data.condition_width(config.mask));
  arch.validate();
  return arch;
}

namespace {

constexpr std::uint64_t kInitSalt = 0x111Full;
constexpr std::uint64_t kShuffleSalt = 0x54AFull;
constexpr std::uint64_t kAugmentSalt = 0xA106ull;

struct SubsetEval {
  double loss_mean = 0.0;
  double mae = 0.0;
};

double predict_one(const ModelParams& params, const std::vector<double>& base,
                   const std::vector<double>& condition, std::vector<double>& x_scratch,
                   std::vector<double>& out_scratch) {
  if (params.arch.kind == ArchKind::unconditional) {
    x_scratch.assign(base.begin(), base.end());
    x_scratch.insert(x_scratch.end(), condition.begin(), condition.end());
    out_scratch = forward_unconditional(params, x_scratch);
  } else {
    out_scratch = forward_conditional(params, base, condition);
  }
  return params.arch.d_out == 2 ? out_scratch[1] : out_scratch[0];
}

SubsetEval eval_subset(const ModelParams& params, const RunConfig& config,
                       const PreparedData& data, const std::vector<std::size_t>& tract_indices) {
  SubsetEval result;
  std::size_t n = 0;
  double abs_err = 0.0;
  double loss_sum = 0.0;
  std::vector<double> base, x_scratch, out;
  for (const std::size_t t : tract_indices) {
    const auto condition = data.condition_for(t, config.mask);
    for (std::int64_t h = data.hour_begin(); h < data.hour_end(); ++h) {
      data.base_vector(t, h, config.mask, base);
      const double raw = predict_one(params, base, condition, x_scratch, out);
      const double gt = data.targets.at(t, h);
      loss_sum += loss_value(config.loss, out, gt);
      abs_err += std::abs(gt - threshold_value(raw));
      ++n;
    }
  }
  if (n == 0) throw DataError("evaluation subset contains no samples");
  result.loss_mean = loss_sum / static_cast<double>(n);
  result.mae = abs_err / static_cast<double>(n);
  return result;
}

}  // namespace

std::pair<ModelParams, TrainReport> train_one(const RunConfig& config, const PreparedData& data,
                                              const SplitAssignment& split) {
  config.validate();
  const auto start_time = std::chrono::steady_clock::now();

  const ArchConfig arch = make_arch(config, data);
  ModelParams params = init_params(arch, mix_seed({config.seed, kInitSalt}));

  std::vector<std::size_t> train_tracts, val_tracts, test_tracts;
  for (std::size_t t = 0; t < data.tracts.size(); ++t) {
    switch (split.of(data.tracts[t].tract_id)) {
      case Subset::train:
        train_tracts.push_back(t);
        break;
      case Subset::val:
        val_tracts.push_back(t);
        break;
      case Subset::test:
        test_tracts.push_back(t);
        break;
    }
  }
  if (train_tracts.empty()) throw DataError("training split contains no tracts");

  const std::size_t n_hours = data.n_hours();
  const std::size_t n_samples = train_tracts.size() * n_hours;

  std::vector<std::size_t> order(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) order[i] = i;

  Gradients grads = zeros_like(params);
  std::vector<double*> theta = scalar_pointers(params.p);
  std::vector<double*> grad_ptrs = scalar_pointers(grads);
  const std::size_t n_params = theta.size();
  std::vector<double> opt_m(n_params, 0.0);
  std::vector<double> opt_v(n_params, 0.0);
  std::int64_t step_count = 0;

  auto clip_and_step = [&]() {
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < n_params; ++i) norm_sq += *grad_ptrs[i] * *grad_ptrs[i];
    const double norm = std::sqrt(norm_sq);
    if (norm > config.grad_clip_norm) {
      const double scale = config.grad_clip_norm / norm;
      for (std::size_t i = 0; i < n_params; ++i) *grad_ptrs[i] *= scale;
    }
    ++step_count;
    if (config.optimizer == OptimizerKind::adam) {
      const double bc1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(step_count));
      const double bc2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(step_count));
      for (std::size_t i = 0; i < n_params; ++i) {
        const double g = *grad_ptrs[i];
        opt_m[i] = config.adam_beta1 * opt_m[i] + (1.0 - config.adam_beta1) * g;
        opt_v[i] = config.adam_beta2 * opt_v[i] + (1.0 - config.adam_beta2) * g * g;
        *theta[i] -=
            config.learning_rate * (opt_m[i] / bc1) / (std::sqrt(opt_v[i] / bc2) + config.adam_eps);
      }
    } else {
      for (std::size_t i = 0; i < n_params; ++i) {
        opt_m[i] = config.sgd_momentum * opt_m[i] + *grad_ptrs[i];
        *theta[i] -= config.learning_rate * opt_m[i];
      }
    }
  };

  // raw conditions, reused whenever augmentation is off
  std::vector<std::vector<double>> raw_conditions(train_tracts.size());
  for (std::size_t k = 0; k < train_tracts.size(); ++k) {
    raw_conditions[k] = data.condition_for(train_tracts[k], config.mask);
  }

  TrainReport report;
  ModelParams best_params = params;
  double best_val_mae = std::numeric_limits<double>::infinity();
  int selected = -1;

  std::vector<std::vector<double>> conditions(train_tracts.size());
  std::vector<double> base, x_scratch, d_logits(static_cast<std::size_t>(arch.d_out));
  ForwardCache cache;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.augment) {
      for (std::size_t k = 0; k < train_tracts.size(); ++k) {
        Rng aug(mix_seed({config.seed, kAugmentSalt, static_cast<std::uint64_t>(epoch),
                          static_cast<std::uint64_t>(train_tracts[k])}));
        conditions[k] = data.condition_for(train_tracts[k], config.mask, &aug);
      }
    } else {
      conditions = raw_conditions;
    }

    Rng shuffler(mix_seed({config.seed, kShuffleSalt, static_cast<std::uint64_t>(epoch)}));
    shuffler.shuffle(order);

    double epoch_loss_sum = 0.0;
    for (std::size_t batch_start = 0; batch_start < n_samples;
         batch_start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t batch_end =
          std::min(batch_start + static_cast<std::size_t>(config.batch_size), n_samples);
      const double batch_n = static_cast<double>(batch_end - batch_start);
      grads.fill(0.0);
      double batch_loss_sum = 0.0;

      for (std::size_t pos = batch_start; pos < batch_end; ++pos) {
        const std::size_t idx = order[pos];
        const std::size_t k = idx / n_hours;
        const std::int64_t hour = data.hour_begin() + static_cast<std::int64_t>(idx % n_hours);
        const std::size_t tract = train_tracts[k];
        data.base_vector(tract, hour, config.mask, base);
        const double gt = data.targets.at(tract, hour);

        std::vector<double> out;
        if (arch.kind == ArchKind::unconditional) {
          x_scratch.assign(base.begin(), base.end());
          x_scratch.insert(x_scratch.end(), conditions[k].begin(), conditions[k].end());
          out = forward_unconditional(params, x_scratch, &cache);
        } else {
          out = forward_conditional(params, base, conditions[k], &cache);
        }
        batch_loss_sum += loss_value(config.loss, out, gt);
        loss_logits_gradient(config.loss, out, gt, d_logits);
        for (double& g : d_logits) g /= batch_n;
        backward_from_logits(params, cache, d_logits, grads);
      }

      if (!std::isfinite(batch_loss_sum)) {
        throw NumericError("training loss diverged at epoch " + std::to_string(epoch) +
                           ", batch " +
                           std::to_string(batch_start / static_cast<std::size_t>(config.batch_size)));
      }
      epoch_loss_sum += batch_loss_sum;
      clip_and_step();
    }
    report.train_loss.push_back(epoch_loss_sum / static_cast<double>(n_samples));

    const SubsetEval val = eval_subset(params, config, data, val_tracts);
    report.val_loss.push_back(val.loss_mean);
    report.val_mae.push_back(val.mae);
    if (val.mae < best_val_mae) {
      best_val_mae = val.mae;
      best_params = params;
      selected = epoch;
    }
  }

  if (selected >= 0) params = best_params;
  report.selected_epoch = selected;

  const EvalResult test_eval = evaluate(params, data, split, Subset::test, config.mask);
  report.test = test_eval.metrics;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return {std::move(params), std::move(report)};
}

RepeatedMetrics run_repeated(const RunConfig& config, const PreparedData& data) {
  config.validate();
  std::vector<std::string> tract_ids;
  tract_ids.reserve(data.tracts.size());
  for (const auto& t : data.tracts) tract_ids.push_back(t.tract_id);

  std::vector<MetricPair> runs;
  runs.reserve(static_cast<std::size_t>(config.n_runs));
  for (int r = 0; r < config.n_runs; ++r) {
    RunConfig run_config = config;
    run_config.seed = config.seed + static_cast<std::uint64_t>(r);
    const SplitAssignment split = split_tracts(tract_ids, run_config.seed);
    auto [params, report] = train_one(run_config, data, split);
    runs.push_back(report.test);
  }
  return aggregate_runs(runs);
}

std::vector<AblationRow> ablate(const RunConfig& base_config, const PreparedData& data) {
  std::vector<AblationRow> rows;
  for (const FeatureMask& mask : FeatureMask::ablation_ladder()) {
    AblationRow row;
    row.mask = mask;
    RunConfig config = base_config;
    config.arch = ArchKind::unconditional;
    config.mask = mask;
    config.loss = LossKind::exponential(base_config.loss.beta);
    row.exponential = run_repeated(config, data);
    config.loss = LossKind::cross_entropy(base_config.loss.w);
    row.cross_entropy = run_repeated(config, data);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gridrisk
