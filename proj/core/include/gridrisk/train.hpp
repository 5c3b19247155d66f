#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gridrisk/eval.hpp"
#include "gridrisk/features.hpp"
#include "gridrisk/loss.hpp"
#include "gridrisk/nn.hpp"
#include "gridrisk/pipeline.hpp"

namespace gridrisk {

enum class OptimizerKind { adam, sgd };

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& text);

struct RunConfig {
  ArchKind arch = ArchKind::unconditional;
  LossKind loss = LossKind::exponential();
  FeatureMask mask = FeatureMask::full();
  std::uint64_t seed = 1;
  int epochs = 50;
  int batch_size = 512;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double sgd_momentum = 0.9;
  int n_runs = 3;
  std::vector<int> hidden = {256, 128, 64, 32};
  std::vector<int> branch_base = {128, 64};
  std::vector<int> branch_cond = {64, 32};
  std::vector<int> output_head = {32};
  double grad_clip_norm = 10.0;
  bool augment = true;

  void validate() const;
  // Flat "key = value" file; '#' starts a comment.
  static RunConfig from_file(const std::filesystem::path& path);
  void set(const std::string& key, const std::string& value);
  void print(std::ostream& out) const;
};

ArchConfig make_arch(const RunConfig& config, const PreparedData& data);

struct TrainReport {
  std::vector<double> train_loss;  // per epoch
  std::vector<double> val_loss;
  std::vector<double> val_mae;  // thresholded, drives model selection
  int selected_epoch = -1;
  MetricPair test;
  double wall_seconds = 0.0;
};

// One deterministic training run: seeded initialization, shuffling and
// per-epoch census augmentation; returns the best-validation-MAE checkpoint.
std::pair<ModelParams, TrainReport> train_one(const RunConfig& config, const PreparedData& data,
                                              const SplitAssignment& split);

// n_runs runs with seeds base+0..base+n-1; mean and population std of the
// thresholded test metrics.
RepeatedMetrics run_repeated(const RunConfig& config, const PreparedData& data);

}  // namespace gridrisk
