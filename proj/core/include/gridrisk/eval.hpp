#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gridrisk/features.hpp"
#include "gridrisk/nn.hpp"
#include "gridrisk/pipeline.hpp"

namespace gridrisk {

struct MetricPair {
  double mae = 0.0;
  double rmse = 0.0;
};

// Predictions under 0.05 are set to 0; values at or above the threshold pass
// through unchanged.
inline constexpr double kPredictionThreshold = 0.05;

double threshold_value(double pred);
std::vector<double> threshold(std::vector<double> preds);

double mae(std::span<const double> gt, std::span<const double> pred);
double rmse(std::span<const double> gt, std::span<const double> pred);

struct PredictionRow {
  std::string tract_id;
  std::int64_t hour = 0;
  double gt = 0.0;
  double raw = 0.0;
  double thresholded = 0.0;
};

struct EvalResult {
  MetricPair metrics;
  std::vector<PredictionRow> rows;
};

// Thresholded MAE/RMSE over every (tract, hour) sample of one split subset.
// Condition vectors use raw census estimates (no augmentation).
EvalResult evaluate(const ModelParams& params, const PreparedData& data,
                    const SplitAssignment& split, Subset subset, const FeatureMask& mask);

void write_predictions_csv(std::ostream& out, const std::vector<PredictionRow>& rows);

struct RepeatedMetrics {
  std::vector<MetricPair> per_run;
  MetricPair mean;
  MetricPair stddev;  // population standard deviation
};

RepeatedMetrics aggregate_runs(const std::vector<MetricPair>& runs);

struct AblationRow {
  FeatureMask mask;
  RepeatedMetrics exponential;
  RepeatedMetrics cross_entropy;
};

struct RunConfig;

// Trains the unconditional model over the six-mask nested ladder under both
// loss functions, n_runs seeded runs each; one row per mask.
std::vector<AblationRow> ablate(const RunConfig& base_config, const PreparedData& data);

// report.csv rows: mask description, loss, mae_mean, mae_std, rmse_mean, rmse_std.
void write_report_csv(std::ostream& out, const std::vector<AblationRow>& rows);
void write_report_csv(std::ostream& out, const std::string& mask_description,
                      const std::string& loss_name, const RepeatedMetrics& metrics);

}  // namespace gridrisk
