#include "gridrisk/eval.hpp"

#include <cmath>
#include <ostream>

#include "gridrisk/csv.hpp"

namespace gridrisk {

double threshold_value(double pred) { return pred < kPredictionThreshold ? 0.0 : pred; }

std::vector<double> threshold(std::vector<double> preds) {
  for (double& p : preds) p = threshold_value(p);
  return preds;
}

double mae(std::span<const double> gt, std::span<const double> pred) {
  if (gt.size() != pred.size()) throw DataError("mae: length mismatch");
  if (gt.empty()) throw DataError("mae: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) sum += std::abs(gt[i] - pred[i]);
  return sum / static_cast<double>(gt.size());
}

double rmse(std::span<const double> gt, std::span<const double> pred) {
  if (gt.size() != pred.size()) throw DataError("rmse: length mismatch");
  if (gt.empty()) throw DataError("rmse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const double d = gt[i] - pred[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(gt.size()));
}

EvalResult evaluate(const ModelParams& params, const PreparedData& data,
                    const SplitAssignment& split, Subset subset, const FeatureMask& mask) {
  EvalResult result;
  std::vector<double> gts, preds;
  std::vector<double> base;
  ForwardCache scratch;

  for (std::size_t t = 0; t < data.tracts.size(); ++t) {
    const auto& tract = data.tracts[t];
    if (split.of(tract.tract_id) != subset) continue;
    const auto condition = data.condition_for(t, mask);
    for (std::int64_t h = data.hour_begin(); h < data.hour_end(); ++h) {
      data.base_vector(t, h, mask, base);
      std::vector<double> out;
      if (params.arch.kind == ArchKind::unconditional) {
        std::vector<double> x = base;
        x.insert(x.end(), condition.begin(), condition.end());
        out = forward_unconditional(params, x);
      } else {
        out = forward_conditional(params, base, condition);
      }
      const double raw = params.arch.d_out == 2 ? out[1] : out[0];
      const double thr = threshold_value(raw);
      const double gt = data.targets.at(t, h);
      gts.push_back(gt);
      preds.push_back(thr);
      result.rows.push_back(PredictionRow{tract.tract_id, h, gt, raw, thr});
    }
  }
  if (gts.empty()) throw DataError("evaluate: split subset contains no samples");
  result.metrics.mae = mae(gts, preds);
  result.metrics.rmse = rmse(gts, preds);
  return result;
}

void write_predictions_csv(std::ostream& out, const std::vector<PredictionRow>& rows) {
  out << "tract_id,hour,gt,pred_raw,pred_thresholded\n";
  for (const auto& r : rows) {
    out << r.tract_id << ',' << r.hour << ',' << format_double(r.gt) << ','
        << format_double(r.raw) << ',' << format_double(r.thresholded) << '\n';
  }
}

RepeatedMetrics aggregate_runs(const std::vector<MetricPair>& runs) {
  if (runs.empty()) throw DataError("aggregate_runs: no runs");
  RepeatedMetrics agg;
  agg.per_run = runs;
  const double n = static_cast<double>(runs.size());
  for (const auto& r : runs) {
    agg.mean.mae += r.mae / n;
    agg.mean.rmse += r.rmse / n;
  }
  for (const auto& r : runs) {
    agg.stddev.mae += (r.mae - agg.mean.mae) * (r.mae - agg.mean.mae) / n;
    agg.stddev.rmse += (r.rmse - agg.mean.rmse) * (r.rmse - agg.mean.rmse) / n;
  }
  agg.stddev.mae = std::sqrt(agg.stddev.mae);
  agg.stddev.rmse = std::sqrt(agg.stddev.rmse);
  return agg;
}

void write_report_csv(std::ostream& out, const std::string& mask_description,
                      const std::string& loss_name, const RepeatedMetrics& metrics) {
  out << mask_description << ',' << loss_name << ',' << format_double(metrics.mean.mae) << ','
      << format_double(metrics.stddev.mae) << ',' << format_double(metrics.mean.rmse) << ','
      << format_double(metrics.stddev.rmse) << '\n';
}

void write_report_csv(std::ostream& out, const std::vector<AblationRow>& rows) {
  out << "mask,loss,mae_mean,mae_std,rmse_mean,rmse_std\n";
  for (const auto& row : rows) {
    write_report_csv(out, row.mask.describe(), "exp", row.exponential);
    write_report_csv(out, row.mask.describe(), "xent", row.cross_entropy);
  }
}

}  // namespace gridrisk
