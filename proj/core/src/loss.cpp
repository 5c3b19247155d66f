#include "gridrisk/loss.hpp"

#include <cmath>

#include "gridrisk/error.hpp"

namespace gridrisk {

namespace {
constexpr double kLogClamp = 1e-12;
}

std::pair<double, std::array<double, 2>> weighted_cross_entropy(
    const std::array<double, 2>& pred, double gt, double w) {
  if (!(pred[0] > 0.0) || !(pred[1] > 0.0) || std::abs(pred[0] + pred[1] - 1.0) > 1e-6) {
    throw NumericError("weighted_cross_entropy: prediction is not a probability vector");
  }
  const double c0 = 1.0 - gt;
  const double c1 = w * gt;
  const double value = -(c0 * std::log(std::max(pred[0], kLogClamp)) +
                         c1 * std::log(std::max(pred[1], kLogClamp)));
  std::array<double, 2> grad{0.0, 0.0};
  if (pred[0] > kLogClamp) grad[0] = -c0 / pred[0];
  if (pred[1] > kLogClamp) grad[1] = -c1 / pred[1];
  return {value, grad};
}

std::pair<double, double> exponential_loss(double pred, double gt, double beta) {
  const double diff = gt - pred;
  const double value = std::exp(std::abs(diff) * beta);
  double sign = 0.0;
  if (pred > gt) sign = 1.0;
  if (pred < gt) sign = -1.0;
  return {value, beta * sign * value};
}

std::array<double, 2> wce_logits_gradient(const std::array<double, 2>& pred, double gt,
                                          double w) {
  const double c0 = 1.0 - gt;
  const double c1 = w * gt;
  const double total = c0 + c1;
  return {pred[0] * total - c0, pred[1] * total - c1};
}

}  // namespace gridrisk
