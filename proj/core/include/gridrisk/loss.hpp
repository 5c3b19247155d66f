#pragma once

#include <array>
#include <string>
#include <utility>

namespace gridrisk {

// The two training objectives. d_out is implied: 1 for the exponential loss
// (sigmoid head), 2 for weighted cross entropy (softmax head).
struct LossKind {
  enum class Type { weighted_cross_entropy, exponential };

  Type type = Type::exponential;
  double w = 500.0;
  double beta = 20.0;

  static LossKind cross_entropy(double w = 500.0) {
    return LossKind{Type::weighted_cross_entropy, w, 20.0};
  }
  static LossKind exponential(double beta = 20.0) {
    return LossKind{Type::exponential, 500.0, beta};
  }

  int d_out() const { return type == Type::exponential ? 1 : 2; }
  std::string name() const { return type == Type::exponential ? "exp" : "xent"; }
  bool operator==(const LossKind&) const = default;
};

// value = -[(1-gt) log pred_0 + w gt log pred_1], logs clamped at 1e-12.
// Returns the value and d(value)/d(pred). pred must be a probability vector
// within 1e-6 (fatal otherwise). Soft labels: P_gt,1 = gt, P_gt,0 = 1 - gt.
std::pair<double, std::array<double, 2>> weighted_cross_entropy(
    const std::array<double, 2>& pred, double gt, double w);

// value = exp(|gt - pred| * beta); gradient = beta * sign(pred - gt) * value,
// with sign(0) = 0.
std::pair<double, double> exponential_loss(double pred, double gt, double beta);

// Gradient of the weighted cross entropy with respect to pre-softmax logits:
// d/dz_j = pred_j * (c_0 + c_1) - c_j with c = (1 - gt, w * gt). This is the
// stable composition used during training.
std::array<double, 2> wce_logits_gradient(const std::array<double, 2>& pred, double gt,
                                          double w);

}  // namespace gridrisk
