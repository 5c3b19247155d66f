#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gridrisk/error.hpp"
#include "gridrisk/loss.hpp"

namespace gridrisk {

enum class ArchKind { unconditional, conditional };

std::string to_string(ArchKind kind);
ArchKind arch_kind_from_string(const std::string& text);

// Network shape. The unconditional model consumes the concatenation of base
// and condition features through `hidden`; the conditional model routes the
// base vector through `branch_base` (its last width is the modulated feature
// width H), the condition vector through `branch_cond`, and maps the
// condition embedding to per-feature scale and bias vectors applied to the
// base features before `output_head`.
struct ArchConfig {
  ArchKind kind = ArchKind::unconditional;
  int d_base = 0;
  int d_cond = 0;
  int d_out = 1;
  std::vector<int> hidden = {256, 128, 64, 32};
  std::vector<int> branch_base = {128, 64};
  std::vector<int> branch_cond = {64, 32};
  std::vector<int> output_head = {32};

  int film_width() const { return branch_base.empty() ? 0 : branch_base.back(); }
  void validate() const;
  std::string descriptor() const;
  static ArchConfig from_descriptor(const std::string& text);
  bool operator==(const ArchConfig&) const = default;
};

struct LinearLayer {
  int in = 0;
  int out = 0;
  std::vector<double> w;  // row-major, out x in
  std::vector<double> b;  // out
};

// One shape tree shared by parameters and gradients.
struct ParamSet {
  std::vector<LinearLayer> layers;       // unconditional stack
  std::vector<LinearLayer> base_branch;  // conditional
  std::vector<LinearLayer> cond_branch;
  LinearLayer scale_head;
  LinearLayer bias_head;
  std::vector<LinearLayer> head;

  template <class F>
  void for_each_layer(F&& f) {
    for (auto& l : layers) f(l);
    for (auto& l : base_branch) f(l);
    for (auto& l : cond_branch) f(l);
    if (scale_head.out > 0) f(scale_head);
    if (bias_head.out > 0) f(bias_head);
    for (auto& l : head) f(l);
  }
  template <class F>
  void for_each_layer(F&& f) const {
    for (const auto& l : layers) f(l);
    for (const auto& l : base_branch) f(l);
    for (const auto& l : cond_branch) f(l);
    if (scale_head.out > 0) f(scale_head);
    if (bias_head.out > 0) f(bias_head);
    for (const auto& l : head) f(l);
  }

  std::size_t scalar_count() const;
  void fill(double value);
};

struct ModelParams {
  ArchConfig arch;
  ParamSet p;
};

using Gradients = ParamSet;

Gradients zeros_like(const ModelParams& params);

// Pointers to every parameter scalar in declaration order (weights row-major,
// then biases, per layer). Stable while the ParamSet is not resized.
std::vector<double*> scalar_pointers(ParamSet& set);

struct LayerCache {
  std::vector<double> input;
  std::vector<double> pre;  // pre-activation
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  std::vector<LayerCache> base_branch;
  std::vector<LayerCache> cond_branch;
  LayerCache scale_cache;
  LayerCache bias_cache;
  std::vector<LayerCache> head;
  std::vector<double> f_in;       // base-branch output
  std::vector<double> scale;
  std::vector<double> bias;
  std::vector<double> modulated;
  std::vector<double> logits;     // final affine output, pre sigmoid/softmax
  std::vector<double> output;
};

// Feature-wise modulation: out = f_in * scale + bias, elementwise.
void film(std::span<const double> f_in, std::span<const double> scale,
          std::span<const double> bias, std::span<double> out);

std::vector<double> forward_unconditional(const ModelParams& params, std::span<const double> x,
                                          ForwardCache* cache = nullptr);

std::vector<double> forward_conditional(const ModelParams& params, std::span<const double> x_base,
                                        std::span<const double> x_cond,
                                        ForwardCache* cache = nullptr);

// Base branch composed directly with the output head (no modulation); used to
// verify that near-identity scale/bias leaves the conditional net equal to
// this composition.
std::vector<double> forward_base_only(const ModelParams& params, std::span<const double> x_base);

// Reverse mode from the gradient at the final affine output (pre-head).
void backward_from_logits(const ModelParams& params, const ForwardCache& cache,
                          std::span<const double> d_logits, Gradients& grads);

// Reverse mode from the gradient at the model output (post sigmoid/softmax).
void backward(const ModelParams& params, const ForwardCache& cache,
              std::span<const double> d_output, Gradients& grads);

// Gradient of the loss with respect to the final affine output, composed
// through the head in the numerically stable form.
void loss_logits_gradient(const LossKind& loss, std::span<const double> output, double gt,
                          std::span<double> d_logits);

double loss_value(const LossKind& loss, std::span<const double> output, double gt);

// Glorot-uniform weights, zero biases; the scale head's bias starts at 1 and
// the bias head's at 0 so modulation begins near the identity.
ModelParams init_params(const ArchConfig& arch, std::uint64_t seed);

// Max over parameters of |analytic - numeric| / max(1e-8, |analytic| + |numeric|)
// against central finite differences (eps = 1e-5) on a small random batch.
double grad_check(const ArchConfig& arch, const LossKind& loss, std::uint64_t seed);

double relative_gradient_error(double analytic, double numeric);

}  // namespace gridrisk
