#include "gridrisk/nn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridrisk/rng.hpp"

namespace gridrisk {

std::string to_string(ArchKind kind) {
  return kind == ArchKind::unconditional ? "unconditional" : "conditional";
}

ArchKind arch_kind_from_string(const std::string& text) {
  if (text == "unconditional" || text == "uncond") return ArchKind::unconditional;
  if (text == "conditional" || text == "cond") return ArchKind::conditional;
  throw UsageError("unknown architecture '" + text + "'");
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DataError(std::string("architecture: ") + what);
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i != text.size() && text[i] != ',') continue;
    if (i > start) out.push_back(std::stoi(text.substr(start, i - start)));
    start = i + 1;
  }
  return out;
}

}  // namespace

void ArchConfig::validate() const {
  require(d_out == 1 || d_out == 2, "d_out must be 1 or 2");
  require(d_base > 0, "base input width must be positive");
  require(d_cond >= 0, "condition width must be nonnegative");
  if (kind == ArchKind::unconditional) {
    require(!hidden.empty(), "unconditional stack needs at least one hidden layer");
    for (std::size_t i = 0; i < hidden.size(); ++i) {
      require(hidden[i] > 0, "hidden widths must be positive");
      if (i > 0) require(hidden[i] < hidden[i - 1], "hidden widths must strictly decrease");
    }
  } else {
    require(d_cond > 0, "conditional model needs condition inputs");
    require(!branch_base.empty(), "base branch needs at least one layer");
    require(!branch_cond.empty(), "condition branch needs at least one layer");
    for (int wdt : branch_base) require(wdt > 0, "branch widths must be positive");
    for (int wdt : branch_cond) require(wdt > 0, "branch widths must be positive");
    for (int wdt : output_head) require(wdt > 0, "head widths must be positive");
  }
}

std::string ArchConfig::descriptor() const {
  std::ostringstream out;
  out << "kind=" << to_string(kind) << ";d_base=" << d_base << ";d_cond=" << d_cond
      << ";d_out=" << d_out << ";hidden=" << join_ints(hidden)
      << ";branch_base=" << join_ints(branch_base) << ";branch_cond=" << join_ints(branch_cond)
      << ";output_head=" << join_ints(output_head);
  return out.str();
}

ArchConfig ArchConfig::from_descriptor(const std::string& text) {
  ArchConfig arch;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(start, end - start);
    start = end + 1;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw DataError("malformed architecture descriptor");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "kind") {
      arch.kind = arch_kind_from_string(value);
    } else if (key == "d_base") {
      arch.d_base = std::stoi(value);
    } else if (key == "d_cond") {
      arch.d_cond = std::stoi(value);
    } else if (key == "d_out") {
      arch.d_out = std::stoi(value);
    } else if (key == "hidden") {
      arch.hidden = parse_ints(value);
    } else if (key == "branch_base") {
      arch.branch_base = parse_ints(value);
    } else if (key == "branch_cond") {
      arch.branch_cond = parse_ints(value);
    } else if (key == "output_head") {
      arch.output_head = parse_ints(value);
    } else {
      throw DataError("unknown architecture descriptor key '" + key + "'");
    }
  }
  arch.validate();
  return arch;
}

std::size_t ParamSet::scalar_count() const {
  std::size_t n = 0;
  for_each_layer([&](const LinearLayer& l) { n += l.w.size() + l.b.size(); });
  return n;
}

void ParamSet::fill(double value) {
  for_each_layer([&](LinearLayer& l) {
    std::fill(l.w.begin(), l.w.end(), value);
    std::fill(l.b.begin(), l.b.end(), value);
  });
}

namespace {

LinearLayer make_layer(int in, int out) {
  LinearLayer l;
  l.in = in;
  l.out = out;
  l.w.assign(static_cast<std::size_t>(in) * static_cast<std::size_t>(out), 0.0);
  l.b.assign(static_cast<std::size_t>(out), 0.0);
  return l;
}

ParamSet make_param_set(const ArchConfig& arch) {
  ParamSet s;
  if (arch.kind == ArchKind::unconditional) {
    int in = arch.d_base + arch.d_cond;
    for (int wdt : arch.hidden) {
      s.layers.push_back(make_layer(in, wdt));
      in = wdt;
    }
    s.layers.push_back(make_layer(in, arch.d_out));
  } else {
    int in = arch.d_base;
    for (int wdt : arch.branch_base) {
      s.base_branch.push_back(make_layer(in, wdt));
      in = wdt;
    }
    const int film_width = in;
    in = arch.d_cond;
    for (int wdt : arch.branch_cond) {
      s.cond_branch.push_back(make_layer(in, wdt));
      in = wdt;
    }
    s.scale_head = make_layer(in, film_width);
    s.bias_head = make_layer(in, film_width);
    in = film_width;
    for (int wdt : arch.output_head) {
      s.head.push_back(make_layer(in, wdt));
      in = wdt;
    }
    s.head.push_back(make_layer(in, arch.d_out));
  }
  return s;
}

void affine(const LinearLayer& l, std::span<const double> x, std::vector<double>& y,
            const char* stack, std::size_t layer_idx) {
  if (static_cast<int>(x.size()) != l.in) {
    throw DataError(std::string("forward: input width mismatch in ") + stack + "[" +
                    std::to_string(layer_idx) + "]");
  }
  y.resize(static_cast<std::size_t>(l.out));
  const double* w = l.w.data();
  double checksum = 0.0;
  for (int o = 0; o < l.out; ++o) {
    const double* row = w + static_cast<std::size_t>(o) * static_cast<std::size_t>(l.in);
    double acc = l.b[static_cast<std::size_t>(o)];
    for (int i = 0; i < l.in; ++i) acc += row[i] * x[static_cast<std::size_t>(i)];
    y[static_cast<std::size_t>(o)] = acc;
    checksum += acc;
  }
  if (!std::isfinite(checksum)) {
    throw NumericError(std::string("non-finite activation in ") + stack + "[" +
                       std::to_string(layer_idx) + "]");
  }
}

void relu_inplace(std::vector<double>& v) {
  for (double& x : v) x = std::max(0.0, x);
}

// Runs an affine/rectifier stack. relu_last controls whether the final layer's
// output is rectified (branch stacks) or left linear (logit-producing stacks).
void stack_forward(const std::vector<LinearLayer>& layers, const char* stack_name,
                   std::span<const double> x, bool relu_last,
                   std::vector<LayerCache>* caches, std::vector<double>& out) {
  if (caches != nullptr) caches->resize(layers.size());
  std::vector<double> cur(x.begin(), x.end());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    std::vector<double> next;
    affine(layers[i], cur, next, stack_name, i);
    if (caches != nullptr) {
      (*caches)[i].input = cur;
      (*caches)[i].pre = next;
    }
    if (i + 1 < layers.size() || relu_last) relu_inplace(next);
    cur = std::move(next);
  }
  out = std::move(cur);
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void apply_output_head(int d_out, const std::vector<double>& logits, std::vector<double>& out) {
  if (d_out == 1) {
    out.assign(1, sigmoid(logits[0]));
  } else {
    const double m = std::max(logits[0], logits[1]);
    const double e0 = std::exp(logits[0] - m);
    const double e1 = std::exp(logits[1] - m);
    const double denom = e0 + e1;
    out.assign(2, 0.0);
    out[0] = e0 / denom;
    out[1] = e1 / denom;
  }
}

// Reverse pass over a stack; accumulates layer gradients and, when requested,
// the gradient with respect to the stack input.
void stack_backward(const std::vector<LinearLayer>& layers, const std::vector<LayerCache>& caches,
                    bool relu_last, std::span<const double> d_out,
                    std::vector<LinearLayer>& grads, std::vector<double>* d_input) {
  std::vector<double> upstream(d_out.begin(), d_out.end());
  for (std::size_t i = layers.size(); i-- > 0;) {
    const LinearLayer& l = layers[i];
    const LayerCache& cache = caches[i];
    const bool rectified = (i + 1 < layers.size()) || relu_last;
    if (rectified) {
      for (int o = 0; o < l.out; ++o) {
        if (cache.pre[static_cast<std::size_t>(o)] <= 0.0) upstream[static_cast<std::size_t>(o)] = 0.0;
      }
    }
    LinearLayer& g = grads[i];
    std::vector<double> d_in(static_cast<std::size_t>(l.in), 0.0);
    for (int o = 0; o < l.out; ++o) {
      const double go = upstream[static_cast<std::size_t>(o)];
      g.b[static_cast<std::size_t>(o)] += go;
      const double* w_row = l.w.data() + static_cast<std::size_t>(o) * static_cast<std::size_t>(l.in);
      double* g_row = g.w.data() + static_cast<std::size_t>(o) * static_cast<std::size_t>(l.in);
      const double* input = cache.input.data();
      for (int i2 = 0; i2 < l.in; ++i2) {
        g_row[i2] += go * input[i2];
        d_in[static_cast<std::size_t>(i2)] += go * w_row[i2];
      }
    }
    upstream = std::move(d_in);
  }
  if (d_input != nullptr) *d_input = std::move(upstream);
}

}  // namespace

Gradients zeros_like(const ModelParams& params) {
  return make_param_set(params.arch);
}

std::vector<double*> scalar_pointers(ParamSet& set) {
  std::vector<double*> out;
  set.for_each_layer([&](LinearLayer& l) {
    for (double& v : l.w) out.push_back(&v);
    for (double& v : l.b) out.push_back(&v);
  });
  return out;
}

void film(std::span<const double> f_in, std::span<const double> scale,
          std::span<const double> bias, std::span<double> out) {
  if (f_in.size() != scale.size() || f_in.size() != bias.size() || f_in.size() != out.size()) {
    throw DataError("film: vector length mismatch");
  }
  for (std::size_t i = 0; i < f_in.size(); ++i) {
    out[i] = f_in[i] * scale[i] + bias[i];
  }
}

std::vector<double> forward_unconditional(const ModelParams& params, std::span<const double> x,
                                          ForwardCache* cache) {
  if (params.arch.kind != ArchKind::unconditional) {
    throw DataError("forward_unconditional called on a conditional model");
  }
  std::vector<double> logits;
  stack_forward(params.p.layers, "layers", x, /*relu_last=*/false,
                cache != nullptr ? &cache->layers : nullptr, logits);
  std::vector<double> out;
  apply_output_head(params.arch.d_out, logits, out);
  if (cache != nullptr) {
    cache->logits = logits;
    cache->output = out;
  }
  return out;
}

std::vector<double> forward_conditional(const ModelParams& params, std::span<const double> x_base,
                                        std::span<const double> x_cond, ForwardCache* cache) {
  if (params.arch.kind != ArchKind::conditional) {
    throw DataError("forward_conditional called on an unconditional model");
  }
  std::vector<double> f_in;
  stack_forward(params.p.base_branch, "base_branch", x_base, /*relu_last=*/true,
                cache != nullptr ? &cache->base_branch : nullptr, f_in);

  std::vector<double> embedding;
  stack_forward(params.p.cond_branch, "cond_branch", x_cond, /*relu_last=*/true,
                cache != nullptr ? &cache->cond_branch : nullptr, embedding);

  std::vector<double> scale, bias;
  affine(params.p.scale_head, embedding, scale, "scale_head", 0);
  affine(params.p.bias_head, embedding, bias, "bias_head", 0);

  std::vector<double> modulated(f_in.size(), 0.0);
  film(f_in, scale, bias, modulated);

  std::vector<double> logits;
  stack_forward(params.p.head, "head", modulated, /*relu_last=*/false,
                cache != nullptr ? &cache->head : nullptr, logits);
  std::vector<double> out;
  apply_output_head(params.arch.d_out, logits, out);

  if (cache != nullptr) {
    cache->scale_cache.input = embedding;
    cache->scale_cache.pre = scale;
    cache->bias_cache.input = embedding;
    cache->bias_cache.pre = bias;
    cache->f_in = std::move(f_in);
    cache->scale = std::move(scale);
    cache->bias = std::move(bias);
    cache->modulated = std::move(modulated);
    cache->logits = logits;
    cache->output = out;
  }
  return out;
}

std::vector<double> forward_base_only(const ModelParams& params, std::span<const double> x_base) {
  if (params.arch.kind != ArchKind::conditional) {
    throw DataError("forward_base_only requires a conditional model");
  }
  std::vector<double> f_in;
  stack_forward(params.p.base_branch, "base_branch", x_base, /*relu_last=*/true, nullptr, f_in);
  std::vector<double> logits;
  stack_forward(params.p.head, "head", f_in, /*relu_last=*/false, nullptr, logits);
  std::vector<double> out;
  apply_output_head(params.arch.d_out, logits, out);
  return out;
}

void backward_from_logits(const ModelParams& params, const ForwardCache& cache,
                          std::span<const double> d_logits, Gradients& grads) {
  if (params.arch.kind == ArchKind::unconditional) {
    if (cache.layers.size() != params.p.layers.size()) {
      throw DataError("backward: cache does not match the parameter set");
    }
    stack_backward(params.p.layers, cache.layers, /*relu_last=*/false, d_logits, grads.layers,
                   nullptr);
    return;
  }

  if (cache.head.size() != params.p.head.size() ||
      cache.base_branch.size() != params.p.base_branch.size() ||
      cache.cond_branch.size() != params.p.cond_branch.size()) {
    throw DataError("backward: cache does not match the parameter set");
  }

  std::vector<double> d_modulated;
  stack_backward(params.p.head, cache.head, /*relu_last=*/false, d_logits, grads.head,
                 &d_modulated);

  // product rule through the modulation
  const std::size_t h = cache.f_in.size();
  std::vector<double> d_f_in(h), d_scale(h), d_bias(h);
  for (std::size_t i = 0; i < h; ++i) {
    d_f_in[i] = d_modulated[i] * cache.scale[i];
    d_scale[i] = d_modulated[i] * cache.f_in[i];
    d_bias[i] = d_modulated[i];
  }

  // the two modulation heads share the condition embedding
  std::vector<double> d_embedding(cache.scale_cache.input.size(), 0.0);
  {
    const LinearLayer& l = params.p.scale_head;
    LinearLayer& g = grads.scale_head;
    for (int o = 0; o < l.out; ++o) {
      const double go = d_scale[static_cast<std::size_t>(o)];
      g.b[static_cast<std::size_t>(o)] += go;
      const double* w_row = l.w.data() + static_cast<std::size_t>(o) * static_cast<std::size_t>(l.in);
      double* g_row = g.w.data() + static_cast<std::size_t>(o) * static_cast<std::size_t>(l.in);
      for (int i = 0; i < l.in; ++i) {
        g_row[i] += go * cache.scale_cache.input[static_cast<std::size_t>(i)];
        d_embedding[static_cast<std::size_t>(i)] += go * w_row[i];
      }
    }
  }
  {
    const LinearLayer& l = params.p.bias_head;
    LinearLayer& g = grads.bias_head;
    for (int o = 0; o < l.out; ++o) {
      const double go = d_bias[static_cast<std::size_t>(o)];
      g.b[static_cast<std::size_t>(o)] += go;
      const double* w_row = l.w.data() + static_cast<std::size_t>(o) * static_cast<std::size_t>(l.in);
      double* g_row = g.w.data() + static_cast<std::size_t>(o) * static_cast<std::size_t>(l.in);
      for (int i = 0; i < l.in; ++i) {
        g_row[i] += go * cache.bias_cache.input[static_cast<std::size_t>(i)];
        d_embedding[static_cast<std::size_t>(i)] += go * w_row[i];
      }
    }
  }

  stack_backward(params.p.cond_branch, cache.cond_branch, /*relu_last=*/true, d_embedding,
                 grads.cond_branch, nullptr);
  stack_backward(params.p.base_branch, cache.base_branch, /*relu_last=*/true, d_f_in,
                 grads.base_branch, nullptr);
}

void backward(const ModelParams& params, const ForwardCache& cache,
              std::span<const double> d_output, Gradients& grads) {
  const int d_out = params.arch.d_out;
  if (static_cast<int>(d_output.size()) != d_out || cache.output.empty()) {
    throw DataError("backward: upstream gradient does not match the model output");
  }
  std::vector<double> d_logits(static_cast<std::size_t>(d_out), 0.0);
  if (d_out == 1) {
    const double p = cache.output[0];
    d_logits[0] = d_output[0] * p * (1.0 - p);
  } else {
    const double s = d_output[0] * cache.output[0] + d_output[1] * cache.output[1];
    d_logits[0] = cache.output[0] * (d_output[0] - s);
    d_logits[1] = cache.output[1] * (d_output[1] - s);
  }
  backward_from_logits(params, cache, d_logits, grads);
}

void loss_logits_gradient(const LossKind& loss, std::span<const double> output, double gt,
                          std::span<double> d_logits) {
  if (loss.type == LossKind::Type::exponential) {
    const auto [value, d_pred] = exponential_loss(output[0], gt, loss.beta);
    (void)value;
    const double p = output[0];
    d_logits[0] = d_pred * p * (1.0 - p);
  } else {
    const auto grad = wce_logits_gradient({output[0], output[1]}, gt, loss.w);
    d_logits[0] = grad[0];
    d_logits[1] = grad[1];
  }
}

double loss_value(const LossKind& loss, std::span<const double> output, double gt) {
  if (loss.type == LossKind::Type::exponential) {
    return exponential_loss(output[0], gt, loss.beta).first;
  }
  return weighted_cross_entropy({output[0], output[1]}, gt, loss.w).first;
}

ModelParams init_params(const ArchConfig& arch, std::uint64_t seed) {
  arch.validate();
  ModelParams params;
  params.arch = arch;
  params.p = make_param_set(arch);
  Rng rng(mix_seed({seed, 0x1217ull}));
  params.p.for_each_layer([&](LinearLayer& l) {
    const double bound = std::sqrt(6.0 / static_cast<double>(l.in + l.out));
    for (double& w : l.w) w = rng.uniform(-bound, bound);
  });
  if (arch.kind == ArchKind::conditional) {
    // modulation starts near the identity
    std::fill(params.p.scale_head.b.begin(), params.p.scale_head.b.end(), 1.0);
    std::fill(params.p.bias_head.b.begin(), params.p.bias_head.b.end(), 0.0);
  }
  return params;
}

double relative_gradient_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

double grad_check(const ArchConfig& arch, const LossKind& loss, std::uint64_t seed) {
  arch.validate();
  if (arch.d_out != loss.d_out()) {
    throw DataError("grad_check: architecture head width does not match the loss");
  }
  ModelParams params = init_params(arch, mix_seed({seed, 0x6C0Dull}));
  Rng rng(mix_seed({seed, 0xDA7Aull}));

  constexpr int kBatch = 4;
  std::vector<std::vector<double>> bases, conds;
  std::vector<double> targets;
  for (int s = 0; s < kBatch; ++s) {
    std::vector<double> base(static_cast<std::size_t>(arch.d_base));
    for (double& v : base) v = rng.uniform(-1.0, 1.0);
    std::vector<double> cond(static_cast<std::size_t>(arch.d_cond));
    for (double& v : cond) v = rng.uniform(-1.0, 1.0);
    bases.push_back(std::move(base));
    conds.push_back(std::move(cond));
    targets.push_back(rng.uniform01());
  }

  auto forward_sample = [&](int s, ForwardCache* cache) {
    if (arch.kind == ArchKind::unconditional) {
      std::vector<double> x = bases[static_cast<std::size_t>(s)];
      x.insert(x.end(), conds[static_cast<std::size_t>(s)].begin(),
               conds[static_cast<std::size_t>(s)].end());
      return forward_unconditional(params, x, cache);
    }
    return forward_conditional(params, bases[static_cast<std::size_t>(s)],
                               conds[static_cast<std::size_t>(s)], cache);
  };

  // keep targets away from the exponential loss kink and saturation
  for (int s = 0; s < kBatch; ++s) {
    const auto out = forward_sample(s, nullptr);
    const double pred = loss.d_out() == 1 ? out[0] : out[1];
    double& gt = targets[static_cast<std::size_t>(s)];
    if (std::abs(gt - pred) < 0.05) {
      gt = pred + 0.15 <= 1.0 ? pred + 0.15 : pred - 0.15;
    }
    gt = std::clamp(gt, 0.0, 1.0);
  }

  auto batch_loss = [&]() {
    double total = 0.0;
    for (int s = 0; s < kBatch; ++s) {
      const auto out = forward_sample(s, nullptr);
      total += loss_value(loss, out, targets[static_cast<std::size_t>(s)]);
    }
    return total / kBatch;
  };

  Gradients grads = zeros_like(params);
  for (int s = 0; s < kBatch; ++s) {
    ForwardCache cache;
    const auto out = forward_sample(s, &cache);
    std::vector<double> d_logits(static_cast<std::size_t>(arch.d_out), 0.0);
    loss_logits_gradient(loss, out, targets[static_cast<std::size_t>(s)], d_logits);
    for (double& g : d_logits) g /= kBatch;
    backward_from_logits(params, cache, d_logits, grads);
  }

  const std::vector<double*> theta = scalar_pointers(params.p);
  const std::vector<double*> analytic = scalar_pointers(grads);
  constexpr double kEps = 1e-5;
  double worst = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double original = *theta[i];
    *theta[i] = original + kEps;
    const double up = batch_loss();
    *theta[i] = original - kEps;
    const double down = batch_loss();
    *theta[i] = original;
    const double numeric = (up - down) / (2.0 * kEps);
    worst = std::max(worst, relative_gradient_error(*analytic[i], numeric));
  }
  return worst;
}

}  // namespace gridrisk
