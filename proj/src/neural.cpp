// SPDX-License-Identifier: Apache-2.0
#include "rislink/neural.hpp"

#include <cmath>

#include "rislink/binary_io.hpp"

namespace rislink {

namespace {

constexpr double kProbFloor = 1e-12;
constexpr std::uint32_t kMlpMagic = 0x4d4c5031;  // "MLP1"

void check_labels(const Eigen::MatrixXd& probs, const std::vector<int>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != probs.cols()) {
    throw std::invalid_argument("cross_entropy: label/batch size mismatch");
  }
  for (int label : labels) {
    if (label < 0 || label >= probs.rows()) {
      throw std::invalid_argument("cross_entropy: label out of range");
    }
  }
  for (Eigen::Index i = 0; i < probs.cols(); ++i) {
    if (std::abs(probs.col(i).sum() - 1.0) > 1e-6) {
      throw std::invalid_argument("cross_entropy: probabilities do not sum to 1");
    }
  }
}

Eigen::MatrixXd apply_activation(Activation act, const Eigen::MatrixXd& z) {
  switch (act) {
    case Activation::kRelu:
      return z.cwiseMax(0.0);
    case Activation::kLinear:
      return z;
    case Activation::kSoftmax: {
      // column-wise, max-shifted for stability
      Eigen::MatrixXd out(z.rows(), z.cols());
      for (Eigen::Index i = 0; i < z.cols(); ++i) {
        const Eigen::VectorXd shifted = z.col(i).array() - z.col(i).maxCoeff();
        const Eigen::VectorXd e = shifted.array().exp();
        out.col(i) = e / e.sum();
      }
      return out;
    }
  }
  throw std::logic_error("apply_activation: unknown activation");
}

}  // namespace

void MlpParams::validate() const {
  if (layers.empty() || layers.size() != spec.size()) {
    throw std::invalid_argument("MlpParams: empty or spec/layer count mismatch");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerSpec& s = spec[l];
    if (s.input_width < 1 || s.output_width < 1) {
      throw std::invalid_argument("MlpParams: widths must be >= 1");
    }
    if (layers[l].weights.rows() != s.output_width || layers[l].weights.cols() != s.input_width ||
        layers[l].biases.size() != s.output_width) {
      throw std::invalid_argument("MlpParams: layer shape does not match spec");
    }
    if (l > 0 && spec[l - 1].output_width != s.input_width) {
      throw std::invalid_argument("MlpParams: layer widths do not chain");
    }
    if (s.activation == Activation::kSoftmax && l + 1 != layers.size()) {
      throw std::invalid_argument("MlpParams: softmax only permitted as the final layer");
    }
    if (!layers[l].weights.allFinite() || !layers[l].biases.allFinite()) {
      throw std::invalid_argument("MlpParams: non-finite parameters");
    }
  }
}

std::vector<LayerSpec> stack_specs(int input_width, const std::vector<int>& hidden_widths,
                                   int output_width, Activation head) {
  std::vector<LayerSpec> spec;
  int in = input_width;
  for (int h : hidden_widths) {
    spec.push_back({in, h, Activation::kRelu});
    in = h;
  }
  spec.push_back({in, output_width, head});
  return spec;
}

MlpParams make_mlp(const std::vector<LayerSpec>& spec, RngStream& rng) {
  MlpParams params;
  params.spec = spec;
  for (const LayerSpec& s : spec) {
    DenseLayer layer;
    layer.weights.resize(s.output_width, s.input_width);
    const double r = std::sqrt(6.0 / (s.input_width + s.output_width));
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
      for (Eigen::Index rr = 0; rr < layer.weights.rows(); ++rr) {
        layer.weights(rr, c) = r * (2.0 * rng.uniform() - 1.0);
      }
    }
    layer.biases = Eigen::VectorXd::Zero(s.output_width);
    params.layers.push_back(std::move(layer));
  }
  params.validate();
  return params;
}

Eigen::MatrixXd forward(const MlpParams& params, const Eigen::MatrixXd& input,
                        ForwardCache* cache) {
  if (input.rows() != params.input_width()) {
    throw std::invalid_argument("forward: input width mismatch");
  }
  if (cache != nullptr) {
    cache->input = input;
    cache->pre_activations.clear();
    cache->activations.clear();
  }
  Eigen::MatrixXd a = input;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    Eigen::MatrixXd z = params.layers[l].weights * a;
    z.colwise() += params.layers[l].biases;
    a = apply_activation(params.spec[l].activation, z);
    if (cache != nullptr) {
      cache->pre_activations.push_back(std::move(z));
      cache->activations.push_back(a);
    }
  }
  return a;
}

double cross_entropy(const Eigen::MatrixXd& pred_probs, const std::vector<int>& labels) {
  check_labels(pred_probs, labels);
  double total = 0.0;
  for (Eigen::Index i = 0; i < pred_probs.cols(); ++i) {
    total -= std::log(std::max(pred_probs(labels[i], i), kProbFloor));
  }
  return total / static_cast<double>(pred_probs.cols());
}

Eigen::MatrixXd cross_entropy_grad(const Eigen::MatrixXd& pred_probs,
                                   const std::vector<int>& labels) {
  check_labels(pred_probs, labels);
  const double inv_m = 1.0 / static_cast<double>(pred_probs.cols());
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(pred_probs.rows(), pred_probs.cols());
  for (Eigen::Index i = 0; i < pred_probs.cols(); ++i) {
    grad(labels[i], i) = -inv_m / std::max(pred_probs(labels[i], i), kProbFloor);
  }
  return grad;
}

Eigen::MatrixXd backward(const MlpParams& params, const ForwardCache& cache,
                         const Eigen::MatrixXd& output_grad, MlpGradients* grads) {
  const std::size_t n_layers = params.layers.size();
  if (cache.activations.size() != n_layers || cache.pre_activations.size() != n_layers ||
      cache.input.rows() != params.input_width() ||
      output_grad.rows() != params.output_width() ||
      output_grad.cols() != cache.input.cols()) {
    throw std::invalid_argument("backward: cache does not match params/output_grad");
  }
  if (grads != nullptr) grads->layers.assign(n_layers, DenseLayer{});

  Eigen::MatrixXd da = output_grad;
  for (std::size_t l = n_layers; l-- > 0;) {
    Eigen::MatrixXd dz;
    switch (params.spec[l].activation) {
      case Activation::kRelu:
        dz = da.cwiseProduct((cache.pre_activations[l].array() > 0.0).cast<double>().matrix());
        break;
      case Activation::kLinear:
        dz = da;
        break;
      case Activation::kSoftmax: {
        // dz = p .* (da - colwise_dot(da, p))
        const Eigen::MatrixXd& p = cache.activations[l];
        const Eigen::RowVectorXd dot = (da.cwiseProduct(p)).colwise().sum();
        dz = p.cwiseProduct(da - dot.replicate(p.rows(), 1));
        break;
      }
    }
    const Eigen::MatrixXd& prev = l == 0 ? cache.input : cache.activations[l - 1];
    if (grads != nullptr) {
      grads->layers[l].weights = dz * prev.transpose();
      grads->layers[l].biases = dz.rowwise().sum();
    }
    da = params.layers[l].weights.transpose() * dz;
  }
  return da;
}

AdamState make_adam(const MlpParams& params, double learning_rate, double beta1, double beta2,
                    double epsilon) {
  AdamState state;
  state.learning_rate = learning_rate;
  state.beta1 = beta1;
  state.beta2 = beta2;
  state.epsilon = epsilon;
  for (const DenseLayer& layer : params.layers) {
    DenseLayer zero{Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                    Eigen::VectorXd::Zero(layer.biases.size())};
    state.first_moment.push_back(zero);
    state.second_moment.push_back(zero);
  }
  return state;
}

void adam_step(AdamState& state, MlpParams& params, const MlpGradients& grads) {
  if (grads.layers.size() != params.layers.size() ||
      state.first_moment.size() != params.layers.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  state.step_count += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, state.step_count);
  const double bc2 = 1.0 - std::pow(state.beta2, state.step_count);
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const DenseLayer& g = grads.layers[l];
    if (g.weights.rows() != params.layers[l].weights.rows() ||
        g.weights.cols() != params.layers[l].weights.cols() ||
        g.biases.size() != params.layers[l].biases.size()) {
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    }
    auto update = [&](auto& m, auto& v, auto& p, const auto& grad) {
      m = state.beta1 * m + (1.0 - state.beta1) * grad;
      v = state.beta2 * v + (1.0 - state.beta2) * grad.cwiseProduct(grad);
      p.array() -=
          state.learning_rate * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.epsilon);
    };
    update(state.first_moment[l].weights, state.second_moment[l].weights,
           params.layers[l].weights, g.weights);
    update(state.first_moment[l].biases, state.second_moment[l].biases, params.layers[l].biases,
           g.biases);
  }
}

Eigen::MatrixXd power_normalize(const Eigen::MatrixXd& batch, double* scale_out) {
  const double mean_power = batch.squaredNorm() / static_cast<double>(batch.cols());
  if (!(mean_power > 0.0)) {
    throw std::domain_error("power_normalize: all-zero batch");
  }
  const double scale = std::sqrt(mean_power);
  if (scale_out != nullptr) *scale_out = scale;
  return batch / scale;
}

Eigen::MatrixXd power_normalize_backward(const Eigen::MatrixXd& upstream,
                                         const Eigen::MatrixXd& normalized, double scale) {
  if (upstream.rows() != normalized.rows() || upstream.cols() != normalized.cols()) {
    throw std::invalid_argument("power_normalize_backward: shape mismatch");
  }
  // d/dx of x/s(x) with s^2 = mean_i ||x_i||^2:
  // (1/s) * (g - y * sum(g .* y) / M), y = x/s.
  const double coupling =
      upstream.cwiseProduct(normalized).sum() / static_cast<double>(normalized.cols());
  return (upstream - coupling * normalized) / scale;
}

void save_mlp(std::ostream& os, const MlpParams& params) {
  params.validate();
  detail::write_u32(os, kMlpMagic);
  detail::write_u32(os, static_cast<std::uint32_t>(params.layers.size()));
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const LayerSpec& s = params.spec[l];
    detail::write_u32(os, static_cast<std::uint32_t>(s.input_width));
    detail::write_u32(os, static_cast<std::uint32_t>(s.output_width));
    detail::write_u32(os, static_cast<std::uint32_t>(s.activation));
    const DenseLayer& layer = params.layers[l];
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
        detail::write_f64(os, layer.weights(r, c));
      }
    }
    for (Eigen::Index i = 0; i < layer.biases.size(); ++i) {
      detail::write_f64(os, layer.biases[i]);
    }
  }
}

MlpParams load_mlp(std::istream& is) {
  if (detail::read_u32(is) != kMlpMagic) {
    throw std::runtime_error("load_mlp: bad magic");
  }
  const std::uint32_t n_layers = detail::read_u32(is);
  MlpParams params;
  for (std::uint32_t l = 0; l < n_layers; ++l) {
    LayerSpec s;
    s.input_width = static_cast<int>(detail::read_u32(is));
    s.output_width = static_cast<int>(detail::read_u32(is));
    s.activation = static_cast<Activation>(detail::read_u32(is));
    DenseLayer layer;
    layer.weights.resize(s.output_width, s.input_width);
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
        layer.weights(r, c) = detail::read_f64(is);
      }
    }
    layer.biases.resize(s.output_width);
    for (Eigen::Index i = 0; i < layer.biases.size(); ++i) {
      layer.biases[i] = detail::read_f64(is);
    }
    params.spec.push_back(s);
    params.layers.push_back(std::move(layer));
  }
  params.validate();
  return params;
}

}  // namespace rislink
