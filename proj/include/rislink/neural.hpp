// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "rislink/numerics.hpp"

namespace rislink {

enum class Activation { kRelu, kLinear, kSoftmax };

struct LayerSpec {
  int input_width = 0;
  int output_width = 0;
  Activation activation = Activation::kLinear;
};

/// One dense layer: out = act(weights * in + biases), weights is
/// output_width x input_width.
struct DenseLayer {
  Eigen::MatrixXd weights;
  Eigen::VectorXd biases;
};

struct MlpParams {
  std::vector<DenseLayer> layers;
  std::vector<LayerSpec> spec;

  int input_width() const { return spec.front().input_width; }
  int output_width() const { return spec.back().output_width; }
  void validate() const;  // chained widths, finite params, softmax only last
};

/// Spec helper: in -> hidden... (relu) -> out with the given head activation.
std::vector<LayerSpec> stack_specs(int input_width, const std::vector<int>& hidden_widths,
                                   int output_width, Activation head);

/// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases.
/// Weight entries are drawn in Eigen's column-major storage order so a
/// given stream always produces the same network.
MlpParams make_mlp(const std::vector<LayerSpec>& spec, RngStream& rng);

/// Everything backward() needs from the matching forward() call.
/// Columns are samples throughout.
struct ForwardCache {
  Eigen::MatrixXd input;
  std::vector<Eigen::MatrixXd> pre_activations;
  std::vector<Eigen::MatrixXd> activations;
};

/// Layer-by-layer affine + activation; softmax heads return per-column
/// probability vectors. Pass a cache to enable backprop.
Eigen::MatrixXd forward(const MlpParams& params, const Eigen::MatrixXd& input,
                        ForwardCache* cache = nullptr);

/// Mean over columns of -log(prob of true class); probabilities are clamped
/// to >= 1e-12 before the log. Each column must sum to 1 within 1e-6.
double cross_entropy(const Eigen::MatrixXd& pred_probs, const std::vector<int>& labels);

/// dL/dprobs of cross_entropy: -(1/M) * one_hot / clamp(probs).
/// Composed with the softmax jacobian in backward() this reduces to the
/// usual (probs - one_hot)/M at the head.
Eigen::MatrixXd cross_entropy_grad(const Eigen::MatrixXd& pred_probs,
                                   const std::vector<int>& labels);

struct MlpGradients {
  std::vector<DenseLayer> layers;  // same shapes as the params
};

/// Exact analytic backprop. `output_grad` is dL/d(network output); returns
/// dL/d(network input) and, when `grads` is non-null, fills the parameter
/// gradients. The cache must come from a forward() over the same params.
Eigen::MatrixXd backward(const MlpParams& params, const ForwardCache& cache,
                         const Eigen::MatrixXd& output_grad, MlpGradients* grads = nullptr);

struct AdamState {
  std::vector<DenseLayer> first_moment;
  std::vector<DenseLayer> second_moment;
  long step_count = 0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

AdamState make_adam(const MlpParams& params, double learning_rate = 1e-3, double beta1 = 0.9,
                    double beta2 = 0.999, double epsilon = 1e-8);

/// Standard Adam with bias correction; increments step_count.
void adam_step(AdamState& state, MlpParams& params, const MlpGradients& grads);

/// Batch average-power normalization (columns are symbols):
/// out = in / sqrt(mean_i ||in_i||^2). The output batch has mean
/// per-symbol power exactly 1. Throws on an all-zero batch.
Eigen::MatrixXd power_normalize(const Eigen::MatrixXd& batch, double* scale_out = nullptr);

/// Exact gradient of power_normalize, including the batch-coupling term
/// through the shared norm. `normalized` and `scale` are the forward
/// outputs.
Eigen::MatrixXd power_normalize_backward(const Eigen::MatrixXd& upstream,
                                         const Eigen::MatrixXd& normalized, double scale);

/// Versioned binary container, 64-bit weights, bit-exact round trip.
void save_mlp(std::ostream& os, const MlpParams& params);
MlpParams load_mlp(std::istream& is);

}  // namespace rislink
