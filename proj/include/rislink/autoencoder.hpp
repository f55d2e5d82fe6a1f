// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

#include "rislink/neural.hpp"
#include "rislink/ris.hpp"

namespace rislink {

/// How the discrete codeword choice is handled during training.
/// kSoft: convex combination of codewords under the selector softmax.
/// kHardStraightThrough: hard argmax forward, soft gradient backward.
/// kOracleOnly: bypass the selector and use the exhaustive best beam.
enum class SelectorMode { kSoft, kHardStraightThrough, kOracleOnly };

enum class BeamPolicyKind { kBest, kTopK, kUniformRandom };

/// Inference-time beam policy. best == top-K with K = 1; uniform_random ==
/// top-K with K = |codebook|.
struct BeamPolicy {
  BeamPolicyKind kind = BeamPolicyKind::kBest;
  int k_param = 1;

  int resolved_k(int codebook_size) const;
};

struct TrainConfig {
  int batch_size = 512;
  int iterations = 20000;
  double learning_rate = 1e-3;
  double train_snr_lo_db = 0.0;
  double train_snr_hi_db = 20.0;
  double beam_loss_weight = 1.0;
  SelectorMode selector_mode = SelectorMode::kSoft;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Network widths; defaults are the full-size structures. The gradient and
/// acceptance checks shrink these.
struct ModelDims {
  std::vector<int> encoder_hidden{256, 256};
  std::vector<int> selector_hidden{400, 400, 400, 400};
  std::vector<int> decoder_hidden{1024, 1024, 1024};
  bool one_hot_input = true;
};

/// Fixed experiment: geometry, codebook parameters, insertion loss and
/// message size. kappa_db is a power quantity applied as amplitude
/// 10^(-kappa_db/20).
struct Scenario {
  Geometry geometry;
  double codebook_min_deg = 100.0;
  double codebook_max_deg = 160.0;
  int codebook_size = 32;
  double kappa_db = 3.0;
  int k_bits = 2;

  void validate() const;
};

struct EndToEndModel {
  MlpParams encoder;
  MlpParams selector;
  MlpParams decoder;
  Codebook codebook;
  Channel h_tr;
  Channel h_ri;
  Geometry geometry;
  double kappa = 1.0;
  int k_bits = 2;

  int n_messages() const { return 1 << k_bits; }
  bool one_hot_input() const { return encoder.input_width() > 1; }
  void validate() const;
};

EndToEndModel build_model(const Scenario& scenario, const ModelDims& dims, std::uint64_t seed);

void validate_messages(const std::vector<int>& messages, int k_bits);
Eigen::MatrixXd one_hot(const std::vector<int>& messages, int n_classes);

/// Encoder forward + batch power normalization; one complex symbol per
/// message. The output batch has mean symbol power exactly 1.
ComplexVector encode(const EndToEndModel& model, const std::vector<int>& messages);

/// [Re x, Im x, Re h_ri[0], Im h_ri[0], ..] of width 2 + 2N.
Eigen::VectorXd build_selector_input(Complex x, const Channel& h_ri);

struct BeamSelection {
  Eigen::MatrixXd weights;        // |codebook| x M, columns sum to 1
  std::vector<int> hard_indices;  // per-column argmax
};

/// Selector network over a batch of selector inputs (columns).
/// kOracleOnly bypasses the network and returns one-hot oracle weights.
BeamSelection select_beam(const EndToEndModel& model, const Eigen::MatrixXd& selector_inputs,
                          SelectorMode mode);

/// Noise variance that puts the best-beam receive SNR exactly at snr_db:
/// sigma_sq = g_best * P / 10^(snr_db/10) with P = 1, where g_best is the
/// best-beam effective gain (kappa included).
double calibrate_snr(const EndToEndModel& model, double snr_db);

struct ChainResult {
  Eigen::MatrixXd decoder_probs;  // 2^k x M
  std::vector<int> beam_indices;
  ComplexVector x;  // encoded symbols
  ComplexVector y;  // received samples
  Eigen::MatrixXd selector_weights;  // empty unless the selector ran
};

/// Full transmit -> RIS -> receive -> decode chain. training_mode runs the
/// selector and reflects through the soft codeword combination; otherwise
/// the policy picks a hard codeword from the gain ranking.
ChainResult forward_chain(const EndToEndModel& model, const std::vector<int>& messages,
                          double sigma_sq, RngStream& rng, const BeamPolicy& policy,
                          bool training_mode);

struct LossRecord {
  double total = 0.0;
  double symbol = 0.0;
  double beam = 0.0;
};

struct StepGrads {
  MlpGradients encoder;
  MlpGradients selector;  // empty in kOracleOnly mode
  MlpGradients decoder;
};

/// One training step's inputs with the noise draw made explicit, so the
/// loss is a pure function of the parameters (used by the end-to-end
/// finite-difference check).
struct StepInputs {
  std::vector<int> messages;
  Eigen::VectorXd sigma_sq;  // per example
  ComplexVector noise;       // per example, already scaled
  int oracle_beam = 0;
};

/// total = CE(decoder probs, messages) + beam_loss_weight * CE(selector
/// weights, oracle beam). Fills analytic gradients for all trained
/// networks when grads is non-null.
LossRecord training_loss_and_grads(const EndToEndModel& model, const StepInputs& inputs,
                                   double beam_loss_weight, SelectorMode mode, StepGrads* grads);

/// Joint Adam training of encoder, selector and decoder. Deterministic for
/// a fixed config seed. Throws std::runtime_error on NaN loss.
EndToEndModel train(const Scenario& scenario, const ModelDims& dims, const TrainConfig& config,
                    std::vector<LossRecord>* history = nullptr);

struct SerResult {
  double ser = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t symbols = 0;
};

/// Monte Carlo SER at best-beam-calibrated snr_db under the given policy.
/// Work is split into fixed-size batches, each driven by its own stream
/// derived from stream_basis (seed, stream_id + 1 + batch); results are
/// identical for any worker count.
SerResult evaluate_ser(const EndToEndModel& model, double snr_db, std::uint64_t n_symbols,
                       const BeamPolicy& policy, const RngStream& stream_basis, int workers = 1,
                       int batch_size = 2048);

/// Versioned binary checkpoint of the whole model; round trip is bit-exact.
void save_model(std::ostream& os, const EndToEndModel& model);
EndToEndModel load_model(std::istream& is);

}  // namespace rislink
