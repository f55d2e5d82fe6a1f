// SPDX-License-Identifier: Apache-2.0
#include "rislink/autoencoder.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "rislink/binary_io.hpp"

namespace rislink {

namespace {

constexpr std::uint32_t kModelMagic = 0x524c4145;  // "RLAE"
constexpr std::uint32_t kModelVersion = 1;

// Fixed stream ids inside train(); workers elsewhere derive their own.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

Eigen::MatrixXd encoder_input(const EndToEndModel& model, const std::vector<int>& messages) {
  const Eigen::Index m = static_cast<Eigen::Index>(messages.size());
  if (model.one_hot_input()) return one_hot(messages, model.n_messages());
  Eigen::MatrixXd input(1, m);
  for (Eigen::Index i = 0; i < m; ++i) input(0, i) = static_cast<double>(messages[i]);
  return input;
}

// h_tr .* h_ri with gains folded in; the cascade applies kappa * g^T psi.
ComplexVector cascade_vector(const EndToEndModel& model) {
  return hadamard_product(model.h_tr.effective(), model.h_ri.effective());
}

Eigen::MatrixXd codebook_matrix(const Codebook& book) {
  const Eigen::Index n = book.codewords.front().size();
  Eigen::MatrixXd p(n, book.size());
  for (int i = 0; i < book.size(); ++i) p.col(i) = book.codewords[i].elements;
  return p;
}

Eigen::MatrixXd selector_inputs(const EndToEndModel& model, const ComplexVector& x) {
  const Eigen::Index n = model.h_ri.response.size();
  const ComplexVector h = model.h_ri.effective();
  Eigen::MatrixXd v(2 + 2 * n, x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    v(0, i) = x[i].real();
    v(1, i) = x[i].imag();
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    v.row(2 + 2 * k).setConstant(h[k].real());
    v.row(3 + 2 * k).setConstant(h[k].imag());
  }
  return v;
}

std::vector<int> argmax_columns(const Eigen::MatrixXd& m) {
  std::vector<int> idx(m.cols());
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    Eigen::Index best = 0;
    m.col(i).maxCoeff(&best);
    idx[i] = static_cast<int>(best);
  }
  return idx;
}

// Per-codeword complex cascade amplitude table.
ComplexVector beam_amplitudes(const EndToEndModel& model) {
  ComplexVector c(model.codebook.size());
  for (int p = 0; p < model.codebook.size(); ++p) {
    c[p] = cascade_amplitude(model.h_tr, model.h_ri, model.codebook.codewords[p].elements,
                             model.kappa);
  }
  return c;
}

}  // namespace

int BeamPolicy::resolved_k(int codebook_size) const {
  int k = 1;
  switch (kind) {
    case BeamPolicyKind::kBest:
      k = 1;
      break;
    case BeamPolicyKind::kTopK:
      k = k_param;
      break;
    case BeamPolicyKind::kUniformRandom:
      k = codebook_size;
      break;
  }
  if (k < 1 || k > codebook_size) {
    throw std::invalid_argument("BeamPolicy: K out of range");
  }
  return k;
}

void TrainConfig::validate() const {
  if (batch_size < 2) throw std::invalid_argument("TrainConfig: batch_size must be >= 2");
  if (iterations < 1) throw std::invalid_argument("TrainConfig: iterations must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate <= 0");
  if (!(train_snr_lo_db <= train_snr_hi_db)) {
    throw std::invalid_argument("TrainConfig: snr range inverted");
  }
  if (beam_loss_weight < 0.0) throw std::invalid_argument("TrainConfig: beam_loss_weight < 0");
}

void Scenario::validate() const {
  geometry.validate();
  if (codebook_size < 2) throw std::invalid_argument("Scenario: codebook_size must be >= 2");
  if (!(codebook_min_deg < codebook_max_deg)) {
    throw std::invalid_argument("Scenario: degenerate codebook angle range");
  }
  if (kappa_db < 0.0) throw std::invalid_argument("Scenario: kappa_db must be >= 0");
  if (k_bits < 1) throw std::invalid_argument("Scenario: k_bits must be >= 1");
}

void EndToEndModel::validate() const {
  encoder.validate();
  selector.validate();
  decoder.validate();
  codebook.validate();
  const int n = geometry.n_elements;
  if (encoder.output_width() != 2) throw std::invalid_argument("model: encoder output must be 2");
  if (encoder.input_width() != 1 && encoder.input_width() != n_messages()) {
    throw std::invalid_argument("model: encoder input must be 1 or 2^k");
  }
  if (decoder.input_width() != 2 || decoder.output_width() != n_messages()) {
    throw std::invalid_argument("model: decoder widths must be 2 -> 2^k");
  }
  if (selector.input_width() != 2 + 2 * n || selector.output_width() != codebook.size()) {
    throw std::invalid_argument("model: selector widths must be 2+2N -> |codebook|");
  }
  if (codebook.codewords.front().size() != n || h_tr.response.size() != n ||
      h_ri.response.size() != n) {
    throw std::invalid_argument("model: element count mismatch");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("model: kappa out of (0, 1]");
}

EndToEndModel build_model(const Scenario& scenario, const ModelDims& dims, std::uint64_t seed) {
  scenario.validate();
  EndToEndModel model;
  model.geometry = scenario.geometry;
  model.k_bits = scenario.k_bits;
  model.kappa = db_to_linear_amplitude(-scenario.kappa_db);
  model.codebook =
      build_codebook(scenario.geometry, scenario.geometry.incident_azimuth_deg,
                     scenario.codebook_min_deg, scenario.codebook_max_deg, scenario.codebook_size);
  model.h_tr = make_channel(scenario.geometry, scenario.geometry.incident_azimuth_deg);
  model.h_ri = make_channel(scenario.geometry, scenario.geometry.receiver_azimuth_deg);

  RngStream init(seed, kInitStream);
  const int n_msg = 1 << scenario.k_bits;
  const int enc_in = dims.one_hot_input ? n_msg : 1;
  model.encoder = make_mlp(stack_specs(enc_in, dims.encoder_hidden, 2, Activation::kLinear), init);
  model.selector = make_mlp(stack_specs(2 + 2 * scenario.geometry.n_elements,
                                        dims.selector_hidden, scenario.codebook_size,
                                        Activation::kSoftmax),
                            init);
  model.decoder = make_mlp(stack_specs(2, dims.decoder_hidden, n_msg, Activation::kSoftmax), init);
  model.validate();
  return model;
}

void validate_messages(const std::vector<int>& messages, int k_bits) {
  if (messages.empty()) throw std::invalid_argument("messages: empty batch");
  const int limit = 1 << k_bits;
  for (int m : messages) {
    if (m < 0 || m >= limit) throw std::invalid_argument("messages: value out of range");
  }
}

Eigen::MatrixXd one_hot(const std::vector<int>& messages, int n_classes) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n_classes, static_cast<Eigen::Index>(messages.size()));
  for (std::size_t i = 0; i < messages.size(); ++i) {
    u(messages[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return u;
}

ComplexVector encode(const EndToEndModel& model, const std::vector<int>& messages) {
  validate_messages(messages, model.k_bits);
  const Eigen::MatrixXd raw = forward(model.encoder, encoder_input(model, messages));
  const Eigen::MatrixXd iq = power_normalize(raw);
  ComplexVector x(iq.cols());
  for (Eigen::Index i = 0; i < iq.cols(); ++i) x[i] = Complex(iq(0, i), iq(1, i));
  return x;
}

Eigen::VectorXd build_selector_input(Complex x, const Channel& h_ri) {
  const Eigen::Index n = h_ri.response.size();
  const ComplexVector h = h_ri.effective();
  Eigen::VectorXd v(2 + 2 * n);
  v[0] = x.real();
  v[1] = x.imag();
  for (Eigen::Index k = 0; k < n; ++k) {
    v[2 + 2 * k] = h[k].real();
    v[3 + 2 * k] = h[k].imag();
  }
  return v;
}

BeamSelection select_beam(const EndToEndModel& model, const Eigen::MatrixXd& selector_inputs,
                          SelectorMode mode) {
  if (mode == SelectorMode::kOracleOnly) {
    const int oracle = oracle_best_beam(model.h_tr, model.h_ri, model.codebook, model.kappa);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(model.codebook.size(), selector_inputs.cols());
    w.row(oracle).setOnes();
    return BeamSelection{std::move(w), std::vector<int>(selector_inputs.cols(), oracle)};
  }
  Eigen::MatrixXd w = forward(model.selector, selector_inputs);
  std::vector<int> hard = argmax_columns(w);
  return BeamSelection{std::move(w), std::move(hard)};
}

double calibrate_snr(const EndToEndModel& model, double snr_db) {
  const int best = oracle_best_beam(model.h_tr, model.h_ri, model.codebook, model.kappa);
  const double g_best =
      effective_gain(model.h_tr, model.h_ri, model.codebook.codewords[best], model.kappa);
  return g_best / db_to_linear_power(snr_db);
}

ChainResult forward_chain(const EndToEndModel& model, const std::vector<int>& messages,
                          double sigma_sq, RngStream& rng, const BeamPolicy& policy,
                          bool training_mode) {
  model.validate();
  const Eigen::Index m = static_cast<Eigen::Index>(messages.size());
  ChainResult result;
  result.x = encode(model, messages);
  const ComplexVector g = cascade_vector(model);
  const Eigen::MatrixXd p_mat = codebook_matrix(model.codebook);

  ComplexVector amplitudes(m);
  if (training_mode) {
    const Eigen::MatrixXd v = selector_inputs(model, result.x);
    BeamSelection sel = select_beam(model, v, SelectorMode::kSoft);
    const Eigen::MatrixXd psi_soft = p_mat * sel.weights;  // N x M
    for (Eigen::Index i = 0; i < m; ++i) {
      amplitudes[i] = model.kappa * transpose_dot(g, psi_soft.col(i).cast<Complex>().eval());
    }
    result.selector_weights = std::move(sel.weights);
    result.beam_indices = std::move(sel.hard_indices);
  } else {
    const std::vector<int> ranked = rank_beams(model.h_tr, model.h_ri, model.codebook, model.kappa);
    const int k = policy.resolved_k(model.codebook.size());
    const ComplexVector c = beam_amplitudes(model);
    result.beam_indices.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const int beam = ranked[rng.uniform_int(static_cast<std::uint64_t>(k))];
      result.beam_indices[i] = beam;
      amplitudes[i] = c[beam];
    }
  }

  const ComplexVector noise = sample_complex_gaussian(rng, m, sigma_sq);
  result.y = amplitudes.cwiseProduct(result.x) + noise;

  Eigen::MatrixXd d(2, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    d(0, i) = result.y[i].real();
    d(1, i) = result.y[i].imag();
  }
  result.decoder_probs = forward(model.decoder, d);
  return result;
}

LossRecord training_loss_and_grads(const EndToEndModel& model, const StepInputs& inputs,
                                   double beam_loss_weight, SelectorMode mode, StepGrads* grads) {
  const Eigen::Index m = static_cast<Eigen::Index>(inputs.messages.size());
  validate_messages(inputs.messages, model.k_bits);
  if (inputs.sigma_sq.size() != m || inputs.noise.size() != m) {
    throw std::invalid_argument("training_loss_and_grads: per-example input size mismatch");
  }

  // --- forward ---
  const Eigen::MatrixXd u = encoder_input(model, inputs.messages);
  ForwardCache enc_cache;
  const Eigen::MatrixXd raw = forward(model.encoder, u, &enc_cache);
  double scale = 0.0;
  const Eigen::MatrixXd x_iq = power_normalize(raw, &scale);
  ComplexVector x(m);
  for (Eigen::Index i = 0; i < m; ++i) x[i] = Complex(x_iq(0, i), x_iq(1, i));

  const ComplexVector g = cascade_vector(model);
  const Eigen::MatrixXd p_mat = codebook_matrix(model.codebook);

  const bool use_selector = mode != SelectorMode::kOracleOnly;
  ForwardCache sel_cache;
  Eigen::MatrixXd weights;
  Eigen::MatrixXd psi_eff(p_mat.rows(), m);
  if (use_selector) {
    const Eigen::MatrixXd v = selector_inputs(model, x);
    weights = forward(model.selector, v, &sel_cache);
    if (mode == SelectorMode::kSoft) {
      psi_eff = p_mat * weights;
    } else {  // straight-through: hard forward, soft backward
      const std::vector<int> hard = argmax_columns(weights);
      for (Eigen::Index i = 0; i < m; ++i) psi_eff.col(i) = p_mat.col(hard[i]);
    }
  } else {
    for (Eigen::Index i = 0; i < m; ++i) psi_eff.col(i) = p_mat.col(inputs.oracle_beam);
  }

  ComplexVector amplitude(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    amplitude[i] = model.kappa * transpose_dot(g, psi_eff.col(i).cast<Complex>().eval());
  }
  const ComplexVector y = amplitude.cwiseProduct(x) + inputs.noise;

  Eigen::MatrixXd d(2, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    d(0, i) = y[i].real();
    d(1, i) = y[i].imag();
  }
  ForwardCache dec_cache;
  const Eigen::MatrixXd probs = forward(model.decoder, d, &dec_cache);

  LossRecord loss;
  loss.symbol = cross_entropy(probs, inputs.messages);
  const std::vector<int> oracle_labels(static_cast<std::size_t>(m), inputs.oracle_beam);
  loss.beam = use_selector ? cross_entropy(weights, oracle_labels) : 0.0;
  loss.total = loss.symbol + (use_selector ? beam_loss_weight * loss.beam : 0.0);
  if (grads == nullptr) return loss;

  // --- backward ---
  const Eigen::MatrixXd g_probs = cross_entropy_grad(probs, inputs.messages);
  const Eigen::MatrixXd g_d = backward(model.decoder, dec_cache, g_probs, &grads->decoder);

  // complex-pair gradients through y = amplitude * x + noise
  ComplexVector g_y(m), g_amp(m), g_x_chain(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    g_y[i] = Complex(g_d(0, i), g_d(1, i));
    g_amp[i] = std::conj(x[i]) * g_y[i];
    g_x_chain[i] = std::conj(amplitude[i]) * g_y[i];
  }

  // d amplitude / d psi_n = kappa * g_n (psi is real)
  Eigen::MatrixXd g_psi(p_mat.rows(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    g_psi.col(i) =
        model.kappa * (g.real() * g_amp[i].real() + g.imag() * g_amp[i].imag());
  }

  Eigen::MatrixXd g_x_sel = Eigen::MatrixXd::Zero(2, m);
  if (use_selector) {
    Eigen::MatrixXd g_weights = p_mat.transpose() * g_psi;
    if (beam_loss_weight > 0.0) {
      g_weights += beam_loss_weight * cross_entropy_grad(weights, oracle_labels);
    }
    const Eigen::MatrixXd g_v = backward(model.selector, sel_cache, g_weights, &grads->selector);
    g_x_sel = g_v.topRows(2);
  } else {
    grads->selector.layers.clear();
  }

  Eigen::MatrixXd g_x(2, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    g_x(0, i) = g_x_chain[i].real() + g_x_sel(0, i);
    g_x(1, i) = g_x_chain[i].imag() + g_x_sel(1, i);
  }
  const Eigen::MatrixXd g_raw = power_normalize_backward(g_x, x_iq, scale);
  backward(model.encoder, enc_cache, g_raw, &grads->encoder);
  return loss;
}

EndToEndModel train(const Scenario& scenario, const ModelDims& dims, const TrainConfig& config,
                    std::vector<LossRecord>* history) {
  config.validate();
  EndToEndModel model = build_model(scenario, dims, config.seed);
  const int oracle = oracle_best_beam(model.h_tr, model.h_ri, model.codebook, model.kappa);
  const double g_best =
      effective_gain(model.h_tr, model.h_ri, model.codebook.codewords[oracle], model.kappa);

  RngStream data_rng(config.seed, kDataStream);
  RngStream noise_rng(config.seed, kNoiseStream);
  AdamState opt_enc = make_adam(model.encoder, config.learning_rate);
  AdamState opt_sel = make_adam(model.selector, config.learning_rate);
  AdamState opt_dec = make_adam(model.decoder, config.learning_rate);

  const int n_msg = model.n_messages();
  const bool use_selector = config.selector_mode != SelectorMode::kOracleOnly;
  if (history != nullptr) history->reserve(static_cast<std::size_t>(config.iterations));

  StepInputs step;
  step.oracle_beam = oracle;
  step.messages.resize(config.batch_size);
  step.sigma_sq.resize(config.batch_size);
  step.noise.resize(config.batch_size);
  StepGrads grads;

  for (int it = 0; it < config.iterations; ++it) {
    for (int i = 0; i < config.batch_size; ++i) {
      step.messages[i] = static_cast<int>(data_rng.uniform_int(n_msg));
    }
    for (int i = 0; i < config.batch_size; ++i) {
      const double snr_db = config.train_snr_lo_db +
                            data_rng.uniform() * (config.train_snr_hi_db - config.train_snr_lo_db);
      step.sigma_sq[i] = g_best / db_to_linear_power(snr_db);
    }
    for (int i = 0; i < config.batch_size; ++i) {
      const double s = std::sqrt(step.sigma_sq[i] / 2.0);
      step.noise[i] = Complex(s * noise_rng.gaussian(), s * noise_rng.gaussian());
    }

    const LossRecord loss = training_loss_and_grads(model, step, config.beam_loss_weight,
                                                    config.selector_mode, &grads);
    if (!std::isfinite(loss.total)) {
      std::ostringstream msg;
      msg << "train: non-finite loss at iteration " << it << " (total=" << loss.total
          << ", symbol=" << loss.symbol << ", beam=" << loss.beam << ")";
      throw std::runtime_error(msg.str());
    }
    adam_step(opt_enc, model.encoder, grads.encoder);
    adam_step(opt_dec, model.decoder, grads.decoder);
    if (use_selector) adam_step(opt_sel, model.selector, grads.selector);
    if (history != nullptr) history->push_back(loss);
  }
  return model;
}

SerResult evaluate_ser(const EndToEndModel& model, double snr_db, std::uint64_t n_symbols,
                       const BeamPolicy& policy, const RngStream& stream_basis, int workers,
                       int batch_size) {
  if (n_symbols == 0) throw std::invalid_argument("evaluate_ser: n_symbols must be >= 1");
  if (batch_size < 2) throw std::invalid_argument("evaluate_ser: batch_size must be >= 2");
  model.validate();
  const double sigma_sq = calibrate_snr(model, snr_db);
  const std::vector<int> ranked =
      rank_beams(model.h_tr, model.h_ri, model.codebook, model.kappa);
  const int k = policy.resolved_k(model.codebook.size());
  const ComplexVector c = beam_amplitudes(model);
  const int n_msg = model.n_messages();

  // Fixed batch partition, independent of worker count. A trailing batch of
  // one symbol is folded into its predecessor so every batch has >= 2.
  std::vector<std::uint64_t> sizes;
  for (std::uint64_t done = 0; done < n_symbols;) {
    const std::uint64_t take = std::min<std::uint64_t>(batch_size, n_symbols - done);
    sizes.push_back(take);
    done += take;
  }
  if (sizes.size() >= 2 && sizes.back() == 1) {
    sizes.pop_back();
    sizes.back() += 1;
  }

  const auto run_batch = [&](std::uint64_t batch_idx) -> std::uint64_t {
    RngStream rng(stream_basis.seed(), stream_basis.stream_id() + 1 + batch_idx);
    const std::uint64_t bs = sizes[batch_idx];
    std::vector<int> messages(bs);
    for (std::uint64_t i = 0; i < bs; ++i) {
      messages[i] = static_cast<int>(rng.uniform_int(n_msg));
    }
    std::vector<int> beams(bs, ranked[0]);
    if (k > 1) {
      for (std::uint64_t i = 0; i < bs; ++i) beams[i] = ranked[rng.uniform_int(k)];
    }
    const ComplexVector x = encode(model, messages);
    const ComplexVector noise =
        sample_complex_gaussian(rng, static_cast<Eigen::Index>(bs), sigma_sq);
    Eigen::MatrixXd d(2, static_cast<Eigen::Index>(bs));
    for (std::uint64_t i = 0; i < bs; ++i) {
      const Complex y = c[beams[i]] * x[static_cast<Eigen::Index>(i)] +
                        noise[static_cast<Eigen::Index>(i)];
      d(0, static_cast<Eigen::Index>(i)) = y.real();
      d(1, static_cast<Eigen::Index>(i)) = y.imag();
    }
    const Eigen::MatrixXd probs = forward(model.decoder, d);
    const std::vector<int> decided = argmax_columns(probs);
    std::uint64_t errors = 0;
    for (std::uint64_t i = 0; i < bs; ++i) {
      if (decided[i] != messages[i]) ++errors;
    }
    return errors;
  };

  std::uint64_t total_errors = 0;
  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(sizes.size())));
  if (n_workers == 1) {
    for (std::uint64_t b = 0; b < sizes.size(); ++b) total_errors += run_batch(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::uint64_t> partial(n_workers, 0);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w]() {
        for (;;) {
          const std::uint64_t b = next.fetch_add(1);
          if (b >= sizes.size()) return;
          partial[w] += run_batch(b);
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (std::uint64_t e : partial) total_errors += e;
  }
  return SerResult{static_cast<double>(total_errors) / static_cast<double>(n_symbols),
                   total_errors, n_symbols};
}

void save_model(std::ostream& os, const EndToEndModel& model) {
  model.validate();
  detail::write_u32(os, kModelMagic);
  detail::write_u32(os, kModelVersion);
  detail::write_u32(os, static_cast<std::uint32_t>(model.k_bits));
  detail::write_f64(os, model.kappa);
  detail::write_u32(os, static_cast<std::uint32_t>(model.geometry.n_elements));
  detail::write_f64(os, model.geometry.spacing_wavelengths);
  detail::write_f64(os, model.geometry.incident_azimuth_deg);
  detail::write_f64(os, model.geometry.receiver_azimuth_deg);
  detail::write_f64(os, model.geometry.elevation_deg);

  detail::write_u32(os, static_cast<std::uint32_t>(model.codebook.size()));
  detail::write_u32(os, static_cast<std::uint32_t>(model.codebook.codewords.front().size()));
  detail::write_f64(os, model.codebook.incident_angle_deg);
  for (int i = 0; i < model.codebook.size(); ++i) {
    detail::write_f64(os, model.codebook.target_angles_deg[i]);
    const Eigen::VectorXd& e = model.codebook.codewords[i].elements;
    for (Eigen::Index n = 0; n < e.size(); ++n) detail::write_f64(os, e[n]);
  }
  for (const Channel* ch : {&model.h_tr, &model.h_ri}) {
    detail::write_f64(os, ch->gain);
    for (Eigen::Index n = 0; n < ch->response.size(); ++n) {
      detail::write_f64(os, ch->response[n].real());
      detail::write_f64(os, ch->response[n].imag());
    }
  }
  save_mlp(os, model.encoder);
  save_mlp(os, model.selector);
  save_mlp(os, model.decoder);
}

EndToEndModel load_model(std::istream& is) {
  if (detail::read_u32(is) != kModelMagic) throw std::runtime_error("load_model: bad magic");
  if (detail::read_u32(is) != kModelVersion) {
    throw std::runtime_error("load_model: unsupported version");
  }
  EndToEndModel model;
  model.k_bits = static_cast<int>(detail::read_u32(is));
  model.kappa = detail::read_f64(is);
  model.geometry.n_elements = static_cast<int>(detail::read_u32(is));
  model.geometry.spacing_wavelengths = detail::read_f64(is);
  model.geometry.incident_azimuth_deg = detail::read_f64(is);
  model.geometry.receiver_azimuth_deg = detail::read_f64(is);
  model.geometry.elevation_deg = detail::read_f64(is);

  const int book_size = static_cast<int>(detail::read_u32(is));
  const Eigen::Index n_elem = static_cast<Eigen::Index>(detail::read_u32(is));
  model.codebook.incident_angle_deg = detail::read_f64(is);
  for (int i = 0; i < book_size; ++i) {
    model.codebook.target_angles_deg.push_back(detail::read_f64(is));
    Codeword cw{Eigen::VectorXd(n_elem)};
    for (Eigen::Index n = 0; n < n_elem; ++n) cw.elements[n] = detail::read_f64(is);
    model.codebook.codewords.push_back(std::move(cw));
  }
  for (Channel* ch : {&model.h_tr, &model.h_ri}) {
    ch->gain = detail::read_f64(is);
    ch->response.resize(n_elem);
    for (Eigen::Index n = 0; n < n_elem; ++n) {
      const double re = detail::read_f64(is);
      const double im = detail::read_f64(is);
      ch->response[n] = Complex(re, im);
    }
  }
  model.encoder = load_mlp(is);
  model.selector = load_mlp(is);
  model.decoder = load_mlp(is);
  model.validate();
  return model;
}

}  // namespace rislink
