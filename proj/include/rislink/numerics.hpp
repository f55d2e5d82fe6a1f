// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace rislink {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

/// 10^(x/10): dB -> linear power ratio.
inline double db_to_linear_power(double x_db) { return std::pow(10.0, x_db / 10.0); }

/// 10^(x/20): dB -> linear amplitude ratio.
inline double db_to_linear_amplitude(double x_db) { return std::pow(10.0, x_db / 20.0); }

/// Deterministic random stream addressed by (seed, stream_id).
///
/// Identical (seed, stream_id) pairs reproduce bit-identical sample
/// sequences across runs and builds: the generator is std::mt19937_64
/// (fully specified by the standard) seeded through std::seed_seq, and
/// gaussian() uses the Marsaglia polar method on top of uniform(), so no
/// implementation-defined distribution code is involved. Distinct
/// stream_ids give independent streams; give each worker its own.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53 usable bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in {0, .., n-1}, unbiased (rejection sampling).
  /// n == 1 returns 0 without consuming generator state.
  std::uint64_t uniform_int(std::uint64_t n);

  /// Standard normal via the Marsaglia polar method (pairs are cached,
  /// so draws alternate between consuming and returning the spare).
  double gaussian();

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// n i.i.d. complex Gaussians with total per-sample variance `variance`
/// (variance/2 per real component). variance = 0 yields zeros but still
/// consumes the same number of draws.
ComplexVector sample_complex_gaussian(RngStream& rng, Eigen::Index n, double variance);

/// Elementwise complex product a .* b. Lengths must match.
template <typename DerivedA, typename DerivedB>
ComplexVector hadamard_product(const Eigen::MatrixBase<DerivedA>& a,
                               const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hadamard_product: length mismatch");
  }
  return a.cwiseProduct(b);
}

/// Unconjugated inner product a^T b (the paper-style transpose dot; note
/// Eigen's .dot() conjugates, which is not what the channel chain uses).
template <typename DerivedA, typename DerivedB>
Complex transpose_dot(const Eigen::MatrixBase<DerivedA>& a,
                      const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("transpose_dot: length mismatch");
  }
  return a.cwiseProduct(b).sum();
}

}  // namespace rislink
