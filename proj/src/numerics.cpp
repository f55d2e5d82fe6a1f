// SPDX-License-Identifier: Apache-2.0
#include "rislink/numerics.hpp"

#include <cmath>

namespace rislink {

namespace {
std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  // seed_seq accepts 32-bit words; split both ids so no entropy is lost.
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}
}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : gen_(make_engine(seed, stream_id)), seed_(seed), stream_id_(stream_id) {}

std::uint64_t RngStream::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
  if (n == 1) return 0;
  const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = gen_();
    if (r >= threshold) return r % n;
  }
}

double RngStream::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

ComplexVector sample_complex_gaussian(RngStream& rng, Eigen::Index n, double variance) {
  if (variance < 0.0) {
    throw std::invalid_argument("sample_complex_gaussian: negative variance");
  }
  const double sigma = std::sqrt(variance / 2.0);
  ComplexVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    out[i] = Complex(sigma * re, sigma * im);
  }
  return out;
}

}  // namespace rislink
