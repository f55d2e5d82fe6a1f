// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cstring>
#include <iostream>
#include <stdexcept>

namespace rislink::detail {

// Checkpoint scalars are stored little-endian; this code targets
// little-endian hosts and the readers check a magic tag on load.

inline void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

inline std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw std::runtime_error("checkpoint: truncated stream");
  }
  return v;
}

inline std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw std::runtime_error("checkpoint: truncated stream");
  }
  return v;
}

inline double read_f64(std::istream& is) {
  double v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(v))) {
    throw std::runtime_error("checkpoint: truncated stream");
  }
  return v;
}

}  // namespace rislink::detail
