#pragma once

#include <cstdint>
#include <cstring>
#include <string>

#include "roofcoh/states.hpp"

namespace roofcoh {

inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t hash = 0xcbf29ce484222325ULL) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::uint64_t fnv1a64_double(double x, std::uint64_t hash) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &x, sizeof bits);
  return fnv1a64(&bits, sizeof bits, hash);
}

inline std::string hex16(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

/// Content hash of a state's raw amplitudes and shape — stable across runs,
/// used to tie report rows back to their inputs.
inline std::string state_digest(const PureState& psi) {
  std::uint64_t hash = fnv1a64("pure", 4);
  for (int d : psi.shape().dims()) hash = fnv1a64(&d, sizeof d, hash);
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    hash = fnv1a64_double(psi.amplitudes()(i).real(), hash);
    hash = fnv1a64_double(psi.amplitudes()(i).imag(), hash);
  }
  return hex16(hash);
}

inline std::string state_digest(const DensityMatrix& rho) {
  std::uint64_t hash = fnv1a64("mixed", 5);
  for (int d : rho.shape().dims()) hash = fnv1a64(&d, sizeof d, hash);
  for (Eigen::Index i = 0; i < rho.matrix().rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.matrix().cols(); ++j) {
      hash = fnv1a64_double(rho.matrix()(i, j).real(), hash);
      hash = fnv1a64_double(rho.matrix()(i, j).imag(), hash);
    }
  }
  return hex16(hash);
}

}  // namespace roofcoh
