#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace gbht {

using Matrix = Eigen::MatrixXd;  // rows are samples, columns are features
using Vector = Eigen::VectorXd;

/// All randomness in the library flows through explicitly passed engines of
/// this type. Two engines seeded identically produce identical results on a
/// given platform; nothing reads global or thread-local generator state.
using Rng = std::mt19937_64;

/// Uniform draw on [0, 1) with 53-bit resolution. The top 53 bits of one
/// 64-bit output are scaled by 2^-53, so 1.0 is never returned.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace gbht
