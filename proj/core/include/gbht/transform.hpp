#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gbht/common.hpp"

namespace gbht {

/// Range of the log-uniform stretching prior. Each diagonal
/// entry of the stretching matrix is drawn with log(s_i) uniform on
/// [s_min + log(reference_scale), s_max + log(reference_scale)], i.e. s_min
/// and s_max are offsets in log space around a data-driven reference scale.
struct ScaleParams {
  double s_min = -1.0;
  double s_max = 0.0;
  double reference_scale = 1.0;

  bool valid() const {
    return s_min < s_max && reference_scale > 0.0 &&
           std::isfinite(s_min) && std::isfinite(s_max) &&
           std::isfinite(reference_scale);
  }
};

/// Random affine map H(x) = R * S * x + b with R a proper rotation, S a
/// positive diagonal stretching and b a translation in [0, 1)^d. Unit cubes
/// in the image pull back to parallelepiped cells partitioning input space;
/// the integer floor of H(x) identifies the cell containing x.
struct HistogramTransform {
  Matrix rotation;     // d x d, orthogonal with determinant +1
  Vector scales;       // diagonal of S, strictly positive
  Vector translation;  // componentwise in [0, 1)

  int dim() const { return static_cast<int>(scales.size()); }

  /// H(x). Throws std::invalid_argument on dimension mismatch.
  Vector apply(const Vector& x) const;

  /// Integer cell index floor(H(x)), one int64 per coordinate.
  std::vector<std::int64_t> bin_index(const Vector& x) const;

  /// Unchecked hot-path variants. `out` has dim() slots; `work` is a
  /// caller-provided scratch buffer of dim() doubles.
  void apply_into(const double* x, double* out) const;
  void bin_index_into(const double* x, std::int64_t* out, double* work) const;

  /// Lebesgue volume of one cell, prod_i 1/s_i.
  double cell_volume() const;
};

/// Haar-distributed proper rotation: a d x d matrix of standard normals is
/// QR-factorized, columns of Q are flipped wherever the triangular factor
/// has a negative diagonal entry (making the factorization unique), and the
/// first column is negated if det(Q) = -1. d = 1 always yields [[1.0]].
Matrix sample_rotation(Rng& rng, int d);

/// Data-driven reference bin count per unit length:
///   (3.5 * sigma)^-1 * n^(1/(2+d)),  sigma = sqrt(trace(V) / d)
/// with V the covariance of `data` using the n-1 divisor. Throws
/// std::invalid_argument for fewer than two rows or zero variance.
double reference_scale(const Matrix& data);

Vector sample_stretching(Rng& rng, int d, const ScaleParams& params);
Vector sample_translation(Rng& rng, int d);

/// Draws rotation, stretching and translation, in that order, from `rng`.
HistogramTransform sample_transform(Rng& rng, int d, const ScaleParams& params);

}  // namespace gbht
