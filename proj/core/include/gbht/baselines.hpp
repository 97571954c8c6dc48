#pragma once

#include <vector>

#include "gbht/common.hpp"
#include "gbht/ht_density.hpp"

namespace gbht {

/// Bandwidth policy for the kernel baseline: either the Silverman rule
///   h = sigma * (4 / ((d + 2) n))^(1/(d+4)),  sigma = sqrt(trace(cov)/d)
/// or an explicit positive value.
struct Bandwidth {
  static Bandwidth silverman() { return Bandwidth{true, 0.0}; }
  static Bandwidth fixed(double h) { return Bandwidth{false, h}; }

  bool use_silverman = true;
  double value = 0.0;
};

/// Gaussian-product kernel density estimator over a retained copy of the
/// training data, one shared bandwidth for all axes.
struct KdeModel {
  Matrix points;
  double bandwidth = 0.0;

  int dim() const { return static_cast<int>(points.cols()); }
  double value_at(const Vector& x) const;
};

/// Silverman requires at least two rows and nonzero variance; a fixed
/// bandwidth must be positive and works from a single row. Throws
/// std::invalid_argument otherwise.
KdeModel fit_kde(const Matrix& data, const Bandwidth& bw);

/// Axis-aligned histogram on the data bounding box with
/// ceil(log2(n)) + 1 bins per axis. Mass is count / (n * bin_volume);
/// queries outside the box score zero and the top edge folds into the
/// last bin.
struct HdeModel {
  Vector lo, hi;        // bounding box
  Vector bin_width;     // (hi - lo) / bins_per_axis
  int bins_per_axis = 0;
  double bin_volume = 0.0;
  CellTable mass;

  int dim() const { return static_cast<int>(lo.size()); }
  double value_at(const Vector& x) const;
};

HdeModel fit_hde(const Matrix& data);

}  // namespace gbht
