#pragma once

#include <cstdint>
#include <vector>

#include "gbht/transform.hpp"

namespace gbht {

/// Flat sorted map from a d-dimensional integer cell index to a double.
/// Keys are stored as contiguous blocks of `dim` int64 values in
/// lexicographic order; lookups binary-search the key blocks. Storage is
/// deterministic: equal content compares equal field by field.
class CellTable {
 public:
  CellTable() = default;

  /// Takes ownership of pre-sorted, duplicate-free keys (m * dim values)
  /// and their m associated values.
  CellTable(int dim, std::vector<std::int64_t> keys, std::vector<double> values);

  int dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }
  const std::int64_t* key(std::size_t i) const { return keys_.data() + i * dim_; }
  double value(std::size_t i) const { return values_[i]; }
  double& value(std::size_t i) { return values_[i]; }
  const std::vector<std::int64_t>& keys() const { return keys_; }
  const std::vector<double>& values() const { return values_; }

  /// Value stored for `key`, or 0.0 when the cell is absent.
  double find(const std::int64_t* key) const;

 private:
  int dim_ = 0;
  std::vector<std::int64_t> keys_;
  std::vector<double> values_;
};

/// Piecewise-constant density: one random affine transform plus a mass per
/// occupied cell. Integrates to one when the masses were produced by one of
/// the fit functions below.
struct HtDensity {
  HistogramTransform transform;
  CellTable cell_mass;
  double cell_volume = 1.0;  // cached transform.cell_volume()

  double value_at(const Vector& x) const;

  /// Hot path: `ikey` and `work` are scratch buffers of dim() elements.
  double value_at_unchecked(const double* x, std::int64_t* ikey, double* work) const;

  /// sum_j mass_j * cell_volume; equals 1 up to rounding for fitted models.
  double total_mass() const;
};

enum class LearnerMode {
  kWeightedHistogram,  // mass proportional to total cell weight
  kGreedyCell,         // all mass on the single heaviest cell
};

/// Empirical histogram density under `t`: cell j receives
/// count_j / (n * cell_volume). Throws std::invalid_argument for empty data
/// or a dimension mismatch.
HtDensity fit_ht(const Matrix& data, const HistogramTransform& t);

/// Weighted weak learner. In weighted-histogram mode cell j receives
/// (W_j / W) / cell_volume with W_j the summed weights of its points. In
/// greedy-cell mode the cell with maximal W_j (ties: lexicographically
/// smallest index) receives 1 / cell_volume and every other cell zero.
/// Weights must be strictly positive and match the number of rows.
HtDensity fit_weighted_ht(const Matrix& data, const Vector& weights,
                          const HistogramTransform& t, LearnerMode mode);

}  // namespace gbht
