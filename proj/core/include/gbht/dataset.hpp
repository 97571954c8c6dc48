#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gbht/common.hpp"

namespace gbht {

struct Dataset {
  Matrix matrix;
  std::optional<std::vector<int>> labels;     // binary, split out of the CSV
  std::vector<std::string> column_names;      // empty for headerless files
};

/// Reads a comma-separated file of floats (LF or CRLF, '.' decimal). A
/// header row is assumed iff the first row contains a non-numeric token.
/// When `label_column` names a header column, that column is split out and
/// must hold only 0/1. Parse problems throw std::runtime_error naming the
/// offending row and column; NaN and infinities are rejected.
Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& label_column = std::nullopt);

/// Writes `m` (optionally preceded by a header row) with 17 significant
/// digits, enough for an exact double round-trip.
void write_csv(const std::string& path, const Matrix& m,
               const std::vector<std::string>& column_names = {});

struct MinMaxScaling {
  Matrix scaled;
  std::vector<double> lo, hi;          // per-axis data range
  std::vector<int> constant_columns;   // axes collapsed to 0.0
};

/// Per-axis map x -> (x - lo) / (hi - lo). Constant axes become 0.0 and are
/// recorded rather than erroring.
MinMaxScaling minmax_scale(const Matrix& data);

struct PcaProjection {
  Vector mean;
  Matrix basis;  // d x d', orthonormal columns, descending explained variance

  int target_dim() const { return static_cast<int>(basis.cols()); }
};

/// Centers the data and projects onto the top eigenvectors of the
/// (n-1)-divisor covariance. Each basis column's sign is fixed so its
/// largest-magnitude entry is positive. Requires 1 <= target_dim <= d and
/// n >= 2.
std::pair<PcaProjection, Matrix> pca_reduce(const Matrix& data, int target_dim);

}  // namespace gbht
