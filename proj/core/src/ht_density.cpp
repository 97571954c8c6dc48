#include "gbht/ht_density.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gbht {

namespace {

// Lexicographic comparison of two key blocks of length d.
inline bool key_less(const std::int64_t* a, const std::int64_t* b, int d) {
  for (int i = 0; i < d; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

inline bool key_equal(const std::int64_t* a, const std::int64_t* b, int d) {
  for (int i = 0; i < d; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// Bins every row of `data` under `t` and aggregates per-point weights into
// lexicographically sorted cells. Returns (keys, summed weights).
std::pair<std::vector<std::int64_t>, std::vector<double>> aggregate(
    const Matrix& data, const double* weights, const HistogramTransform& t) {
  const auto n = data.rows();
  const int d = t.dim();
  std::vector<std::int64_t> point_keys(static_cast<std::size_t>(n) * d);
  std::vector<double> row(d), work(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) row[c] = data(i, c);
    t.bin_index_into(row.data(), point_keys.data() + static_cast<std::size_t>(i) * d,
                     work.data());
  }

  // Stable: points sharing a cell keep ascending order, which pins the
  // floating-point summation order of each cell's weight total.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return key_less(point_keys.data() + static_cast<std::size_t>(a) * d,
                    point_keys.data() + static_cast<std::size_t>(b) * d, d);
  });

  std::vector<std::int64_t> keys;
  std::vector<double> sums;
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::int64_t* k = point_keys.data() + static_cast<std::size_t>(order[j]) * d;
    if (sums.empty() || !key_equal(keys.data() + keys.size() - d, k, d)) {
      keys.insert(keys.end(), k, k + d);
      sums.push_back(0.0);
    }
    sums.back() += weights ? weights[order[j]] : 1.0;
  }
  return {std::move(keys), std::move(sums)};
}

}  // namespace

// ---------------------------------------------------------------------------
// CellTable
// ---------------------------------------------------------------------------

CellTable::CellTable(int dim, std::vector<std::int64_t> keys, std::vector<double> values)
    : dim_(dim), keys_(std::move(keys)), values_(std::move(values)) {
  if (dim_ < 1) throw std::invalid_argument("CellTable: dimension must be positive");
  if (keys_.size() != values_.size() * static_cast<std::size_t>(dim_))
    throw std::invalid_argument("CellTable: key/value size mismatch");
}

double CellTable::find(const std::int64_t* key) const {
  std::size_t lo = 0, hi = values_.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (key_less(keys_.data() + mid * dim_, key, dim_))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < values_.size() && key_equal(keys_.data() + lo * dim_, key, dim_))
    return values_[lo];
  return 0.0;
}

// ---------------------------------------------------------------------------
// HtDensity
// ---------------------------------------------------------------------------

double HtDensity::value_at(const Vector& x) const {
  if (x.size() != transform.scales.size())
    throw std::invalid_argument("HtDensity::value_at: dimension mismatch");
  const int d = transform.dim();
  std::vector<std::int64_t> ikey(d);
  std::vector<double> work(d);
  return value_at_unchecked(x.data(), ikey.data(), work.data());
}

double HtDensity::value_at_unchecked(const double* x, std::int64_t* ikey,
                                     double* work) const {
  transform.bin_index_into(x, ikey, work);
  return cell_mass.find(ikey);
}

double HtDensity::total_mass() const {
  double s = 0.0;
  for (std::size_t j = 0; j < cell_mass.size(); ++j) s += cell_mass.value(j);
  return s * cell_volume;
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

HtDensity fit_ht(const Matrix& data, const HistogramTransform& t) {
  // Unit weights through the weighted path so both entry points share one
  // rounding behavior for cell masses.
  Vector ones = Vector::Ones(data.rows());
  return fit_weighted_ht(data, ones, t, LearnerMode::kWeightedHistogram);
}

HtDensity fit_weighted_ht(const Matrix& data, const Vector& weights,
                          const HistogramTransform& t, LearnerMode mode) {
  const auto n = data.rows();
  if (n == 0) throw std::invalid_argument("fit_weighted_ht: empty data");
  if (data.cols() != t.dim())
    throw std::invalid_argument("fit_weighted_ht: data/transform dimension mismatch");
  if (weights.size() != n)
    throw std::invalid_argument("fit_weighted_ht: weight count must match rows");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw std::invalid_argument("fit_weighted_ht: weights must be strictly positive");
  }

  auto [keys, sums] = aggregate(data, weights.data(), t);
  const double mu = t.cell_volume();
  const std::size_t m = sums.size();

  HtDensity out;
  out.transform = t;
  out.cell_volume = mu;

  if (mode == LearnerMode::kGreedyCell) {
    // Keys are sorted, so scanning with a strict > keeps the first (i.e.
    // lexicographically smallest) cell among tied maxima.
    std::size_t best = 0;
    for (std::size_t j = 1; j < m; ++j)
      if (sums[j] > sums[best]) best = j;
    const int d = t.dim();
    std::vector<std::int64_t> k(keys.begin() + best * d, keys.begin() + (best + 1) * d);
    out.cell_mass = CellTable(d, std::move(k), {1.0 / mu});
    return out;
  }

  double total = 0.0;
  for (double w : sums) total += w;
  for (double& s : sums) s = (s / total) / mu;
  out.cell_mass = CellTable(t.dim(), std::move(keys), std::move(sums));
  return out;
}

}  // namespace gbht
