#include "gbht/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace gbht {

// ---------------------------------------------------------------------------
// Kernel density estimator
// ---------------------------------------------------------------------------

KdeModel fit_kde(const Matrix& data, const Bandwidth& bw) {
  const auto n = data.rows();
  const auto d = data.cols();
  if (n < 1) throw std::invalid_argument("fit_kde: empty data");
  if (d < 1) throw std::invalid_argument("fit_kde: data has no columns");

  double h;
  if (bw.use_silverman) {
    if (n < 2)
      throw std::invalid_argument("fit_kde: Silverman rule needs at least two samples");
    Matrix centered = data.rowwise() - data.colwise().mean();
    const double sigma =
        std::sqrt(centered.squaredNorm() / static_cast<double>(n - 1) /
                  static_cast<double>(d));
    if (!(sigma > 0.0))
      throw std::invalid_argument("fit_kde: zero variance under the Silverman rule");
    h = sigma * std::pow(4.0 / ((static_cast<double>(d) + 2.0) * static_cast<double>(n)),
                         1.0 / (static_cast<double>(d) + 4.0));
  } else {
    if (!(bw.value > 0.0) || !std::isfinite(bw.value))
      throw std::invalid_argument("fit_kde: fixed bandwidth must be positive");
    h = bw.value;
  }

  KdeModel m;
  m.points = data;
  m.bandwidth = h;
  return m;
}

double KdeModel::value_at(const Vector& x) const {
  const auto d = points.cols();
  if (x.size() != d)
    throw std::invalid_argument("KdeModel::value_at: dimension mismatch");
  const double inv_2h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double sq = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double diff = x[k] - points(i, k);
      sq += diff * diff;
    }
    acc += std::exp(-sq * inv_2h2);
  }
  const double norm =
      std::pow(2.0 * std::numbers::pi * bandwidth * bandwidth,
               -0.5 * static_cast<double>(d));
  return acc * norm / static_cast<double>(points.rows());
}

// ---------------------------------------------------------------------------
// Histogram density estimator
// ---------------------------------------------------------------------------

HdeModel fit_hde(const Matrix& data) {
  const auto n = data.rows();
  const auto d = data.cols();
  if (n < 2) throw std::invalid_argument("fit_hde: need at least two samples");
  if (d < 1) throw std::invalid_argument("fit_hde: data has no columns");

  HdeModel m;
  m.lo = data.colwise().minCoeff();
  m.hi = data.colwise().maxCoeff();
  for (Eigen::Index k = 0; k < d; ++k) {
    if (!(m.hi[k] > m.lo[k]))
      throw std::invalid_argument("fit_hde: zero range on an axis");
  }
  m.bins_per_axis =
      static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
  m.bin_width = (m.hi - m.lo) / static_cast<double>(m.bins_per_axis);
  m.bin_volume = 1.0;
  for (Eigen::Index k = 0; k < d; ++k) m.bin_volume *= m.bin_width[k];

  // Per-point bin indices, top edge clamped into the last bin.
  const int dd = static_cast<int>(d);
  std::vector<std::int64_t> point_keys(static_cast<std::size_t>(n) * dd);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < dd; ++k) {
      auto idx = static_cast<std::int64_t>(
          std::floor((data(i, k) - m.lo[k]) / m.bin_width[k]));
      if (idx >= m.bins_per_axis) idx = m.bins_per_axis - 1;
      if (idx < 0) idx = 0;
      point_keys[static_cast<std::size_t>(i) * dd + k] = idx;
    }
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  auto key_at = [&](std::uint32_t i) {
    return point_keys.data() + static_cast<std::size_t>(i) * dd;
  };
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(key_at(a), key_at(a) + dd, key_at(b),
                                        key_at(b) + dd);
  });

  std::vector<std::int64_t> keys;
  std::vector<double> counts;
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::int64_t* k = key_at(order[j]);
    if (counts.empty() || !std::equal(keys.end() - dd, keys.end(), k)) {
      keys.insert(keys.end(), k, k + dd);
      counts.push_back(0.0);
    }
    counts.back() += 1.0;
  }
  for (double& c : counts)
    c = c / (static_cast<double>(n) * m.bin_volume);
  m.mass = CellTable(dd, std::move(keys), std::move(counts));
  return m;
}

double HdeModel::value_at(const Vector& x) const {
  const auto d = lo.size();
  if (x.size() != d)
    throw std::invalid_argument("HdeModel::value_at: dimension mismatch");
  std::vector<std::int64_t> idx(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (x[k] < lo[k] || x[k] > hi[k]) return 0.0;
    auto i = static_cast<std::int64_t>(std::floor((x[k] - lo[k]) / bin_width[k]));
    if (i >= bins_per_axis) i = bins_per_axis - 1;
    if (i < 0) i = 0;
    idx[k] = i;
  }
  return mass.find(idx.data());
}

}  // namespace gbht
