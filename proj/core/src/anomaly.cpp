#include "gbht/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gbht {

namespace {

std::vector<double> densities(const GbhtModel& model, const Matrix& data) {
  if (data.cols() != model.dim())
    throw std::invalid_argument("anomaly: data/model dimension mismatch");
  const int d = model.dim();
  std::vector<double> out(data.rows());
  std::vector<double> row(d), work(d);
  std::vector<std::int64_t> ikey(d);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (int c = 0; c < d; ++c) row[c] = data(i, c);
    out[static_cast<std::size_t>(i)] =
        model.density_at_unchecked(row.data(), ikey.data(), work.data());
  }
  return out;
}

}  // namespace

std::vector<double> anomaly_scores(const GbhtModel& model, const Matrix& data) {
  std::vector<double> s = densities(model, data);
  for (double& v : s) v = -v;
  return s;
}

std::vector<bool> detect(const GbhtModel& model, const Matrix& data, double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("detect: rho must be nonnegative");
  std::vector<double> dens = densities(model, data);
  std::vector<bool> flags(dens.size());
  for (std::size_t i = 0; i < dens.size(); ++i) flags[i] = dens[i] <= rho;
  return flags;
}

double contamination_threshold(const GbhtModel& model, const Matrix& train,
                               double contamination) {
  if (!(contamination >= 0.0 && contamination <= 1.0))
    throw std::invalid_argument("contamination_threshold: fraction must be in [0, 1]");
  std::vector<double> dens = densities(model, train);
  if (dens.empty())
    throw std::invalid_argument("contamination_threshold: empty data");
  std::sort(dens.begin(), dens.end());
  if (contamination == 0.0) return 0.0;
  // Nearest-rank quantile: smallest density with at least ceil(q*n) at or below.
  const auto n = dens.size();
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(contamination * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  return dens[rank - 1];
}

}  // namespace gbht
