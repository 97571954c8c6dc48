#include "gbht/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace gbht {

Matrix sample_rotation(Rng& rng, int d) {
  if (d < 1) throw std::invalid_argument("sample_rotation: dimension must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  const Matrix& packed = qr.matrixQR();
  for (int i = 0; i < d; ++i)
    if (packed(i, i) < 0.0) q.col(i) = -q.col(i);
  if (q.determinant() < 0.0) q.col(0) = -q.col(0);
  return q;
}

double reference_scale(const Matrix& data) {
  const auto n = data.rows();
  const auto d = data.cols();
  if (n < 2) throw std::invalid_argument("reference_scale: need at least two samples");
  if (d < 1) throw std::invalid_argument("reference_scale: data has no columns");
  Matrix centered = data.rowwise() - data.colwise().mean();
  const double trace_cov = centered.squaredNorm() / static_cast<double>(n - 1);
  const double sigma = std::sqrt(trace_cov / static_cast<double>(d));
  if (!(sigma > 0.0))
    throw std::invalid_argument("reference_scale: data is degenerate (zero variance)");
  return std::pow(static_cast<double>(n), 1.0 / static_cast<double>(2 + d)) / (3.5 * sigma);
}

Vector sample_stretching(Rng& rng, int d, const ScaleParams& params) {
  if (d < 1) throw std::invalid_argument("sample_stretching: dimension must be positive");
  if (!params.valid())
    throw std::invalid_argument("sample_stretching: invalid scale parameters");
  const double lo = params.s_min + std::log(params.reference_scale);
  const double hi = params.s_max + std::log(params.reference_scale);
  Vector s(d);
  for (int i = 0; i < d; ++i) s[i] = std::exp(lo + (hi - lo) * uniform01(rng));
  return s;
}

Vector sample_translation(Rng& rng, int d) {
  if (d < 1) throw std::invalid_argument("sample_translation: dimension must be positive");
  Vector b(d);
  for (int i = 0; i < d; ++i) b[i] = uniform01(rng);
  return b;
}

HistogramTransform sample_transform(Rng& rng, int d, const ScaleParams& params) {
  HistogramTransform t;
  t.rotation = sample_rotation(rng, d);
  t.scales = sample_stretching(rng, d, params);
  t.translation = sample_translation(rng, d);
  return t;
}

Vector HistogramTransform::apply(const Vector& x) const {
  if (x.size() != scales.size())
    throw std::invalid_argument("HistogramTransform::apply: dimension mismatch");
  return rotation * scales.cwiseProduct(x) + translation;
}

void HistogramTransform::apply_into(const double* x, double* out) const {
  const int d = dim();
  for (int r = 0; r < d; ++r) out[r] = translation[r];
  // Column-major traversal of the rotation keeps the inner loop contiguous.
  for (int c = 0; c < d; ++c) {
    const double sx = scales[c] * x[c];
    const double* col = rotation.data() + static_cast<std::ptrdiff_t>(c) * d;
    for (int r = 0; r < d; ++r) out[r] += col[r] * sx;
  }
}

std::vector<std::int64_t> HistogramTransform::bin_index(const Vector& x) const {
  if (x.size() != scales.size())
    throw std::invalid_argument("HistogramTransform::bin_index: dimension mismatch");
  const int d = dim();
  std::vector<std::int64_t> idx(d);
  std::vector<double> work(d);
  bin_index_into(x.data(), idx.data(), work.data());
  return idx;
}

void HistogramTransform::bin_index_into(const double* x, std::int64_t* out,
                                        double* work) const {
  const int d = dim();
  apply_into(x, work);
  for (int i = 0; i < d; ++i)
    out[i] = static_cast<std::int64_t>(std::floor(work[i]));
}

double HistogramTransform::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= 1.0 / scales[i];
  return v;
}

}  // namespace gbht
