#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "gbht/baselines.hpp"
#include "gbht/ht_density.hpp"
#include "testutil.hpp"

using gbht::Bandwidth;
using gbht::HdeModel;
using gbht::HistogramTransform;
using gbht::HtDensity;
using gbht::KdeModel;
using gbht::Matrix;
using gbht::Rng;
using gbht::Vector;

namespace {

Matrix column(std::initializer_list<double> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

double kde_at1d(const KdeModel& m, double x) {
  Vector v(1);
  v[0] = x;
  return m.value_at(v);
}

double hde_at1d(const HdeModel& m, double x) {
  Vector v(1);
  v[0] = x;
  return m.value_at(v);
}

constexpr double kSqrt2Pi = 2.5066282746310002;

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("kernel value at a lone support point is the kernel peak") {
  const Matrix data = column({1.25});
  KdeModel m = gbht::fit_kde(data, Bandwidth::fixed(0.4));
  CHECK(kde_at1d(m, 1.25) == doctest::Approx(1.0 / (0.4 * kSqrt2Pi)).epsilon(1e-12));
  const double a = 0.7;
  CHECK(kde_at1d(m, 1.25 + a) ==
        doctest::Approx(std::exp(-a * a / (2.0 * 0.16)) / (0.4 * kSqrt2Pi)).epsilon(1e-12));
}

TEST_CASE("symmetric two-point support evaluates by symmetry at the midpoint") {
  const double a = 0.9, h = 0.5;
  const Matrix data = column({-a, a});
  KdeModel m = gbht::fit_kde(data, Bandwidth::fixed(h));
  const double expected = std::exp(-a * a / (2.0 * h * h)) / (h * kSqrt2Pi);
  CHECK(kde_at1d(m, 0.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("silverman bandwidth matches an independent recomputation") {
  Rng rng(21);
  for (int d : {1, 2, 5}) {
    const int n = 64;
    Matrix data(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) data(i, j) = 3.0 * gbht::uniform01(rng);
    KdeModel m = gbht::fit_kde(data, Bandwidth::silverman());

    double trace = 0.0;
    for (int j = 0; j < d; ++j) {
      double mean = 0.0;
      for (int i = 0; i < n; ++i) mean += data(i, j);
      mean /= n;
      double ss = 0.0;
      for (int i = 0; i < n; ++i) ss += (data(i, j) - mean) * (data(i, j) - mean);
      trace += ss / (n - 1);
    }
    const double sigma = std::sqrt(trace / d);
    const double expected =
        sigma * std::pow(4.0 / ((d + 2.0) * n), 1.0 / (d + 4.0));
    CHECK(m.bandwidth == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("silverman in one dimension uses the four-thirds-n rule") {
  Rng rng(22);
  const int n = 50;
  Matrix data(n, 1);
  for (int i = 0; i < n; ++i) data(i, 0) = gbht::uniform01(rng);
  KdeModel m = gbht::fit_kde(data, Bandwidth::silverman());

  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += data(i, 0);
  mean /= n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) ss += (data(i, 0) - mean) * (data(i, 0) - mean);
  const double sigma = std::sqrt(ss / (n - 1));
  CHECK(m.bandwidth ==
        doctest::Approx(sigma * std::pow(4.0 / (3.0 * n), 0.2)).epsilon(1e-12));
}

TEST_CASE("one-dimensional kernel density integrates to one") {
  Rng rng(23);
  Matrix data(40, 1);
  for (int i = 0; i < 40; ++i) data(i, 0) = 4.0 * gbht::uniform01(rng) - 2.0;
  KdeModel m = gbht::fit_kde(data, Bandwidth::silverman());
  const double lo = data.minCoeff() - 8.0 * m.bandwidth;
  const double hi = data.maxCoeff() + 8.0 * m.bandwidth;
  const double integral =
      testutil::integrate_simpson([&](double x) { return kde_at1d(m, x); }, lo, hi, 20000);
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("product kernel in two dimensions matches the hand formula") {
  Matrix data(2, 2);
  data << 0.0, 0.0, 1.0, 2.0;
  const double h = 0.8;
  KdeModel m = gbht::fit_kde(data, Bandwidth::fixed(h));
  Vector q(2);
  q << 0.3, 0.4;
  double expected = 0.0;
  for (int i = 0; i < 2; ++i) {
    double term = 1.0;
    for (int j = 0; j < 2; ++j) {
      const double z = (q[j] - data(i, j)) / h;
      term *= std::exp(-0.5 * z * z) / (h * kSqrt2Pi);
    }
    expected += term;
  }
  expected /= 2.0;
  CHECK(m.value_at(q) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("kernel density is positive nearby and underflows to zero far away") {
  const Matrix data = column({0.0, 1.0});
  KdeModel m = gbht::fit_kde(data, Bandwidth::fixed(0.3));
  CHECK(kde_at1d(m, 5.0) > 0.0);
  CHECK(kde_at1d(m, 1e6) == 0.0);  // graceful underflow, no error
}

TEST_CASE("kernel fit input validation") {
  const Matrix one = column({1.0});
  CHECK_THROWS_AS(gbht::fit_kde(one, Bandwidth::silverman()), std::invalid_argument);
  CHECK_NOTHROW(gbht::fit_kde(one, Bandwidth::fixed(0.5)));

  Matrix constant(4, 1);
  constant.setConstant(3.0);
  CHECK_THROWS_AS(gbht::fit_kde(constant, Bandwidth::silverman()), std::invalid_argument);

  const Matrix data = column({0.0, 1.0});
  CHECK_THROWS_AS(gbht::fit_kde(data, Bandwidth::fixed(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(gbht::fit_kde(data, Bandwidth::fixed(-1.0)), std::invalid_argument);

  KdeModel m = gbht::fit_kde(data, Bandwidth::fixed(1.0));
  Vector q(2);
  q << 0.0, 0.0;
  CHECK_THROWS_AS(m.value_at(q), std::invalid_argument);
}

TEST_CASE("histogram bin count follows the log2 rule") {
  Rng rng(31);
  Matrix big(2000, 1);
  for (int i = 0; i < 2000; ++i) big(i, 0) = gbht::uniform01(rng);
  CHECK(gbht::fit_hde(big).bins_per_axis == 12);

  const Matrix two = column({0.0, 1.0});
  CHECK(gbht::fit_hde(two).bins_per_axis == 2);
}

TEST_CASE("histogram counts and the top-edge fold are exact") {
  const Matrix data = column({0.0, 1.0, 2.0, 3.0});  // 3 bins of width 1 on [0,3]
  HdeModel m = gbht::fit_hde(data);
  REQUIRE(m.bins_per_axis == 3);
  CHECK(hde_at1d(m, 0.5) == 0.25);
  CHECK(hde_at1d(m, 1.5) == 0.25);
  CHECK(hde_at1d(m, 2.5) == 0.5);   // the max point folds into the last bin
  CHECK(hde_at1d(m, 3.0) == 0.5);   // upper edge belongs to the last bin
  CHECK(hde_at1d(m, 3.1) == 0.0);
  CHECK(hde_at1d(m, -0.1) == 0.0);
}

TEST_CASE("histogram total mass is one") {
  Rng rng(32);
  for (int d : {1, 2, 3}) {
    Matrix data(200, d);
    for (int i = 0; i < 200; ++i)
      for (int j = 0; j < d; ++j) data(i, j) = 5.0 * gbht::uniform01(rng) - 2.0;
    HdeModel m = gbht::fit_hde(data);
    double mass = 0.0;
    for (std::size_t c = 0; c < m.mass.size(); ++c) mass += m.mass.value(c);
    CHECK(mass * m.bin_volume == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("one-dimensional histogram integrates to one") {
  Rng rng(33);
  Matrix data(150, 1);
  for (int i = 0; i < 150; ++i) data(i, 0) = 7.0 * gbht::uniform01(rng);
  HdeModel m = gbht::fit_hde(data);
  std::vector<double> breakpoints;
  for (int k = 0; k <= m.bins_per_axis; ++k)
    breakpoints.push_back(m.lo[0] + m.bin_width[0] * k);
  const double integral =
      testutil::integrate_step([&](double x) { return hde_at1d(m, x); }, breakpoints);
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("histogram rejects degenerate inputs") {
  const Matrix one = column({1.0});
  CHECK_THROWS_AS(gbht::fit_hde(one), std::invalid_argument);

  Matrix flat(5, 2);
  for (int i = 0; i < 5; ++i) {
    flat(i, 0) = i;
    flat(i, 1) = 2.0;  // zero range on axis 2
  }
  CHECK_THROWS_AS(gbht::fit_hde(flat), std::invalid_argument);

  const Matrix ok = column({0.0, 1.0});
  HdeModel m = gbht::fit_hde(ok);
  Vector q(2);
  q << 0.0, 0.0;
  CHECK_THROWS_AS(m.value_at(q), std::invalid_argument);
}

TEST_CASE("histogram agrees with an equivalent axis-aligned transform fit") {
  // Same binning expressed through the affine-transform path; the two code
  // paths must agree on interior cells. (The top-edge fold is histogram
  // specific, so the last bin is excluded.)
  const Matrix data = column({0.0, 0.3, 1.2, 1.7, 2.2, 3.1, 3.6, 4.0});
  HdeModel hde = gbht::fit_hde(data);
  REQUIRE(hde.bins_per_axis == 4);

  HistogramTransform t;
  t.rotation = Matrix::Identity(1, 1);
  t.scales = Vector::Constant(1, hde.bins_per_axis / (4.0 - 0.0));
  t.translation = Vector::Constant(1, -0.0 * t.scales[0]);
  HtDensity ht = gbht::fit_ht(data, t);

  for (double q : {0.5, 1.5, 2.5}) {
    Vector v(1);
    v[0] = q;
    CHECK(hde.value_at(v) == doctest::Approx(ht.value_at(v)).epsilon(1e-12));
  }
}

}  // TEST_SUITE
