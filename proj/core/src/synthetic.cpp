#include "gbht/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gbht {

namespace {

// Inverse-CDF Laplace(0, b) draw; rejects the measure-zero u = 0.
double sample_laplace(Rng& rng, double b) {
  double u;
  do {
    u = uniform01(rng);
  } while (u == 0.0);
  return u < 0.5 ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u));
}

double gaussian_pdf(double sq_dist, double variance, int d) {
  return std::pow(2.0 * std::numbers::pi * variance, -0.5 * d) *
         std::exp(-sq_dist / (2.0 * variance));
}

// Beta(2, 10): 1/B(2,10) = 110.
double beta_2_10_pdf(double x) {
  if (x < 0.0 || x > 1.0) return 0.0;
  const double q = 1.0 - x;
  const double q2 = q * q;
  const double q4 = q2 * q2;
  return 110.0 * x * q4 * q4 * q;
}

}  // namespace

SyntheticType parse_synthetic_type(const std::string& tag) {
  if (tag == "I") return SyntheticType::kTypeI;
  if (tag == "II") return SyntheticType::kTypeII;
  if (tag == "III") return SyntheticType::kTypeIII;
  if (tag == "IV") return SyntheticType::kTypeIV;
  throw std::invalid_argument("unknown synthetic type: " + tag);
}

std::string to_string(SyntheticType type) {
  switch (type) {
    case SyntheticType::kTypeI: return "I";
    case SyntheticType::kTypeII: return "II";
    case SyntheticType::kTypeIII: return "III";
    case SyntheticType::kTypeIV: return "IV";
  }
  return "?";
}

Matrix sample_synthetic(const SyntheticKind& kind, std::size_t n, Rng& rng) {
  const int d = kind.dim;
  if (d < 1) throw std::invalid_argument("sample_synthetic: dimension must be positive");
  if (n < 1) throw std::invalid_argument("sample_synthetic: need at least one sample");

  Matrix out(static_cast<Eigen::Index>(n), d);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::gamma_distribution<double> gamma_a(2.0, 1.0);
  std::gamma_distribution<double> gamma_b(10.0, 1.0);
  std::exponential_distribution<double> expo(0.5);

  for (std::size_t i = 0; i < n; ++i) {
    switch (kind.type) {
      case SyntheticType::kTypeI: {
        const double mean = uniform01(rng) < 0.4 ? 1.0 : -1.0;
        for (int k = 0; k < d; ++k)
          out(i, k) = mean + 0.5 * gauss(rng);
        break;
      }
      case SyntheticType::kTypeII:
        for (int k = 0; k < d; ++k) {
          if (uniform01(rng) < 0.7) {
            const double a = gamma_a(rng), b = gamma_b(rng);
            out(i, k) = a / (a + b);
          } else {
            out(i, k) = 0.6 + 0.4 * uniform01(rng);
          }
        }
        break;
      case SyntheticType::kTypeIII:
        for (int k = 0; k < d; ++k) {
          if (uniform01(rng) < 0.5)
            out(i, k) = sample_laplace(rng, 0.5);
          else
            out(i, k) = 2.0 + 2.0 * uniform01(rng);
        }
        break;
      case SyntheticType::kTypeIV:
        for (int k = 0; k < d - 1; ++k) out(i, k) = expo(rng);
        out(i, d - 1) = 5.0 * uniform01(rng);
        break;
    }
  }
  return out;
}

double true_pdf(const SyntheticKind& kind, const Vector& x) {
  const int d = kind.dim;
  if (x.size() != d) throw std::invalid_argument("true_pdf: dimension mismatch");

  switch (kind.type) {
    case SyntheticType::kTypeI: {
      double sq_plus = 0.0, sq_minus = 0.0;
      for (int k = 0; k < d; ++k) {
        sq_plus += (x[k] - 1.0) * (x[k] - 1.0);
        sq_minus += (x[k] + 1.0) * (x[k] + 1.0);
      }
      return 0.4 * gaussian_pdf(sq_plus, 0.25, d) +
             0.6 * gaussian_pdf(sq_minus, 0.25, d);
    }
    case SyntheticType::kTypeII: {
      double p = 1.0;
      for (int k = 0; k < d; ++k) {
        const double unif = (x[k] >= 0.6 && x[k] <= 1.0) ? 1.0 / 0.4 : 0.0;
        p *= 0.7 * beta_2_10_pdf(x[k]) + 0.3 * unif;
      }
      return p;
    }
    case SyntheticType::kTypeIII: {
      double p = 1.0;
      for (int k = 0; k < d; ++k) {
        const double laplace = std::exp(-std::abs(x[k]) / 0.5) / (2.0 * 0.5);
        const double unif = (x[k] >= 2.0 && x[k] <= 4.0) ? 0.5 : 0.0;
        p *= 0.5 * laplace + 0.5 * unif;
      }
      return p;
    }
    case SyntheticType::kTypeIV: {
      double p = 1.0;
      for (int k = 0; k < d - 1; ++k) {
        if (x[k] < 0.0) return 0.0;
        p *= 0.5 * std::exp(-0.5 * x[k]);
      }
      if (x[d - 1] < 0.0 || x[d - 1] > 5.0) return 0.0;
      return p * 0.2;
    }
  }
  return 0.0;
}

}  // namespace gbht
