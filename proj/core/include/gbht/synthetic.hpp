#pragma once

#include <string>

#include "gbht/common.hpp"

namespace gbht {

/// The four benchmark families:
///   I    0.4 * N(e_d, 0.25 I) + 0.6 * N(-e_d, 0.25 I), e_d = (1, ..., 1)
///   II   coordinates i.i.d. 0.7 * Beta(2, 10) + 0.3 * Unif(0.6, 1.0)
///   III  coordinates i.i.d. 0.5 * Laplace(0, 0.5) + 0.5 * Unif(2, 4)
///   IV   coordinates 1..d-1 i.i.d. Exp(rate 0.5), coordinate d Unif(0, 5)
enum class SyntheticType { kTypeI, kTypeII, kTypeIII, kTypeIV };

struct SyntheticKind {
  SyntheticType type = SyntheticType::kTypeI;
  int dim = 1;
};

/// Parses "I" | "II" | "III" | "IV"; throws std::invalid_argument otherwise.
SyntheticType parse_synthetic_type(const std::string& tag);
std::string to_string(SyntheticType type);

/// n i.i.d. rows. Type I picks one mixture component per row; the marginal
/// mixtures of Types II and III are picked per coordinate, keeping
/// coordinates independent.
Matrix sample_synthetic(const SyntheticKind& kind, std::size_t n, Rng& rng);

/// Exact density of `kind` at x; zero outside the support.
double true_pdf(const SyntheticKind& kind, const Vector& x);

}  // namespace gbht
