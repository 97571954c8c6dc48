#include "gbht/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gbht {

double mae(std::span<const double> estimates, std::span<const double> truths) {
  if (estimates.size() != truths.size())
    throw std::invalid_argument("mae: input length mismatch");
  if (estimates.empty()) throw std::invalid_argument("mae: empty inputs");
  double acc = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i)
    acc += std::abs(estimates[i] - truths[i]);
  return acc / static_cast<double>(estimates.size());
}

double anll(std::span<const double> log_densities) {
  if (log_densities.empty()) throw std::invalid_argument("anll: empty input");
  double acc = 0.0;
  for (double v : log_densities) acc += v;
  return -acc / static_cast<double>(log_densities.size());
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("auc: input length mismatch");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw std::invalid_argument("auc: labels must be 0 or 1");
    n_pos += static_cast<std::size_t>(l);
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("auc: need both a positive and a negative label");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Midranks over tie groups; rank sum of the positive class gives the
  // Mann-Whitney U statistic.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]] == 1) rank_sum_pos += midrank;
    i = j;
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

}  // namespace gbht
