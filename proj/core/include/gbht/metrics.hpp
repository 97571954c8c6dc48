#pragma once

#include <span>
#include <vector>

namespace gbht {

/// Mean absolute error (1/M) sum |est_i - truth_i|.
/// Throws std::invalid_argument on empty or mismatched inputs.
double mae(std::span<const double> estimates, std::span<const double> truths);

/// Average negative log likelihood -(1/M) sum log_densities_i. Entries may
/// be -infinity (empty-cell sentinel), which propagates to +infinity.
double anll(std::span<const double> log_densities);

/// Area under the ROC curve via the Mann-Whitney statistic with midrank tie
/// correction; scores are oriented so that larger means more anomalous
/// (label 1). Throws std::invalid_argument unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace gbht
