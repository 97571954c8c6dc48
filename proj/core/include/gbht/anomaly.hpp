#pragma once

#include <vector>

#include "gbht/boosting.hpp"

namespace gbht {

/// score_i = -density(x_i): larger means more anomalous, zero is the
/// maximum (reached only on zero-density points).
std::vector<double> anomaly_scores(const GbhtModel& model, const Matrix& data);

/// Algorithm: flag x_i iff density(x_i) <= rho. Throws std::invalid_argument
/// for rho < 0 or a dimension mismatch.
std::vector<bool> detect(const GbhtModel& model, const Matrix& data, double rho);

/// Convenience threshold: the empirical `contamination`-quantile (nearest
/// rank, contamination in [0, 1]) of the model's densities on `train`, so
/// that detect() flags about that fraction of the training rows.
double contamination_threshold(const GbhtModel& model, const Matrix& train,
                               double contamination);

}  // namespace gbht
