#pragma once

#include <vector>

#include "gbht/boosting.hpp"

namespace gbht {

/// Grid-search result. `table` is in grid order (s_min varying slowest);
/// `chosen_index` points at the row with minimal mean validation ANLL,
/// earliest row winning ties.
struct CvResult {
  struct Entry {
    double s_min = 0.0;
    double s_max = 0.0;
    std::vector<double> fold_anll;
    double mean_anll = 0.0;
  };

  std::vector<Entry> table;
  std::size_t chosen_index = 0;

  const Entry& chosen() const { return table[chosen_index]; }
};

/// Balanced random fold assignment: a uniform permutation dealt round-robin,
/// so fold sizes differ by at most one.
std::vector<int> fold_assignment(std::size_t n, int folds, Rng& rng);

/// K-fold grid search over (s_min, s_min + gap) scale ranges. For every pair
/// and fold, fits on the other folds with base_cfg and scores the held-out
/// fold's ANLL using the floored log density. Each (pair, fold) fit draws
/// from its own stream derived from one master draw of `rng` plus the pair's
/// values, so results depend on neither evaluation order nor grid position;
/// `threads` > 1 distributes grid points.
CvResult cross_validate(const Matrix& data, const GbhtConfig& base_cfg,
                        const std::vector<double>& smin_grid,
                        const std::vector<double>& gap_grid, int folds, Rng& rng,
                        int threads = 1);

/// Evenly spaced grid start, start+step, ... capped at stop (inclusive up to
/// a half-step slack for rounding). Throws std::invalid_argument if step is
/// not positive or the range is empty.
std::vector<double> arithmetic_grid(double start, double step, double stop);

}  // namespace gbht
