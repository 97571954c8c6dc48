#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gbht/ht_density.hpp"

namespace gbht {

/// Knobs for the boosted density fit.
struct GbhtConfig {
  int iterations = 100;        // number of boosting rounds, >= 1
  ScaleParams scale_params{};  // reference_scale is replaced by a data-driven
                               // value when fitting; s_min/s_max are used as given
  LearnerMode learner_mode = LearnerMode::kWeightedHistogram;
  double shrinkage = 1.0;      // in (0, 1]; scales every accepted step size
  double alpha_upper = 1.0 - 1e-6;  // largest admissible mixing coefficient
  double alpha_tolerance = 1e-8;    // line-search interval width at termination
  double density_floor = 1e-12;     // clamp applied inside log_density_at; 0 disables
  std::uint64_t seed = 0;           // recorded for provenance; engines are explicit

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Convex-combination ensemble of piecewise-constant densities:
///   F(x) = w_0 * f0(x) + sum_j w_j * components[j-1](x),
/// with nonnegative weights summing to one. `alphas[t]` is the accepted step
/// size of round t+1 and `train_nll_trace[t]` the mean train negative log
/// likelihood after t rounds (entry 0 is the initial density's).
struct GbhtModel {
  HtDensity f0;
  std::vector<HtDensity> components;
  std::vector<double> alphas;          // size components.size()
  std::vector<double> mixture_weights; // size components.size() + 1, [w_0, w_1, ...]
  std::vector<double> train_nll_trace; // size components.size() + 1
  GbhtConfig config;

  int dim() const { return f0.transform.dim(); }

  double density_at(const Vector& x) const;

  /// log of the floored density. With a zero floor and zero density this is
  /// -infinity; otherwise always finite.
  double log_density_at(const Vector& x) const;

  /// Hot path; scratch buffers hold dim() elements each.
  double density_at_unchecked(const double* x, std::int64_t* ikey, double* work) const;
};

/// Uniform density over the cells of `t` occupied by `data`: every occupied
/// cell carries mass 1 / (m * cell_volume) with m the occupied-cell count, so
/// each training point starts at a strictly positive density.
HtDensity init_f0(const Matrix& data, const HistogramTransform& t);

/// Minimizes a |-> sum_i -log((1-a) * prev_vals[i] + a * cand_vals[i]) over
/// [0, alpha_upper] by golden-section search, then returns the best of
/// {0, interval midpoint, alpha_upper}. The objective is convex; ties and
/// sub-tolerance minimizers resolve to 0, so the chosen step never increases
/// the objective. Throws std::logic_error if any prev_vals entry is <= 0.
double line_search_alpha(std::span<const double> prev_vals,
                         std::span<const double> cand_vals,
                         const GbhtConfig& cfg);

/// Runs one boosting round in place: samples a transform, fits a weak learner
/// with weights 1 / F(x_i), line-searches the mixing step, applies shrinkage
/// and updates components, alphas, mixture_weights and train_nll_trace. A
/// rejected or zero step appends the component with weight 0 and repeats the
/// last trace entry, leaving the predicted density unchanged. `data` must be
/// the training set the model was fit on.
void boost_step(GbhtModel& model, const Matrix& data, Rng& rng, const GbhtConfig& cfg);

/// Fits a full model: draws an initial transform for f0, then runs
/// cfg.iterations boosting rounds. The stored config carries the effective
/// scale parameters (with the data-driven reference scale filled in).
GbhtModel fit_gbht(const Matrix& data, GbhtConfig cfg, Rng& rng);

/// Convenience overload seeding the engine from cfg.seed.
GbhtModel fit_gbht(const Matrix& data, const GbhtConfig& cfg);

/// Reconstructs [w_0, ..., w_T] from step sizes via the update
/// w_j *= (1 - alpha_t); w_t = alpha_t. Matches the incrementally
/// maintained weights of a fitted model.
std::vector<double> mixture_weights_from_alphas(std::span<const double> alphas);

}  // namespace gbht
