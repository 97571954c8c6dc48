#include "gbht/boosting.hpp"

#include <cmath>
#include <stdexcept>

namespace gbht {

namespace {

double sum_neg_log(std::span<const double> vals) {
  double acc = 0.0;
  for (double v : vals) acc -= std::log(v);
  return acc;
}

double mixture_objective(std::span<const double> prev, std::span<const double> cand,
                         double a) {
  double acc = 0.0;
  const std::size_t n = prev.size();
  for (std::size_t i = 0; i < n; ++i)
    acc -= std::log((1.0 - a) * prev[i] + a * cand[i]);
  return acc;
}

// Evaluates every row of `data` under the current mixture held in `model`.
std::vector<double> mixture_values(const GbhtModel& model, const Matrix& data) {
  const auto n = data.rows();
  const int d = model.dim();
  std::vector<double> vals(n);
  std::vector<double> row(d), work(d);
  std::vector<std::int64_t> ikey(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) row[c] = data(i, c);
    vals[i] = model.density_at_unchecked(row.data(), ikey.data(), work.data());
  }
  return vals;
}

struct FitState {
  std::vector<double> f_vals;  // current mixture evaluated at each training row
  double sum_nll = 0.0;        // sum_i -log f_vals[i]
};

// One boosting round against a carried state; shared by fit_gbht (which keeps
// the state across rounds) and boost_step (which rebuilds it from the model).
void boost_round(GbhtModel& model, const Matrix& data, FitState& st, Rng& rng,
                 const GbhtConfig& cfg) {
  const auto n = data.rows();
  const int d = model.dim();

  HistogramTransform t = sample_transform(rng, d, cfg.scale_params);

  Vector weights(n);
  for (Eigen::Index i = 0; i < n; ++i) weights[i] = 1.0 / st.f_vals[i];
  HtDensity learner = fit_weighted_ht(data, weights, t, cfg.learner_mode);

  std::vector<double> cand(n);
  {
    std::vector<double> row(d), work(d);
    std::vector<std::int64_t> ikey(d);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int c = 0; c < d; ++c) row[c] = data(i, c);
      cand[i] = learner.value_at_unchecked(row.data(), ikey.data(), work.data());
    }
  }

  double alpha = cfg.shrinkage * line_search_alpha(st.f_vals, cand, cfg);

  bool accepted = false;
  std::vector<double> updated;
  double s_new = 0.0;
  if (alpha > 0.0) {
    updated.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
      updated[i] = (1.0 - alpha) * st.f_vals[i] + alpha * cand[i];
    s_new = sum_neg_log(updated);
    // Keep the train NLL trace non-increasing by construction: a step that
    // fails to improve the carried sum or the recorded trace becomes a no-op.
    accepted = s_new <= st.sum_nll &&
               s_new / static_cast<double>(n) <= model.train_nll_trace.back();
  }
  if (!accepted) alpha = 0.0;

  model.components.push_back(std::move(learner));
  model.alphas.push_back(alpha);
  for (double& w : model.mixture_weights) w *= (1.0 - alpha);
  model.mixture_weights.push_back(alpha);

  if (accepted) {
    st.f_vals = std::move(updated);
    st.sum_nll = s_new;
    model.train_nll_trace.push_back(s_new / static_cast<double>(n));
  } else {
    model.train_nll_trace.push_back(model.train_nll_trace.back());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Config and model
// ---------------------------------------------------------------------------

void GbhtConfig::validate() const {
  if (iterations < 1)
    throw std::invalid_argument("GbhtConfig: iterations must be at least 1");
  if (!(scale_params.s_min < scale_params.s_max) ||
      !std::isfinite(scale_params.s_min) || !std::isfinite(scale_params.s_max))
    throw std::invalid_argument("GbhtConfig: scale range requires s_min < s_max");
  if (!(shrinkage > 0.0) || shrinkage > 1.0)
    throw std::invalid_argument("GbhtConfig: shrinkage must lie in (0, 1]");
  if (!(alpha_upper > 0.0) || !(alpha_upper < 1.0))
    throw std::invalid_argument("GbhtConfig: alpha_upper must lie in (0, 1)");
  if (!(alpha_tolerance > 0.0))
    throw std::invalid_argument("GbhtConfig: alpha_tolerance must be positive");
  if (density_floor < 0.0 || !std::isfinite(density_floor))
    throw std::invalid_argument("GbhtConfig: density_floor must be nonnegative");
}

double GbhtModel::density_at(const Vector& x) const {
  if (x.size() != f0.transform.scales.size())
    throw std::invalid_argument("GbhtModel::density_at: dimension mismatch");
  const int d = dim();
  std::vector<std::int64_t> ikey(d);
  std::vector<double> work(d);
  return density_at_unchecked(x.data(), ikey.data(), work.data());
}

double GbhtModel::density_at_unchecked(const double* x, std::int64_t* ikey,
                                       double* work) const {
  double acc = mixture_weights[0] * f0.value_at_unchecked(x, ikey, work);
  for (std::size_t j = 0; j < components.size(); ++j) {
    const double w = mixture_weights[j + 1];
    if (w == 0.0) continue;
    acc += w * components[j].value_at_unchecked(x, ikey, work);
  }
  return acc;
}

double GbhtModel::log_density_at(const Vector& x) const {
  double v = density_at(x);
  if (config.density_floor > 0.0 && v < config.density_floor)
    v = config.density_floor;
  return std::log(v);
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

HtDensity init_f0(const Matrix& data, const HistogramTransform& t) {
  HtDensity f = fit_ht(data, t);
  const double v = 1.0 / (static_cast<double>(f.cell_mass.size()) * f.cell_volume);
  for (std::size_t j = 0; j < f.cell_mass.size(); ++j) f.cell_mass.value(j) = v;
  return f;
}

double line_search_alpha(std::span<const double> prev_vals,
                         std::span<const double> cand_vals,
                         const GbhtConfig& cfg) {
  if (prev_vals.size() != cand_vals.size())
    throw std::invalid_argument("line_search_alpha: value arrays differ in length");
  if (prev_vals.empty())
    throw std::invalid_argument("line_search_alpha: empty value arrays");
  for (double p : prev_vals)
    if (!(p > 0.0))
      throw std::logic_error("line_search_alpha: previous density not positive");

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = cfg.alpha_upper;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double g1 = mixture_objective(prev_vals, cand_vals, x1);
  double g2 = mixture_objective(prev_vals, cand_vals, x2);
  while (b - a > cfg.alpha_tolerance) {
    if (g1 <= g2) {  // ties shrink toward 0
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - inv_phi * (b - a);
      g1 = mixture_objective(prev_vals, cand_vals, x1);
    } else {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + inv_phi * (b - a);
      g2 = mixture_objective(prev_vals, cand_vals, x2);
    }
  }

  // The endpoints stay admissible candidates alongside the refined interval;
  // earlier candidates win ties so a flat objective yields 0.
  const double mid = 0.5 * (a + b);
  double best = 0.0;
  double g_best = mixture_objective(prev_vals, cand_vals, 0.0);
  for (double c : {mid, cfg.alpha_upper}) {
    const double g = mixture_objective(prev_vals, cand_vals, c);
    if (g < g_best) {
      best = c;
      g_best = g;
    }
  }
  // The search resolves the minimizer only to alpha_tolerance; below that,
  // prefer the exact no-op.
  if (best < cfg.alpha_tolerance) best = 0.0;
  return best;
}

void boost_step(GbhtModel& model, const Matrix& data, Rng& rng, const GbhtConfig& cfg) {
  cfg.validate();
  if (data.rows() == 0 || data.cols() != model.dim())
    throw std::invalid_argument("boost_step: data/model dimension mismatch");
  FitState st;
  st.f_vals = mixture_values(model, data);
  for (double v : st.f_vals)
    if (!(v > 0.0))
      throw std::logic_error("boost_step: model density not positive on training data");
  st.sum_nll = sum_neg_log(st.f_vals);
  boost_round(model, data, st, rng, cfg);
}

GbhtModel fit_gbht(const Matrix& data, GbhtConfig cfg, Rng& rng) {
  cfg.validate();
  if (data.rows() < 2)
    throw std::invalid_argument("fit_gbht: need at least two samples");
  if (data.cols() < 1)
    throw std::invalid_argument("fit_gbht: data has no columns");

  cfg.scale_params.reference_scale = reference_scale(data);

  GbhtModel model;
  model.config = cfg;

  const int d = static_cast<int>(data.cols());
  HistogramTransform t0 = sample_transform(rng, d, cfg.scale_params);
  model.f0 = init_f0(data, t0);
  model.mixture_weights = {1.0};

  FitState st;
  st.f_vals = mixture_values(model, data);
  st.sum_nll = sum_neg_log(st.f_vals);
  model.train_nll_trace.push_back(st.sum_nll / static_cast<double>(data.rows()));

  for (int t = 0; t < cfg.iterations; ++t)
    boost_round(model, data, st, rng, cfg);
  return model;
}

GbhtModel fit_gbht(const Matrix& data, const GbhtConfig& cfg) {
  Rng rng(cfg.seed);
  return fit_gbht(data, cfg, rng);
}

std::vector<double> mixture_weights_from_alphas(std::span<const double> alphas) {
  std::vector<double> w{1.0};
  for (double a : alphas) {
    for (double& x : w) x *= (1.0 - a);
    w.push_back(a);
  }
  return w;
}

}  // namespace gbht
