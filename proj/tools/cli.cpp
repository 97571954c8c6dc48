/**
 * Command-line surface of the toolkit:
 *   synth  draw samples from the built-in benchmark distributions
 *   fit    train a boosted histogram-transform density model
 *   cv     grid-search scale ranges by k-fold cross-validation
 *   eval   score a model on held-out data (ANLL, optional MAE vs. known pdf)
 *   score  export anomaly scores and threshold flags
 *   curve  sample a 1-D model's density on an even grid for plotting
 *
 * Every subcommand is deterministic given its flags and --seed; --threads
 * only changes wall time.
 */
#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbht/anomaly.hpp"
#include "gbht/baselines.hpp"
#include "gbht/boosting.hpp"
#include "gbht/cross_validation.hpp"
#include "gbht/dataset.hpp"
#include "gbht/metrics.hpp"
#include "gbht/model_io.hpp"
#include "gbht/synthetic.hpp"

namespace gbht::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// "start:step:stop" -> arithmetic grid; used both as a parse-time validator
// and for the actual expansion.
std::vector<double> parse_grid_spec(const std::string& spec) {
  const std::size_t c1 = spec.find(':');
  const std::size_t c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos ||
      spec.find(':', c2 + 1) != std::string::npos)
    throw std::invalid_argument("grid must be start:step:stop, got '" + spec + "'");
  double parts[3];
  const std::string fields[3] = {spec.substr(0, c1), spec.substr(c1 + 1, c2 - c1 - 1),
                                 spec.substr(c2 + 1)};
  for (int i = 0; i < 3; ++i) {
    try {
      std::size_t used = 0;
      parts[i] = std::stod(fields[i], &used);
      if (used != fields[i].size()) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
      throw std::invalid_argument("grid component '" + fields[i] +
                                  "' is not a number in '" + spec + "'");
    }
  }
  return arithmetic_grid(parts[0], parts[1], parts[2]);
}

std::string check_grid_spec(const std::string& spec) {
  try {
    parse_grid_spec(spec);
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

std::vector<std::string> feature_names(int d) {
  std::vector<std::string> names;
  names.reserve(d);
  for (int i = 1; i <= d; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

void write_report(const std::string& path, double anll_value,
                  std::optional<double> mae_value, std::optional<double> auc_value,
                  std::size_t n_test, const json& config) {
  json doc{{"anll", anll_value},
           {"mae", mae_value ? json(*mae_value) : json(nullptr)},
           {"auc", auc_value ? json(*auc_value) : json(nullptr)},
           {"n_test", n_test},
           {"config", config},
           {"format", 1}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << doc.dump(1, '\t') << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<double> model_log_densities(const GbhtModel& model, const Matrix& data) {
  std::vector<double> logs(data.rows());
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    logs[static_cast<std::size_t>(i)] = model.log_density_at(data.row(i).transpose());
  return logs;
}

struct SynthArgs {
  std::string type, out;
  int d = 0;
  long long n = 0;
  std::uint64_t seed = 0;
};

struct FitArgs {
  std::string data, model, mode = "weighted";
  int T = 0;
  double smin = 0.0, smax = 0.0, shrinkage = 1.0, floor = 1e-12;
  std::uint64_t seed = 0;
};

struct CvArgs {
  std::string data, smin_grid, gap_grid, report;
  int T = 0, folds = 3;
  std::uint64_t seed = 0;
};

struct EvalArgs {
  std::string model, test, report, truth_type;
  int truth_d = 0;
};

struct ScoreArgs {
  std::string model, data, labels, out;
  std::optional<double> rho, contamination;
};

struct CurveArgs {
  std::string model, out;
  double lo = 0.0, hi = 0.0;
  int res = 0;
};

int run_synth(const SynthArgs& a) {
  Rng rng(a.seed);
  const SyntheticKind kind{parse_synthetic_type(a.type), a.d};
  Matrix m = sample_synthetic(kind, static_cast<std::size_t>(a.n), rng);
  write_csv(a.out, m, feature_names(a.d));
  std::cout << "wrote " << a.out << ": " << m.rows() << " rows, " << m.cols()
            << " columns (type " << a.type << ")\n";
  return 0;
}

int run_fit(const FitArgs& a) {
  Dataset ds = load_csv(a.data);
  GbhtConfig cfg;
  cfg.iterations = a.T;
  cfg.scale_params.s_min = a.smin;
  cfg.scale_params.s_max = a.smax;
  cfg.learner_mode =
      a.mode == "greedy" ? LearnerMode::kGreedyCell : LearnerMode::kWeightedHistogram;
  cfg.shrinkage = a.shrinkage;
  cfg.density_floor = a.floor;
  cfg.seed = a.seed;
  GbhtModel model = fit_gbht(ds.matrix, cfg);
  save_model(model, a.model);
  std::cout << "train_nll " << fmt(model.train_nll_trace.back()) << "\n";
  return 0;
}

int run_cv(const CvArgs& a, int threads) {
  Dataset ds = load_csv(a.data);
  GbhtConfig cfg;
  cfg.iterations = a.T;
  cfg.seed = a.seed;
  Rng rng(a.seed);
  CvResult result = cross_validate(ds.matrix, cfg, parse_grid_spec(a.smin_grid),
                                   parse_grid_spec(a.gap_grid), a.folds, rng, threads);

  json table = json::array();
  for (const auto& e : result.table)
    table.push_back(json{{"s_min", e.s_min},
                         {"s_max", e.s_max},
                         {"fold_anll", e.fold_anll},
                         {"mean_anll", e.mean_anll}});
  const auto& chosen = result.chosen();
  json doc{{"format", 1},
           {"folds", a.folds},
           {"table", std::move(table)},
           {"chosen", json{{"index", result.chosen_index},
                           {"s_min", chosen.s_min},
                           {"s_max", chosen.s_max},
                           {"mean_anll", chosen.mean_anll}}}};
  std::ofstream out(a.report, std::ios::binary);
  if (!out) throw std::runtime_error(a.report + ": cannot open file for writing");
  out << doc.dump(1, '\t') << '\n';
  if (!out) throw std::runtime_error(a.report + ": write failed");

  std::cout << "chosen_smin " << fmt(chosen.s_min) << "\n";
  std::cout << "chosen_smax " << fmt(chosen.s_max) << "\n";
  std::cout << "cv_anll " << fmt(chosen.mean_anll) << "\n";
  return 0;
}

int run_eval(const EvalArgs& a) {
  GbhtModel model = load_model(a.model);
  Dataset ds = load_csv(a.test);
  if (ds.matrix.cols() != model.dim())
    throw std::runtime_error("test data dimension " + std::to_string(ds.matrix.cols()) +
                             " does not match model dimension " +
                             std::to_string(model.dim()));

  std::vector<double> logs = model_log_densities(model, ds.matrix);
  const double anll_value = anll(logs);
  std::cout << "anll " << fmt(anll_value) << "\n";

  std::optional<double> mae_value;
  if (!a.truth_type.empty()) {
    if (a.truth_d != model.dim())
      throw std::runtime_error("--truth-d does not match the model dimension");
    const SyntheticKind kind{parse_synthetic_type(a.truth_type), a.truth_d};
    std::vector<double> est(ds.matrix.rows()), truth(ds.matrix.rows());
    for (Eigen::Index i = 0; i < ds.matrix.rows(); ++i) {
      const Vector x = ds.matrix.row(i).transpose();
      est[static_cast<std::size_t>(i)] = model.density_at(x);
      truth[static_cast<std::size_t>(i)] = true_pdf(kind, x);
    }
    mae_value = mae(est, truth);
    std::cout << "mae " << fmt(*mae_value) << "\n";
  }

  write_report(a.report, anll_value, mae_value, std::nullopt,
               static_cast<std::size_t>(ds.matrix.rows()),
               json::parse(config_json_string(model.config)));
  return 0;
}

int run_score(const ScoreArgs& a) {
  GbhtModel model = load_model(a.model);
  const std::optional<std::string> label_col =
      a.labels.empty() ? std::nullopt : std::make_optional(a.labels);
  Dataset ds = load_csv(a.data, label_col);
  if (ds.matrix.cols() != model.dim())
    throw std::runtime_error("data dimension does not match the model");

  double rho = 0.0;
  if (a.rho)
    rho = *a.rho;
  else if (a.contamination)
    rho = contamination_threshold(model, ds.matrix, *a.contamination);

  std::vector<double> scores = anomaly_scores(model, ds.matrix);
  std::vector<bool> flags = detect(model, ds.matrix, rho);

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error(a.out + ": cannot open file for writing");
  out << "score,flag\n";
  char buf[40];
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", scores[i]);
    out << buf << ',' << (flags[i] ? 1 : 0) << '\n';
    flagged += flags[i] ? 1 : 0;
  }
  if (!out) throw std::runtime_error(a.out + ": write failed");

  if (ds.labels) {
    std::vector<int> labels = *ds.labels;
    std::cout << "auc " << fmt(auc(scores, labels)) << "\n";
  }
  std::cout << "flagged " << flagged << " of " << scores.size() << " (rho "
            << fmt(rho) << ")\n";
  return 0;
}

int run_curve(const CurveArgs& a) {
  GbhtModel model = load_model(a.model);
  if (model.dim() != 1)
    throw std::runtime_error("curve requires a 1-D model, got dimension " +
                             std::to_string(model.dim()));
  if (!(a.hi > a.lo)) throw std::runtime_error("curve requires --hi > --lo");

  std::ofstream out(a.out, std::ios::binary);
  if (!out) throw std::runtime_error(a.out + ": cannot open file for writing");
  out << "x,density\n";
  char buf[96];
  Vector x(1);
  for (int i = 0; i <= a.res; ++i) {
    x[0] = a.lo + (a.hi - a.lo) * static_cast<double>(i) / static_cast<double>(a.res);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", x[0], model.density_at(x));
    out << buf << '\n';
  }
  if (!out) throw std::runtime_error(a.out + ": write failed");
  std::cout << "wrote " << a.out << ": " << (a.res + 1) << " points\n";
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Boosted histogram-transform density estimation"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = hardware)")
      ->check(CLI::NonNegativeNumber);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Sample a benchmark distribution");
  synth_cmd->fallthrough();
  synth_cmd->add_option("--type", synth.type, "Distribution family")
      ->required()
      ->check(CLI::IsMember({"I", "II", "III", "IV"}));
  synth_cmd->add_option("--d", synth.d, "Dimension")->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--n", synth.n, "Sample count")->required()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out", synth.out, "Output CSV path")->required();
  synth_cmd->add_option("--seed", synth.seed, "RNG seed");

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a boosted density model");
  fit_cmd->fallthrough();
  fit_cmd->add_option("--data", fit.data, "Training CSV")->required();
  fit_cmd->add_option("--T", fit.T, "Boosting rounds")->required()->check(CLI::PositiveNumber);
  fit_cmd->add_option("--smin", fit.smin, "Lower log-scale offset")->required();
  fit_cmd->add_option("--smax", fit.smax, "Upper log-scale offset")->required();
  fit_cmd->add_option("--mode", fit.mode, "Weak learner mode")
      ->check(CLI::IsMember({"weighted", "greedy"}));
  fit_cmd->add_option("--shrinkage", fit.shrinkage, "Step-size multiplier in (0,1]")
      ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));
  fit_cmd->add_option("--floor", fit.floor, "Density floor for log scoring")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--model", fit.model, "Model output path")->required();
  fit_cmd->add_option("--seed", fit.seed, "RNG seed");

  CvArgs cv;
  CLI::App* cv_cmd = app.add_subcommand("cv", "Cross-validate scale ranges");
  cv_cmd->fallthrough();
  cv_cmd->add_option("--data", cv.data, "Training CSV")->required();
  cv_cmd->add_option("--T", cv.T, "Boosting rounds")->required()->check(CLI::PositiveNumber);
  cv_cmd->add_option("--smin-grid", cv.smin_grid, "s_min grid start:step:stop")
      ->required()
      ->check(CLI::Validator(check_grid_spec, "GRID"));
  cv_cmd->add_option("--gap-grid", cv.gap_grid, "(s_max - s_min) grid start:step:stop")
      ->required()
      ->check(CLI::Validator(check_grid_spec, "GRID"));
  cv_cmd->add_option("--folds", cv.folds, "Fold count")->check(CLI::Range(2, 1 << 20));
  cv_cmd->add_option("--report", cv.report, "Report JSON path")->required();
  cv_cmd->add_option("--seed", cv.seed, "RNG seed");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a model on held-out data");
  eval_cmd->fallthrough();
  eval_cmd->add_option("--model", eval.model, "Model JSON path")->required();
  eval_cmd->add_option("--test", eval.test, "Test CSV")->required();
  CLI::Option* tt = eval_cmd->add_option("--truth-type", eval.truth_type,
                                         "Benchmark family for MAE against the exact pdf")
                        ->check(CLI::IsMember({"I", "II", "III", "IV"}));
  CLI::Option* td = eval_cmd->add_option("--truth-d", eval.truth_d, "Benchmark dimension")
                        ->check(CLI::PositiveNumber);
  tt->needs(td);
  td->needs(tt);
  eval_cmd->add_option("--report", eval.report, "Report JSON path")->required();

  ScoreArgs score;
  CLI::App* score_cmd = app.add_subcommand("score", "Export anomaly scores and flags");
  score_cmd->fallthrough();
  score_cmd->add_option("--model", score.model, "Model JSON path")->required();
  score_cmd->add_option("--data", score.data, "Input CSV")->required();
  CLI::Option* rho_opt =
      score_cmd->add_option("--rho", score.rho, "Density threshold")->check(CLI::NonNegativeNumber);
  CLI::Option* cont_opt =
      score_cmd->add_option("--contamination", score.contamination,
                            "Training-quantile threshold in [0,1]")
          ->check(CLI::Range(0.0, 1.0));
  rho_opt->excludes(cont_opt);
  cont_opt->excludes(rho_opt);
  score_cmd->add_option("--labels", score.labels, "Header name of a 0/1 label column");
  score_cmd->add_option("--out", score.out, "Score CSV path")->required();

  CurveArgs curve;
  CLI::App* curve_cmd = app.add_subcommand("curve", "Sample a 1-D density curve");
  curve_cmd->fallthrough();
  curve_cmd->add_option("--model", curve.model, "Model JSON path")->required();
  curve_cmd->add_option("--lo", curve.lo, "Range start")->required();
  curve_cmd->add_option("--hi", curve.hi, "Range end")->required();
  curve_cmd->add_option("--res", curve.res, "Interval count (emits res+1 samples)")
      ->required()
      ->check(CLI::PositiveNumber);
  curve_cmd->add_option("--out", curve.out, "Curve CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(synth_cmd)) return run_synth(synth);
    if (app.got_subcommand(fit_cmd)) return run_fit(fit);
    if (app.got_subcommand(cv_cmd)) return run_cv(cv, threads);
    if (app.got_subcommand(eval_cmd)) return run_eval(eval);
    if (app.got_subcommand(score_cmd)) return run_score(score);
    if (app.got_subcommand(curve_cmd)) return run_curve(curve);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gbht::cli
