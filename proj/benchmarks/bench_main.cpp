#include <benchmark/benchmark.h>

#include "gbht/baselines.hpp"
#include "gbht/boosting.hpp"
#include "gbht/synthetic.hpp"

namespace {

using namespace gbht;

Matrix make_data(int d, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  return sample_synthetic({SyntheticType::kTypeI, d}, n, rng);
}

GbhtConfig make_cfg(int iterations) {
  GbhtConfig cfg;
  cfg.iterations = iterations;
  cfg.scale_params.s_min = -1.5;
  cfg.scale_params.s_max = 0.0;
  return cfg;
}

void BM_FitWeakLearner(benchmark::State& state) {
  const Matrix data = make_data(static_cast<int>(state.range(0)), 2000, 7);
  Rng rng(11);
  ScaleParams params{-1.5, 0.0, reference_scale(data)};
  for (auto _ : state) {
    HistogramTransform t = sample_transform(rng, static_cast<int>(data.cols()), params);
    benchmark::DoNotOptimize(fit_ht(data, t));
  }
  state.SetItemsProcessed(state.iterations() * data.rows());
}
BENCHMARK(BM_FitWeakLearner)->Arg(2)->Arg(5);

void BM_FitGbht(benchmark::State& state) {
  const Matrix data = make_data(2, 1000, 7);
  const GbhtConfig cfg = make_cfg(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Rng rng(3);
    benchmark::DoNotOptimize(fit_gbht(data, cfg, rng));
  }
}
BENCHMARK(BM_FitGbht)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_DensityEval(benchmark::State& state) {
  const Matrix data = make_data(2, 1000, 7);
  Rng rng(3);
  const GbhtModel model = fit_gbht(data, make_cfg(static_cast<int>(state.range(0))), rng);
  Rng qrng(5);
  const Matrix queries = sample_synthetic({SyntheticType::kTypeI, 2}, 1000, qrng);
  std::vector<double> row(2), work(2);
  std::vector<std::int64_t> ikey(2);
  for (auto _ : state) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
      row[0] = queries(i, 0);
      row[1] = queries(i, 1);
      acc += model.density_at_unchecked(row.data(), ikey.data(), work.data());
    }
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * queries.rows());
}
BENCHMARK(BM_DensityEval)->Arg(10)->Arg(100);

void BM_KdeEval(benchmark::State& state) {
  const Matrix data = make_data(5, 2000, 7);
  const KdeModel kde = fit_kde(data, Bandwidth::silverman());
  Rng qrng(5);
  const Matrix queries = sample_synthetic({SyntheticType::kTypeI, 5}, 200, qrng);
  for (auto _ : state) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < queries.rows(); ++i)
      acc += kde.value_at(queries.row(i).transpose());
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * queries.rows());
}
BENCHMARK(BM_KdeEval);

}  // namespace

BENCHMARK_MAIN();
