#include "stpca/model.hpp"
#include "stpca/rng.hpp"
#include "stpca/sgd.hpp"
#include "stpca/stiefel.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace stpca;

ModelParams make_params(int p, int r, long N) {
  ModelParams params;
  params.p = p;
  params.r = r;
  params.N = N;
  params.lambdas = Vector::LinSpaced(r, static_cast<double>(r), 1.0);
  params.sigma = 1.0;
  return params;
}

void BM_sgd_step(benchmark::State& state) {
  const auto params = make_params(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)),
                                  state.range(2));
  const Matrix V =
      model::make_ground_truth(params, model::GroundTruthMode::Canonical, 0);
  Matrix X = stiefel::sample_uniform(params.N, params.r, 1);
  sgd::SGDConfig config;
  config.delta = 0.1;
  std::uint64_t step = 0;
  for (auto _ : state) {
    CounterRng rng(1, ++step, RngRole::NoiseStep);
    X = sgd::sgd_step(X, V, params, config, rng);
    benchmark::DoNotOptimize(X.data());
  }
}
BENCHMARK(BM_sgd_step)
    ->Args({3, 3, 500})
    ->Args({2, 3, 500})
    ->Args({3, 2, 2000});

void BM_zero_noise_implicit_run(benchmark::State& state) {
  auto params = make_params(3, 2, 10000);
  params.sigma = 0.0;
  const Matrix M0 = Matrix::Constant(2, 2, 0.01);
  sgd::SGDConfig config;
  config.delta = 0.5;
  config.M = state.range(0);
  config.record_stride = config.M;
  for (auto _ : state) {
    const auto traj = sgd::run_zero_noise_implicit(M0, params, config);
    benchmark::DoNotOptimize(traj.final_M.data());
  }
  state.SetItemsProcessed(state.iterations() * config.M);
}
BENCHMARK(BM_zero_noise_implicit_run)->Arg(1000);

void BM_polar_retract(benchmark::State& state) {
  const long N = state.range(0);
  const int r = 3;
  const Matrix X = stiefel::sample_uniform(N, r, 2);
  Matrix A(N, r);
  CounterRng rng(3, 0, RngRole::Generic);
  for (long i = 0; i < A.size(); ++i) A.data()[i] = 0.01 * rng.normal();
  const Matrix U = stiefel::project_tangent(X, A);
  for (auto _ : state) {
    Matrix Y = stiefel::polar_retract(X, U);
    benchmark::DoNotOptimize(Y.data());
  }
}
BENCHMARK(BM_polar_retract)->Arg(500)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
