#include "stpca/model.hpp"
#include "stpca/noise.hpp"
#include "stpca/rng.hpp"
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

void BM_noise_implicit(benchmark::State& state) {
  const auto params = make_params(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)),
                                  state.range(2));
  const Matrix X = stiefel::sample_uniform(params.N, params.r, 4);
  noise::NoiseBackend backend;
  backend.kind = noise::BackendKind::GaussianImplicit;
  std::uint64_t step = 0;
  for (auto _ : state) {
    CounterRng rng(5, ++step, RngRole::NoiseStep);
    Matrix G = noise::sample_euclidean_noise_grad(X, params, backend, rng);
    benchmark::DoNotOptimize(G.data());
  }
}
BENCHMARK(BM_noise_implicit)->Args({3, 3, 500})->Args({2, 3, 5000});

void BM_noise_explicit(benchmark::State& state) {
  const auto params = make_params(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)),
                                  state.range(2));
  const Matrix X = stiefel::sample_uniform(params.N, params.r, 6);
  noise::NoiseBackend backend;
  backend.kind = noise::BackendKind::Explicit;
  std::uint64_t step = 0;
  for (auto _ : state) {
    CounterRng rng(7, ++step, RngRole::NoiseStep);
    Matrix G = noise::sample_euclidean_noise_grad(X, params, backend, rng);
    benchmark::DoNotOptimize(G.data());
  }
}
BENCHMARK(BM_noise_explicit)->Args({3, 2, 20})->Args({2, 2, 200});

void BM_philox_normals(benchmark::State& state) {
  CounterRng rng(9, 0, RngRole::Generic);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.normal());
  }
}
BENCHMARK(BM_philox_normals);

}  // namespace

BENCHMARK_MAIN();
