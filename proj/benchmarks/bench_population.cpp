#include "stpca/population.hpp"
#include "stpca/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace stpca;

ModelParams make_params(int p, int r) {
  ModelParams params;
  params.p = p;
  params.r = r;
  params.N = 1000000;
  params.lambdas = Vector::LinSpaced(r, static_cast<double>(r), 1.0);
  params.sigma = 1.0;
  return params;
}

Matrix small_start(int r, std::uint64_t seed) {
  CounterRng rng(seed, 0, RngRole::Generic);
  Matrix M(r, r);
  for (long i = 0; i < M.size(); ++i)
    M.data()[i] = 1e-3 * (0.5 + rng.uniform01());
  return M;
}

void BM_population_drift(benchmark::State& state) {
  const auto params = make_params(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)));
  const Matrix M = small_start(params.r, 11);
  for (auto _ : state) {
    Matrix D = population::drift(M, params);
    benchmark::DoNotOptimize(D.data());
  }
}
BENCHMARK(BM_population_drift)->Args({3, 2})->Args({3, 8})->Args({2, 4});

void BM_population_rk4(benchmark::State& state) {
  const auto params = make_params(3, static_cast<int>(state.range(0)));
  const Matrix M0 = small_start(params.r, 12);
  const long n_steps = 1000;
  for (auto _ : state) {
    const auto states = population::integrate(
        M0, params, 1e-3, n_steps, population::Method::Rk4, n_steps);
    benchmark::DoNotOptimize(states.back().M.data());
  }
  state.SetItemsProcessed(state.iterations() * n_steps);
}
BENCHMARK(BM_population_rk4)->Arg(2)->Arg(4);

void BM_riccati_rk4(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  Matrix G0 = Matrix::Zero(r, r);
  for (int i = 0; i < r; ++i) G0(i, i) = 1e-3 * (i + 1);
  const long n_steps = 1000;
  for (auto _ : state) {
    const auto states = population::integrate_riccati(
        G0, 1.0, 1e-3, n_steps, population::Method::Rk4, n_steps);
    benchmark::DoNotOptimize(states.back().M.data());
  }
  state.SetItemsProcessed(state.iterations() * n_steps);
}
BENCHMARK(BM_riccati_rk4)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
