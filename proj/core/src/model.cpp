#include "stpca/model.hpp"

#include "stpca/stiefel.hpp"

#include <cmath>

namespace stpca::model {

Matrix make_ground_truth(const ModelParams& params, GroundTruthMode mode,
                         std::uint64_t seed) {
  params.validate();
  if (mode == GroundTruthMode::Canonical) {
    Matrix V = Matrix::Zero(params.N, params.r);
    for (int i = 0; i < params.r; ++i) V(i, i) = 1.0;
    return V;
  }
  CounterRng rng(seed, 0, RngRole::GroundTruth);
  return stiefel::sample_uniform(params.N, params.r, rng);
}

Matrix correlations(const Matrix& V, const Matrix& X) {
  if (V.rows() != X.rows())
    throw ConfigError("correlations: V and X must share the ambient dimension");
  return V.transpose() * X;
}

double population_loss(const Matrix& M, const ModelParams& params) {
  const int r = params.r;
  double acc = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      acc += params.lambda(i) * params.lambda(j) *
             std::pow(M(i, j), params.p);
  return -std::sqrt(static_cast<double>(params.N)) * acc;
}

double population_loss(const Matrix& X, const Matrix& V,
                       const ModelParams& params) {
  return population_loss(correlations(V, X), params);
}

Matrix population_grad_coeff(const Matrix& M, const ModelParams& params) {
  const int r = params.r;
  const double scale =
      -static_cast<double>(params.p) * std::sqrt(static_cast<double>(params.N));
  Matrix S(r, r);
  for (int k = 0; k < r; ++k)
    for (int j = 0; j < r; ++j)
      S(k, j) = scale * params.lambda(k) * params.lambda(j) *
                std::pow(M(k, j), params.p - 1);
  return S;
}

Matrix population_grad(const Matrix& V, const Matrix& M,
                       const ModelParams& params) {
  return V * population_grad_coeff(M, params);
}

double DenseTensor::operator()(const std::vector<long>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < p; ++a) flat = flat * static_cast<std::size_t>(N) +
                                     static_cast<std::size_t>(idx[a]);
  return w[flat];
}

std::size_t tensor_entry_count(int p, long N, std::size_t max_entries) {
  std::size_t count = 1;
  for (int a = 0; a < p; ++a) {
    if (count > max_entries / static_cast<std::size_t>(N))
      throw ConfigError("explicit noise tensor exceeds the memory budget (N^p = " +
                        std::to_string(N) + "^" + std::to_string(p) + ")");
    count *= static_cast<std::size_t>(N);
  }
  if (count > max_entries)
    throw ConfigError("explicit noise tensor exceeds the memory budget");
  return count;
}

DenseTensor sample_noise_tensor(const ModelParams& params, CounterRng& rng,
                                std::size_t max_entries) {
  const std::size_t count =
      tensor_entry_count(params.p, params.N, max_entries);
  DenseTensor W;
  W.p = params.p;
  W.N = params.N;
  W.w.resize(count);
  if (params.noise_dist == NoiseDist::Gaussian) {
    for (std::size_t t = 0; t < count; ++t) W.w[t] = params.sigma * rng.normal();
  } else {
    for (std::size_t t = 0; t < count; ++t)
      W.w[t] = params.sigma * rng.rademacher();
  }
  return W;
}

double noise_loss(const Matrix& X, const DenseTensor& W,
                  const ModelParams& params) {
  if (W.N != params.N || W.p != params.p)
    throw ConfigError("noise_loss: tensor shape does not match params");
  const long N = params.N;
  double total = 0.0;
  std::vector<double> cur, next;
  for (int i = 0; i < params.r; ++i) {
    // Repeatedly contract the last (fastest-varying) index with x_i:
    // N^p -> N^{p-1} -> ... -> scalar.
    cur = W.w;
    std::size_t size = cur.size();
    for (int step = 0; step < params.p; ++step) {
      size /= static_cast<std::size_t>(N);
      next.assign(size, 0.0);
      for (std::size_t b = 0; b < size; ++b) {
        double acc = 0.0;
        const double* block = cur.data() + b * static_cast<std::size_t>(N);
        for (long k = 0; k < N; ++k) acc += block[k] * X(k, i);
        next[b] = acc;
      }
      cur.swap(next);
    }
    total += params.lambda(i) * cur[0];
  }
  return total;
}

}  // namespace stpca::model
