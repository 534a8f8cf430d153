#include "stpca/noise.hpp"

#include "stpca/model.hpp"
#include "stpca/stiefel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace stpca::noise {

namespace {

// Streams W entry by entry in flat row-major order (first index slowest)
// and accumulates, per column i of the output, the contraction of W with
// x_i^{(x)(p-1)} over the last p-1 indices.  Identical draw order to
// model::sample_noise_tensor, so the two agree draw for draw.
Matrix explicit_grad(const Matrix& X, const ModelParams& params,
                     const NoiseBackend& backend, CounterRng& rng) {
  const long N = X.rows();
  const int r = static_cast<int>(X.cols());
  const int p = params.p;
  model::tensor_entry_count(p, N, backend.max_tensor_entries);

  // G(k, i) accumulates sum over the trailing p-1 indices; the contraction
  // is built bottom-up: after processing one trailing slice of size N we
  // multiply by the x-coordinate of the next-slower index.
  Matrix G = Matrix::Zero(N, r);
  std::vector<long> idx(static_cast<std::size_t>(p - 1), 0);
  // prod(level, i) = product of X(idx[0..level], i) for the fixed prefix.
  Matrix prod = Matrix::Ones(p - 1, r);
  const bool gaussian = params.noise_dist == NoiseDist::Gaussian;
  const double sigma = params.sigma;

  auto recompute_prod = [&](int from) {
    for (int level = from; level < p - 1; ++level) {
      for (int i = 0; i < r; ++i) {
        const double up = level == 0 ? 1.0 : prod(level - 1, i);
        prod(level, i) = up * X(idx[static_cast<std::size_t>(level)], i);
      }
    }
  };

  for (long k = 0; k < N; ++k) {
    std::fill(idx.begin(), idx.end(), 0);
    recompute_prod(0);
    while (true) {
      const double w = gaussian ? sigma * rng.normal()
                                : sigma * static_cast<double>(rng.rademacher());
      for (int i = 0; i < r; ++i) G(k, i) += w * prod(p - 2, i);
      // Advance the odometer over the trailing p-1 indices.
      int level = p - 2;
      while (level >= 0) {
        std::size_t l = static_cast<std::size_t>(level);
        if (++idx[l] < N) break;
        idx[l] = 0;
        --level;
      }
      if (level < 0) break;
      recompute_prod(level);
    }
  }

  for (int i = 0; i < r; ++i) G.col(i) *= params.lambda(i) * p;
  return G;
}

// Direct sampler of the Gaussian law: each row of the output is an
// independent Gaussian vector with covariance
//   Sigma_ij = p^2 sigma^2 <x_i, x_j>^{p-1},
// a Schur power of the (PSD) Gram matrix, hence PSD itself.
Matrix implicit_grad(const Matrix& X, const ModelParams& params,
                     CounterRng& rng) {
  const long N = X.rows();
  const int r = static_cast<int>(X.cols());
  const int p = params.p;

  Matrix gram = X.transpose() * X;
  Matrix sigma_mat(r, r);
  const double scale = params.sigma * p;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      sigma_mat(i, j) =
          scale * scale * std::pow(gram(i, j), p - 1);

  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma_mat);
  if (es.info() != Eigen::Success)
    throw NumericError("noise covariance eigensolve failed");
  Vector evals = es.eigenvalues().cwiseMax(0.0);
  Matrix sqrt_sigma = es.eigenvectors() *
                      evals.cwiseSqrt().asDiagonal() *
                      es.eigenvectors().transpose();

  Matrix Z(N, r);
  for (long k = 0; k < N; ++k)
    for (int i = 0; i < r; ++i) Z(k, i) = rng.normal();

  Matrix G = Z * sqrt_sigma;
  for (int i = 0; i < r; ++i) G.col(i) *= params.lambda(i);
  return G;
}

}  // namespace

Matrix sample_euclidean_noise_grad(const Matrix& X, const ModelParams& params,
                                   const NoiseBackend& backend,
                                   CounterRng& rng) {
  if (X.cols() != params.r)
    throw ConfigError("X has " + std::to_string(X.cols()) +
                      " columns, expected r = " + std::to_string(params.r));
  switch (backend.kind) {
    case BackendKind::Explicit:
      return explicit_grad(X, params, backend, rng);
    case BackendKind::GaussianImplicit:
      if (params.noise_dist != NoiseDist::Gaussian)
        throw ConfigError(
            "GaussianImplicit backend requires Gaussian noise entries");
      return implicit_grad(X, params, rng);
  }
  throw ConfigError("unknown noise backend");
}

Matrix riemannian_noise_grad(const Matrix& X, const Matrix& E) {
  return stiefel::project_tangent(X, E);
}

double subgaussian_bound(const ModelParams& params) {
  return 0.5 * params.p * params.sigma *
         std::sqrt(params.lambdas.squaredNorm());
}

double gram_bound_constant(const ModelParams& params, double K) {
  const double p2 = static_cast<double>(params.p) * params.p;
  double total = 0.0;
  for (int i = 0; i < params.r; ++i) {
    const double li2 = params.lambda(i) * params.lambda(i);
    double inner = li2 * 2.0 * K * params.sigma * params.sigma;
    for (int j = 0; j < params.r; ++j)
      inner += li2 * params.lambda(j) * params.lambda(j);
    total += inner;
  }
  return 8.0 * p2 * total;
}

}  // namespace stpca::noise
