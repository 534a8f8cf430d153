#pragma once

#include "stpca/rng.hpp"
#include "stpca/types.hpp"

#include <cstddef>
#include <vector>

namespace stpca::model {

enum class GroundTruthMode { Canonical, Haar };

/// Ground-truth spikes as the columns of an N x r frame V with V^T V = I.
/// Canonical mode returns the first r standard basis vectors, so the
/// correlations m_ij = <v_i, x_j> are just the first r rows of X; haar mode
/// orthonormalizes an N x r Gaussian matrix (used to confirm rotation
/// invariance of statistics).
Matrix make_ground_truth(const ModelParams& params, GroundTruthMode mode,
                         std::uint64_t seed);

/// Correlation matrix M = V^T X, the r x r summary statistic.
Matrix correlations(const Matrix& V, const Matrix& X);

/// Population loss Phi(X) = -sqrt(N) sum_{i,j} lambda_i lambda_j m_ij^p,
/// evaluated from the correlation matrix.
double population_loss(const Matrix& M, const ModelParams& params);
double population_loss(const Matrix& X, const Matrix& V,
                       const ModelParams& params);

/// Coefficient matrix S of the Euclidean population gradient in spike
/// coordinates: grad Phi(X) = V * S with
/// S_kj = -p sqrt(N) lambda_k lambda_j m_kj^{p-1}.
/// Working with S keeps the per-step cost at O(N r + r^3).
Matrix population_grad_coeff(const Matrix& M, const ModelParams& params);

/// Euclidean gradient of Phi as a dense N x r matrix, V * S above.
Matrix population_grad(const Matrix& V, const Matrix& M,
                       const ModelParams& params);

/// Dense order-p noise tensor with all N^p entries materialized, flat
/// row-major (last index fastest). Only for small instances; construction
/// refuses when N^p exceeds max_entries rather than thrashing.
struct DenseTensor {
  int p = 2;
  long N = 0;
  std::vector<double> w;  // size N^p

  double operator()(const std::vector<long>& idx) const;
};

/// Number of entries N^p, or throws ConfigError when it exceeds max_entries.
std::size_t tensor_entry_count(int p, long N, std::size_t max_entries);

/// Fresh i.i.d. noise tensor with entries sigma * g, g standard Gaussian or
/// Rademacher. Entries are drawn in flat row-major order, the same order
/// the streaming Explicit backend consumes, so the two agree draw-for-draw
/// on a shared stream.
DenseTensor sample_noise_tensor(const ModelParams& params, CounterRng& rng,
                                std::size_t max_entries);

/// Noise part of the loss, H(X) = sum_i lambda_i <W, x_i^{(x)p}>, by direct
/// contraction of the materialized tensor.
double noise_loss(const Matrix& X, const DenseTensor& W,
                  const ModelParams& params);

}  // namespace stpca::model
