#pragma once

#include "stpca/rng.hpp"
#include "stpca/types.hpp"

#include <cstddef>

namespace stpca::noise {

enum class BackendKind { Explicit, GaussianImplicit };

/// How the per-step noise gradient is sampled.
///
/// Explicit streams a fresh i.i.d. tensor W through the contraction without
/// storing it (cost O(N^p) per step) and supports both noise distributions;
/// GaussianImplicit draws the law of the result directly at O(N r^2) per
/// step and is exact for Gaussian W: rows are independent, and within a row
/// Cov(g_ki, g_kj) = p^2 sigma^2 <x_i, x_j>^{p-1} (computed from the actual
/// inner products, so numerical drift of X does not bias the sampler).
struct NoiseBackend {
  BackendKind kind = BackendKind::GaussianImplicit;
  // Refusal budget for the Explicit backend, in tensor entries (N^p).
  std::size_t max_tensor_entries = std::size_t(1) << 26;
};

/// Euclidean gradient of the noise part H at X: column i equals
/// lambda_i * p * (W contracted with x_i^{(x)(p-1)} on the last p-1 indices),
/// with W drawn fresh from the rng stream (online setting, one tensor per
/// step, discarded afterwards).
Matrix sample_euclidean_noise_grad(const Matrix& X, const ModelParams& params,
                                   const NoiseBackend& backend,
                                   CounterRng& rng);

/// Riemannian noise gradient: tangent projection of the Euclidean one.
Matrix riemannian_noise_grad(const Matrix& X, const Matrix& E);

/// Sub-Gaussian scale of <v, (grad_St H)_i> for unit v:
/// (1/2) p sigma sqrt(sum_j lambda_j^2).
double subgaussian_bound(const ModelParams& params);

/// Explicit constant alpha_2 in ||Gram(grad_St L)||_F <= alpha_2 N:
/// 8 p^2 sum_i (lambda_i^2 * 2 K sigma^2 + sum_j lambda_i^2 lambda_j^2),
/// with K the MGF constant (1 covers the Gaussian case).
double gram_bound_constant(const ModelParams& params, double K = 1.0);

}  // namespace stpca::noise
