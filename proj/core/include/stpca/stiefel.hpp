#pragma once

#include "stpca/rng.hpp"
#include "stpca/types.hpp"

namespace stpca::stiefel {

/// Uniform draw from St(N, r): X = Z (Z^T Z)^{-1/2} with Z i.i.d. standard
/// normal. Deterministic given the rng stream. If Z^T Z is numerically
/// singular (probability zero), resamples once and then fails.
Matrix sample_uniform(long N, int r, CounterRng& rng);

/// Convenience overload using the (seed, step=0, StiefelInit) stream.
Matrix sample_uniform(long N, int r, std::uint64_t seed);

/// Orthogonal projection of A onto the tangent space at X:
/// A - (1/2) X (X^T A + A^T X). For a Euclidean gradient this is the
/// Riemannian gradient.
Matrix project_tangent(const Matrix& X, const Matrix& A);

/// Polar retraction (X + U)((X + U)^T (X + U))^{-1/2}. U need not be
/// tangent; for tangent U the Gram factor reduces to I + U^T U. The r x r
/// inverse square root goes through a symmetric eigensolve; a near rank
/// collapse of X + U (Gram eigenvalues below 1e-14) fails loudly rather
/// than being clamped.
Matrix polar_retract(const Matrix& X, const Matrix& U);

/// ||X^T X - I||_F, the orthonormality defect.
double orthonormality_error(const Matrix& X);

/// ||X^T U + U^T X||_F, the tangency defect of U at X.
double tangency_error(const Matrix& X, const Matrix& U);

/// Symmetric inverse square root of a PSD matrix via eigendecomposition.
/// Throws NumericError if an eigenvalue falls below min_eig.
Matrix inv_sqrt_psd(const Matrix& S, double min_eig);

}  // namespace stpca::stiefel
