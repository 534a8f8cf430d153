#include "stpca/stiefel.hpp"

#include <cmath>

namespace stpca::stiefel {

Matrix inv_sqrt_psd(const Matrix& S, double min_eig) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success)
    throw NumericError("eigensolve failed in inv_sqrt_psd");
  const Vector& ev = es.eigenvalues();
  if (ev.minCoeff() < min_eig)
    throw NumericError("matrix not safely positive definite in inv_sqrt_psd");
  Vector inv_sqrt = ev.array().rsqrt();
  return es.eigenvectors() * inv_sqrt.asDiagonal() *
         es.eigenvectors().transpose();
}

namespace {

Matrix orthonormalize(long N, int r, CounterRng& rng, bool allow_retry) {
  Matrix Z(N, r);
  for (long k = 0; k < N; ++k)
    for (int i = 0; i < r; ++i) Z(k, i) = rng.normal();
  const Matrix G = Z.transpose() * Z;
  // Z^T Z concentrates around N * I; anything this small means a degenerate
  // draw, which has probability zero but deserves one retry.
  const double floor = 1e-12 * static_cast<double>(N > 0 ? N : 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() < floor) {
    if (allow_retry) return orthonormalize(N, r, rng, false);
    throw NumericError("degenerate Gaussian frame in sample_uniform");
  }
  Vector inv_sqrt = es.eigenvalues().array().rsqrt();
  return Z * (es.eigenvectors() * inv_sqrt.asDiagonal() *
              es.eigenvectors().transpose());
}

}  // namespace

Matrix sample_uniform(long N, int r, CounterRng& rng) {
  if (r < 1 || r > N) throw ConfigError("sample_uniform requires 1 <= r <= N");
  return orthonormalize(N, r, rng, true);
}

Matrix sample_uniform(long N, int r, std::uint64_t seed) {
  CounterRng rng(seed, 0, RngRole::StiefelInit);
  return sample_uniform(N, r, rng);
}

Matrix project_tangent(const Matrix& X, const Matrix& A) {
  if (X.rows() != A.rows() || X.cols() != A.cols())
    throw ConfigError("project_tangent shape mismatch");
  const Matrix XtA = X.transpose() * A;
  return A - 0.5 * X * (XtA + XtA.transpose());
}

Matrix polar_retract(const Matrix& X, const Matrix& U) {
  if (X.rows() != U.rows() || X.cols() != U.cols())
    throw ConfigError("polar_retract shape mismatch");
  if (!U.allFinite())
    throw NumericError("non-finite update in polar_retract");
  const Matrix Y = X + U;
  // For tangent U this Gram matrix equals I + U^T U; computing it from Y
  // keeps the result orthonormal for arbitrary updates as well.
  const Matrix S = Y.transpose() * Y;
  return Y * inv_sqrt_psd(S, 1e-14);
}

double orthonormality_error(const Matrix& X) {
  const int r = static_cast<int>(X.cols());
  return (X.transpose() * X - Matrix::Identity(r, r)).norm();
}

double tangency_error(const Matrix& X, const Matrix& U) {
  const Matrix XtU = X.transpose() * U;
  return (XtU + XtU.transpose()).norm();
}

}  // namespace stpca::stiefel
