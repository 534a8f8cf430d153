#include "stpca/stiefel.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using stpca::CounterRng;
using stpca::Matrix;
using stpca::NumericError;
using stpca::RngRole;
namespace stiefel = stpca::stiefel;

namespace {

Matrix gaussian_matrix(long rows, long cols, std::uint64_t seed) {
  CounterRng rng(seed, 0, RngRole::Generic);
  Matrix A(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) A(i, j) = rng.normal();
  return A;
}

}  // namespace

TEST_CASE("sample_uniform returns orthonormal frames deterministically") {
  for (std::uint64_t seed : {1ULL, 2ULL, 77ULL}) {
    for (int r : {1, 3}) {
      const Matrix X = stiefel::sample_uniform(40, r, seed);
      CHECK(X.rows() == 40);
      CHECK(X.cols() == r);
      CHECK(stiefel::orthonormality_error(X) < 1e-12);
    }
  }
  const Matrix a = stiefel::sample_uniform(25, 2, 5);
  const Matrix b = stiefel::sample_uniform(25, 2, 5);
  const Matrix c = stiefel::sample_uniform(25, 2, 6);
  CHECK((a - b).norm() == 0.0);
  CHECK((a - c).norm() > 1e-3);
}

TEST_CASE("sample_uniform seed overload matches the StiefelInit stream") {
  CounterRng rng(9, 0, RngRole::StiefelInit);
  const Matrix from_rng = stiefel::sample_uniform(12, 2, rng);
  const Matrix from_seed = stiefel::sample_uniform(12, 2, std::uint64_t{9});
  CHECK((from_rng - from_seed).norm() == 0.0);
}

TEST_CASE("project_tangent is an idempotent projection onto the tangent space") {
  const Matrix X = stiefel::sample_uniform(20, 3, 4);
  const Matrix A = gaussian_matrix(20, 3, 11);
  const Matrix U = stiefel::project_tangent(X, A);

  CHECK(stiefel::tangency_error(X, U) < 1e-12);
  CHECK((stiefel::project_tangent(X, U) - U).norm() < 1e-12);

  const Matrix direct = A - 0.5 * X * (X.transpose() * A + A.transpose() * X);
  CHECK((U - direct).norm() < 1e-14);

  // The projection is orthogonal: the removed part is normal to the
  // tangent space, so <A - U, U> = 0.
  CHECK(std::abs(((A - U).transpose() * U).trace()) < 1e-10);
}

TEST_CASE("polar_retract stays on the manifold and fixes X at U = 0") {
  const Matrix X = stiefel::sample_uniform(30, 3, 8);
  CHECK((stiefel::polar_retract(X, Matrix::Zero(30, 3)) - X).norm() < 1e-13);

  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const Matrix U = gaussian_matrix(30, 3, 100 + seed);
    const Matrix Y = stiefel::polar_retract(X, U);
    CHECK(stiefel::orthonormality_error(Y) < 1e-12);
  }
}

TEST_CASE("polar_retract agrees with X + tU to second order in t") {
  const Matrix X = stiefel::sample_uniform(15, 2, 3);
  const Matrix U = stiefel::project_tangent(X, gaussian_matrix(15, 2, 21));
  auto gap = [&](double t) {
    return (stiefel::polar_retract(X, t * U) - (X + t * U)).norm();
  };
  const double g1 = gap(1e-3);
  const double g2 = gap(5e-4);
  CHECK(g1 < 5e-5);
  // Quartering under halving of t pins the quadratic order.
  CHECK(g1 / g2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("polar_retract handles large steps without losing orthonormality") {
  const Matrix X = stiefel::sample_uniform(10, 2, 14);
  const Matrix U = 50.0 * gaussian_matrix(10, 2, 15);
  const Matrix Y = stiefel::polar_retract(X, U);
  CHECK(stiefel::orthonormality_error(Y) < 1e-11);
}

TEST_CASE("error measures vanish exactly where they should") {
  const Matrix X = stiefel::sample_uniform(18, 3, 2);
  CHECK(stiefel::orthonormality_error(Matrix::Identity(5, 2).eval()) == 0.0);
  const Matrix U = stiefel::project_tangent(X, gaussian_matrix(18, 3, 6));
  CHECK(stiefel::tangency_error(X, U) < 1e-13);
  // X itself is not tangent at X: X^T X + X^T X = 2 I.
  CHECK(stiefel::tangency_error(X, X) == doctest::Approx(2.0 * std::sqrt(3.0))
                                             .epsilon(1e-12));
}

TEST_CASE("inv_sqrt_psd inverts the square root and rejects tiny eigenvalues") {
  const Matrix B = gaussian_matrix(4, 4, 31);
  const Matrix S = B * B.transpose() + 0.5 * Matrix::Identity(4, 4);
  const Matrix R = stiefel::inv_sqrt_psd(S, 1e-14);
  CHECK((R * S * R - Matrix::Identity(4, 4)).norm() < 1e-12);
  CHECK((R - R.transpose()).norm() < 1e-13);

  Matrix singular = Matrix::Zero(3, 3);
  singular(0, 0) = 1.0;
  singular(1, 1) = 1.0;
  CHECK_THROWS_AS(stiefel::inv_sqrt_psd(singular, 1e-14), NumericError);
}

TEST_CASE("polar_retract rejects non-finite input") {
  const Matrix X = stiefel::sample_uniform(8, 2, 1);
  Matrix U = Matrix::Zero(8, 2);
  U(3, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(stiefel::polar_retract(X, U), NumericError);
}

TEST_CASE("shape errors are rejected as configuration problems") {
  using stpca::ConfigError;
  CHECK_THROWS_AS(stiefel::sample_uniform(5, 6, std::uint64_t{1}), ConfigError);
  CHECK_THROWS_AS(stiefel::sample_uniform(5, 0, std::uint64_t{1}), ConfigError);
  const Matrix X = stiefel::sample_uniform(8, 2, 1);
  CHECK_THROWS_AS(stiefel::project_tangent(X, Matrix::Zero(8, 3)), ConfigError);
  CHECK_THROWS_AS(stiefel::polar_retract(X, Matrix::Zero(7, 2)), ConfigError);
}
