#pragma once

#include "stpca/noise.hpp"
#include "stpca/rng.hpp"
#include "stpca/trajectory.hpp"
#include "stpca/types.hpp"

#include <cstdint>

namespace stpca::sgd {

struct SGDConfig {
  // Step-size parameter; the manifold update uses delta / N.
  double delta = 0.1;
  // Number of online steps (one fresh observation per step).
  long M = 1000;
  noise::NoiseBackend backend;
  // Steps between trajectory snapshots (snapshot at step 0 always).
  long record_stride = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class StepSizeRegime { p3, p2_separated, p2_equal };

/// One online step: Euclidean gradient of the per-observation loss at X
/// (noise part sampled from the backend, signal part in closed form from
/// the r x r correlations), tangent projection, polar retraction of
/// -(delta/N) times the Riemannian gradient.
Matrix sgd_step(const Matrix& X, const Matrix& V, const ModelParams& params,
                const SGDConfig& config, CounterRng& rng);

/// Runs config.M steps from X0, recording correlations (and eigenvalues of
/// M M^T) at step 0 and every record_stride steps. Noise at step l is drawn
/// from the (config.seed, l) counter stream, so trajectories are
/// reproducible and restartable. Non-finite iterates abort with the failing
/// step index.
Trajectory run(const ModelParams& params, const Matrix& V, const Matrix& X0,
               const SGDConfig& config);

/// Zero-noise (sigma = 0) dynamics propagated directly in correlation
/// space: with E = V S the signal gradient, both the tangent step and the
/// polar retraction close over M = V^T X, giving an exact N-free recursion
///   M' = (M - (delta/N)(S - M sym)) (I + (delta/N)^2 B)^{-1/2},
/// sym = (M^T S + S^T M)/2, B = S^T S - S^T M sym - sym M^T S + sym^2.
/// Cost is O(r^3) per step at any N.
Trajectory run_zero_noise_implicit(const Matrix& M0, const ModelParams& params,
                                   const SGDConfig& config);

/// Step-size prescriptions from the recovery guarantees, with user-supplied
/// leading constant C_delta and initial-data scale d0:
///   p3:           C d0 N^{-(p-3)/2} / log N          (p >= 3)
///   p2_separated: C d0 N^{(1/2)((1-c0)/(1+c0))(lambda_r^2/lambda_1^2)}
///                   / log(2 eps sqrt(N) / gamma2)    (p = 2, distinct SNRs)
///   p2_equal:     C d0 sqrt(N) / (log N)^2           (p = 2, equal SNRs)
double prescribed_step_size(StepSizeRegime regime, const ModelParams& params,
                            double d0, double C_delta, double gamma2 = 0.0,
                            double eps = 0.0, double c0 = 0.0);

}  // namespace stpca::sgd
