#pragma once

#include "stpca/types.hpp"

#include <vector>

namespace stpca::population {

struct PopulationState {
  double tau = 0.0;
  Matrix M;
};

enum class Method { Euler, Rk4 };

/// Closed-form drift of the correlation matrix under the effective
/// (noise-averaged) dynamics, per unit population time:
///   dm_ij/dtau = p lambda_i lambda_j m_ij^{p-1}
///     - (p/2) sum_{k,l} lambda_k m_il m_kj m_kl
///                       (lambda_j m_kj^{p-2} + lambda_l m_kl^{p-2}).
/// Vectorized as p L P L - (p/2)(M M^T L P L + M L P^T L M) with
/// P = M^{o(p-1)} entrywise and L = diag(lambda).
Matrix drift(const Matrix& M, const ModelParams& params);

/// Fixed-step integration of the drift from M0. States are recorded at
/// step 0 and every record_stride steps. One SGD step at step size delta
/// corresponds to dtau = delta / sqrt(N), so Euler at that dtau matches the
/// SGD discretization exactly.
std::vector<PopulationState> integrate(const Matrix& M0,
                                       const ModelParams& params, double dtau,
                                       long n_steps, Method method,
                                       long record_stride = 1);

/// Default integration step, min(1e-2, 0.1 / (p lambda_1^2)).
double default_dtau(const ModelParams& params);

/// Drift of the Gram matrix G = M M^T in the equal-SNR p = 2 regime:
/// lambda^2 sym(G (I - G)). Throws if G is asymmetric beyond 1e-9.
Matrix riccati_drift(const Matrix& G, double lambda);

/// Fixed-step integration of riccati_drift from a PSD G0.
std::vector<PopulationState> integrate_riccati(const Matrix& G0, double lambda,
                                               double dtau, long n_steps,
                                               Method method,
                                               long record_stride = 1);

/// Closed-form scalar solution of theta' = lambda^2 theta (1 - theta):
/// the eigenvalue flow of the Riccati dynamics along each eigenvector.
double logistic_theta(double theta0, double lambda, double tau);

/// First-passage predictor for correlation (i,j) growing from
/// gamma/sqrt(N) to eps, by branch:
///   p >= 3: (1 - (gamma/(eps sqrt(N)))^{p-2})
///           / ((p-2) delta lambda_i lambda_j p gamma^{p-2}) * N^{(p-2)/2}
///   p = 2:  log(eps sqrt(N)/gamma) / (2 delta lambda_i lambda_j) * sqrt(N)
/// The p = 2 value is the online step count; the p >= 3 value keeps the
/// N^{(p-2)/2} normalization, i.e. the population time of the crossing
/// divided by delta (multiply by sqrt(N) for steps). Saturation of the
/// drift near |m| = 1 is deliberately neglected.
double predicted_hitting_time(double gamma_ij, double lambda_i,
                              double lambda_j, int p, double delta, double N,
                              double eps);

}  // namespace stpca::population
