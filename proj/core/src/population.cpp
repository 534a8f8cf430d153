#include "stpca/population.hpp"

#include <cmath>
#include <string>

namespace stpca::population {

namespace {

// Drift evaluation with reusable buffers; the integrator calls this millions
// of times on small matrices, so per-call allocations dominate otherwise.
struct DriftWorkspace {
  Matrix snr_outer;  // lambda_i lambda_j
  Matrix P, LPL, G, T;

  explicit DriftWorkspace(const ModelParams& params) {
    snr_outer = params.lambdas * params.lambdas.transpose();
  }

  void eval(const Matrix& M, int p, Matrix& out) {
    P = M;
    for (int k = 2; k < p; ++k) P = P.cwiseProduct(M);
    LPL = P.cwiseProduct(snr_outer);
    G.noalias() = M.lazyProduct(M.transpose());
    T.noalias() = G.lazyProduct(LPL);
    G.noalias() = M.lazyProduct(LPL.transpose());
    T.noalias() += G.lazyProduct(M);
    const double pd = static_cast<double>(p);
    out = pd * LPL - 0.5 * pd * T;
  }
};

template <typename MatT, typename DriftInto>
std::vector<PopulationState> integrate_flow(const MatT& Y0, double dtau,
                                            long n_steps, Method method,
                                            long record_stride, DriftInto f) {
  if (dtau <= 0) throw ConfigError("dtau must be positive");
  if (n_steps < 0) throw ConfigError("n_steps must be non-negative");
  if (record_stride < 1) throw ConfigError("record_stride must be >= 1");

  std::vector<PopulationState> states;
  states.reserve(static_cast<std::size_t>(n_steps / record_stride) + 2);
  MatT Y = Y0;
  states.push_back({0.0, Matrix(Y)});

  MatT k1, k2, k3, k4, stage;
  k1.resizeLike(Y);
  k2.resizeLike(Y);
  k3.resizeLike(Y);
  k4.resizeLike(Y);
  stage.resizeLike(Y);

  for (long l = 1; l <= n_steps; ++l) {
    if (method == Method::Euler) {
      f(Y, k1);
      Y += dtau * k1;
    } else {
      f(Y, k1);
      stage = Y + (0.5 * dtau) * k1;
      f(stage, k2);
      stage = Y + (0.5 * dtau) * k2;
      f(stage, k3);
      stage = Y + dtau * k3;
      f(stage, k4);
      Y += (dtau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!Y.allFinite()) throw NumericError("non-finite state", l);
    if (l % record_stride == 0)
      states.push_back({static_cast<double>(l) * dtau, Matrix(Y)});
  }
  return states;
}

// Compile-time-sized state for the small ranks the presets use; the dynamic
// fallback covers everything else.
template <int R>
std::vector<PopulationState> integrate_fixed(const Matrix& M0,
                                             const ModelParams& params,
                                             double dtau, long n_steps,
                                             Method method,
                                             long record_stride) {
  using Mat = Eigen::Matrix<double, R, R>;
  const Mat snr_outer = params.lambdas * params.lambdas.transpose();
  const int p = params.p;
  const double pd = static_cast<double>(p);
  const Mat start = M0;
  return integrate_flow(
      start, dtau, n_steps, method, record_stride,
      [snr_outer, p, pd](const Mat& M, Mat& out) {
        Mat P = M;
        for (int k = 2; k < p; ++k) P = P.cwiseProduct(M);
        const Mat LPL = P.cwiseProduct(snr_outer);
        const Mat T = (M * M.transpose()) * LPL + (M * LPL.transpose()) * M;
        out = pd * LPL - 0.5 * pd * T;
      });
}

}  // namespace

Matrix drift(const Matrix& M, const ModelParams& params) {
  if (M.rows() != params.r || M.cols() != params.r)
    throw ConfigError("correlation matrix must be r x r");
  DriftWorkspace ws(params);
  Matrix out;
  ws.eval(M, params.p, out);
  return out;
}

std::vector<PopulationState> integrate(const Matrix& M0,
                                       const ModelParams& params, double dtau,
                                       long n_steps, Method method,
                                       long record_stride) {
  params.validate();
  if (M0.rows() != params.r || M0.cols() != params.r)
    throw ConfigError("correlation matrix must be r x r");
  switch (params.r) {
    case 1: return integrate_fixed<1>(M0, params, dtau, n_steps, method,
                                      record_stride);
    case 2: return integrate_fixed<2>(M0, params, dtau, n_steps, method,
                                      record_stride);
    case 3: return integrate_fixed<3>(M0, params, dtau, n_steps, method,
                                      record_stride);
    case 4: return integrate_fixed<4>(M0, params, dtau, n_steps, method,
                                      record_stride);
    default: break;
  }
  DriftWorkspace ws(params);
  return integrate_flow(M0, dtau, n_steps, method, record_stride,
                        [&ws, p = params.p](const Matrix& M, Matrix& out) {
                          ws.eval(M, p, out);
                        });
}

double default_dtau(const ModelParams& params) {
  const double l1 = params.lambda(0);
  return std::min(1e-2, 0.1 / (params.p * l1 * l1));
}

Matrix riccati_drift(const Matrix& G, double lambda) {
  if (G.rows() != G.cols()) throw ConfigError("G must be square");
  if ((G - G.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw ConfigError("G must be symmetric");
  const Matrix I = Matrix::Identity(G.rows(), G.cols());
  Matrix A = G * (I - G);
  return lambda * lambda * 0.5 * (A + A.transpose());
}

std::vector<PopulationState> integrate_riccati(const Matrix& G0, double lambda,
                                               double dtau, long n_steps,
                                               Method method,
                                               long record_stride) {
  return integrate_flow(G0, dtau, n_steps, method, record_stride,
                        [lambda](const Matrix& G, Matrix& out) {
                          out = riccati_drift(G, lambda);
                        });
}

double logistic_theta(double theta0, double lambda, double tau) {
  // theta(tau) = theta0 e^{lambda^2 tau} / (1 - theta0 + theta0 e^{...}),
  // evaluated through the logit for stability at large tau.
  if (theta0 <= 0) return 0.0;
  if (theta0 >= 1) return 1.0;
  const double s = std::log(theta0 / (1.0 - theta0)) + lambda * lambda * tau;
  if (s > 0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double predicted_hitting_time(double gamma_ij, double lambda_i,
                              double lambda_j, int p, double delta, double N,
                              double eps) {
  if (p < 2) throw ConfigError("hitting-time predictor requires p >= 2");
  if (gamma_ij <= 0) throw ConfigError("gamma must be positive");
  if (eps <= 0 || eps > 1) throw ConfigError("eps must lie in (0,1]");
  if (delta <= 0) throw ConfigError("delta must be positive");
  const double sqrtN = std::sqrt(N);
  if (p == 2)
    return std::log(eps * sqrtN / gamma_ij) / (2.0 * delta * lambda_i * lambda_j) * sqrtN;
  const double q = static_cast<double>(p - 2);
  const double ratio = std::pow(gamma_ij / (eps * sqrtN), q);
  return (1.0 - ratio) /
         (q * delta * lambda_i * lambda_j * p * std::pow(gamma_ij, q)) *
         std::pow(N, 0.5 * q);
}

}  // namespace stpca::population
