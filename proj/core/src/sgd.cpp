#include "stpca/sgd.hpp"

#include "stpca/analysis.hpp"
#include "stpca/model.hpp"
#include "stpca/stiefel.hpp"

#include <cmath>
#include <string>

namespace stpca::sgd {

namespace {

void record_snapshot(Trajectory& traj, long step, double tau,
                     const Matrix& M) {
  traj.steps.push_back(step);
  traj.taus.push_back(tau);
  traj.corr.push_back(M);
  traj.eigs.push_back(analysis::eigenvalues_G(M));
}

}  // namespace

void SGDConfig::validate() const {
  if (delta <= 0) throw ConfigError("delta must be positive");
  if (M < 0) throw ConfigError("step count must be non-negative");
  if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
}

Matrix sgd_step(const Matrix& X, const Matrix& V, const ModelParams& params,
                const SGDConfig& config, CounterRng& rng) {
  Matrix M = model::correlations(V, X);
  Matrix E = model::population_grad(V, M, params);
  if (params.sigma > 0)
    E += noise::sample_euclidean_noise_grad(X, params, config.backend, rng);
  if (!E.allFinite()) throw NumericError("non-finite loss gradient");
  Matrix U = stiefel::project_tangent(X, E);
  const double scale = -config.delta / static_cast<double>(params.N);
  return stiefel::polar_retract(X, scale * U);
}

Trajectory run(const ModelParams& params, const Matrix& V, const Matrix& X0,
               const SGDConfig& config) {
  params.validate();
  config.validate();
  if (X0.rows() != params.N || X0.cols() != params.r)
    throw ConfigError("X0 must be N x r");

  const double dtau = config.delta / std::sqrt(static_cast<double>(params.N));
  Trajectory traj;
  Matrix X = X0;
  Matrix M = model::correlations(V, X);
  record_snapshot(traj, 0, 0.0, M);

  for (long l = 1; l <= config.M; ++l) {
    CounterRng rng(config.seed, static_cast<std::uint64_t>(l),
                   RngRole::NoiseStep);
    try {
      X = sgd_step(X, V, params, config, rng);
    } catch (const NumericError& e) {
      throw NumericError(e.base_message(), l);
    }
    if (l % config.record_stride == 0) {
      M = model::correlations(V, X);
      record_snapshot(traj, l, static_cast<double>(l) * dtau, M);
    }
  }

  traj.final_M = model::correlations(V, X);
  traj.final_X = X;
  return traj;
}

Trajectory run_zero_noise_implicit(const Matrix& M0, const ModelParams& params,
                                   const SGDConfig& config) {
  params.validate();
  config.validate();
  if (M0.rows() != params.r || M0.cols() != params.r)
    throw ConfigError("M0 must be r x r");

  const double h = config.delta / static_cast<double>(params.N);
  const double dtau = config.delta / std::sqrt(static_cast<double>(params.N));
  const Matrix I = Matrix::Identity(params.r, params.r);

  Trajectory traj;
  Matrix M = M0;
  record_snapshot(traj, 0, 0.0, M);

  for (long l = 1; l <= config.M; ++l) {
    Matrix S = model::population_grad_coeff(M, params);
    Matrix sym = 0.5 * (M.transpose() * S + S.transpose() * M);
    Matrix step = M - h * (S - M * sym);
    Matrix UtU = S.transpose() * S - S.transpose() * M * sym -
                 sym * M.transpose() * S + sym * sym;
    try {
      M = step * stiefel::inv_sqrt_psd(I + h * h * UtU, 1e-14);
    } catch (const NumericError& e) {
      throw NumericError(e.base_message(), l);
    }
    if (!M.allFinite()) throw NumericError("non-finite correlations", l);
    if (l % config.record_stride == 0)
      record_snapshot(traj, l, static_cast<double>(l) * dtau, M);
  }

  traj.final_M = M;
  return traj;
}

double prescribed_step_size(StepSizeRegime regime, const ModelParams& params,
                            double d0, double C_delta, double gamma2,
                            double eps, double c0) {
  params.validate();
  if (d0 <= 0 || C_delta <= 0)
    throw ConfigError("d0 and C_delta must be positive");
  const double N = static_cast<double>(params.N);
  const double logN = std::log(N);
  if (logN <= 0) throw ConfigError("N must exceed 1 for step-size formulas");

  switch (regime) {
    case StepSizeRegime::p3: {
      if (params.p < 3) throw ConfigError("p3 step size requires p >= 3");
      return C_delta * d0 * std::pow(N, -0.5 * (params.p - 3)) / logN;
    }
    case StepSizeRegime::p2_separated: {
      if (params.p != 2)
        throw ConfigError("p2_separated step size requires p = 2");
      for (int i = 0; i + 1 < params.r; ++i)
        if (params.lambda(i) <= params.lambda(i + 1))
          throw ConfigError("p2_separated step size requires distinct SNRs");
      if (gamma2 <= 0) throw ConfigError("gamma2 must be positive");
      if (eps <= 0 || eps >= 1) throw ConfigError("eps must lie in (0,1)");
      if (c0 < 0 || c0 >= 1) throw ConfigError("c0 must lie in [0,1)");
      const double ratio = params.lambda(params.r - 1) / params.lambda(0);
      const double expn = 0.5 * ((1.0 - c0) / (1.0 + c0)) * ratio * ratio;
      const double log_arg = 2.0 * eps * std::sqrt(N) / gamma2;
      if (log_arg <= 1.0)
        throw ConfigError("2 eps sqrt(N) / gamma2 must exceed 1");
      return C_delta * d0 * std::pow(N, expn) / std::log(log_arg);
    }
    case StepSizeRegime::p2_equal: {
      if (params.p != 2) throw ConfigError("p2_equal step size requires p = 2");
      for (int i = 1; i < params.r; ++i)
        if (std::abs(params.lambda(i) - params.lambda(0)) >
            1e-12 * params.lambda(0))
          throw ConfigError("p2_equal step size requires equal SNRs");
      return C_delta * d0 * std::sqrt(N) / (logN * logN);
    }
  }
  throw ConfigError("unknown step-size regime");
}

}  // namespace stpca::sgd
