#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace stpca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class NoiseDist { Gaussian, Rademacher };

/// Thrown when a trajectory or integration reaches non-finite state.
/// Carries the step index at which the abort happened; the CLI maps this
/// to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what)
      : std::runtime_error(what), base_(what), step_(-1) {}
  NumericError(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        base_(what),
        step_(step) {}
  // -1 when the failing step is not known at the throw site.
  long step() const { return step_; }
  const std::string& base_message() const { return base_; }

 private:
  std::string base_;
  long step_;
};

/// Configuration or shape problem (invalid parameters, regime mismatch,
/// memory-budget refusal). The CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Problem instance: rank-r spiked p-tensor in dimension N.
///
/// Observations are Y = W + sqrt(N) * sum_i lambda_i v_i^{(x)p} with W an
/// i.i.d. sub-Gaussian noise tensor of scale sigma and v_1..v_r orthonormal
/// spikes. SNRs are sorted non-increasing. Immutable after construction;
/// safe to share across trajectory workers.
struct ModelParams {
  int p = 2;         // tensor order, >= 2
  int r = 1;         // number of spikes, 1 <= r <= N
  long N = 100;      // ambient dimension
  Vector lambdas;    // r SNRs, lambda_1 >= ... >= lambda_r >= 0
  double sigma = 1.0;
  NoiseDist noise_dist = NoiseDist::Gaussian;

  double lambda(int i) const { return lambdas(i); }

  /// Throws ConfigError if any invariant is violated.
  void validate() const;
};

}  // namespace stpca
