#pragma once

#include "stpca/types.hpp"

#include <optional>
#include <vector>

namespace stpca {

/// Time-indexed record of the correlation matrix M = V^T X along a run,
/// shared by the online SGD loop and the population integrator.
///
/// steps[i] is the step index of snapshot i (SGD step for online runs,
/// integrator step for population runs) and taus[i] the matching population
/// time. Snapshot 0 is always the initial state. final_M is the correlation
/// matrix at the very last step even when the recording stride skips it.
struct Trajectory {
  std::vector<long> steps;
  std::vector<double> taus;
  std::vector<Matrix> corr;
  std::vector<Vector> eigs;  // eigenvalues of G = M M^T, descending; empty
                             // unless recording was requested
  Matrix final_M;
  std::optional<Matrix> final_X;

  std::size_t size() const { return corr.size(); }
};

}  // namespace stpca
