#pragma once

#include "stpca/trajectory.hpp"
#include "stpca/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace stpca::analysis {

/// Ordered row/column pairs from greedy absolute-maximum selection,
/// in original matrix coordinates (0-based).
struct GreedySelection {
  std::vector<std::pair<int, int>> pairs;
};

enum class RecoveryKind { Exact, Permutation, Subspace, None };

const char* to_string(RecoveryKind kind);

/// Outcome of classifying a final correlation matrix.
///
/// sigma[j] is the row assigned to column j by the best assignment (0-based).
/// margins holds the achieved |m_{sigma(j) j}| per column, except for the
/// Subspace kind where it holds the eigenvalues of M M^T. eliminated_ok
/// reports whether every non-assigned entry is <= small_bound in absolute
/// value.
struct RecoveryOutcome {
  RecoveryKind kind = RecoveryKind::None;
  std::vector<int> sigma;
  Vector margins;
  bool eliminated_ok = false;
};

/// Detected macroscopic-threshold crossings along a trajectory.
///
/// ordering lists pairs (i, j), 0-based, by the snapshot at which |m_ij|
/// first crossed 1 - eps and stayed there; stopping_times are the matching
/// recorded step indices and stopping_taus the population times. valid is
/// true when the crossings form a sequential elimination: exactly r pairs,
/// pairwise-distinct rows and columns, every same-row/same-column entry at
/// most eps_prime from the crossing snapshot onward. violation names the
/// first failed condition.
struct EliminationReport {
  std::vector<std::pair<int, int>> ordering;
  std::vector<long> stopping_times;
  std::vector<double> stopping_taus;
  bool valid = false;
  std::string violation;
};

/// Initialization matrix driving the recovery order: entrywise
/// lambda_i lambda_j m_ij^{p-2}, with entries whose m^{p-2} is negative
/// (possible only for odd p) zeroed. For p = 2 this is the SNR outer
/// product lambda lambda^T regardless of M0.
Matrix init_matrix(const Matrix& M0, const Vector& lambdas, int p);

/// Repeated argmax of |A| with removal of the selected row and column;
/// ties broken toward the smallest row index, then smallest column index.
GreedySelection greedy_max_selection(const Matrix& A);

/// Classifies a final correlation matrix: Exact when the best column-to-row
/// assignment is the identity with all |m| >= 1 - eps, Permutation when a
/// non-identity assignment qualifies, Subspace when no assignment qualifies
/// but all eigenvalues of M M^T are >= 1 - eps, None otherwise.
RecoveryOutcome classify_recovery(const Matrix& M_final, double eps,
                                  double small_bound);

/// Scans recorded snapshots for persistent crossings of |m_ij| >= 1 - eps
/// and checks the sequential-elimination conditions at threshold eps_prime.
/// Resolution is limited to recorded snapshots.
EliminationReport detect_sequential_elimination(const Trajectory& traj,
                                                double eps, double eps_prime);

/// Distance between the estimated and ground-truth column spans,
/// ||X X^T - V V^T||_F = sqrt(2 (r - trace(M M^T))).
double subspace_distance(const Matrix& M);

/// Eigenvalues of G = M M^T, descending.
Vector eigenvalues_G(const Matrix& M);

}  // namespace stpca::analysis
