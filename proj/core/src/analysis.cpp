#include "stpca/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace stpca::analysis {

const char* to_string(RecoveryKind kind) {
  switch (kind) {
    case RecoveryKind::Exact: return "exact";
    case RecoveryKind::Permutation: return "permutation";
    case RecoveryKind::Subspace: return "subspace";
    case RecoveryKind::None: return "none";
  }
  return "none";
}

Matrix init_matrix(const Matrix& M0, const Vector& lambdas, int p) {
  if (p < 2) throw ConfigError("init matrix requires p >= 2");
  if (M0.rows() != M0.cols() || M0.rows() != lambdas.size())
    throw ConfigError("M0 must be r x r with matching SNR vector");
  const int r = static_cast<int>(M0.rows());
  Matrix I0(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      double t = 1.0;
      for (int k = 0; k < p - 2; ++k) t *= M0(i, j);
      I0(i, j) = t >= 0 ? lambdas(i) * lambdas(j) * t : 0.0;
    }
  return I0;
}

GreedySelection greedy_max_selection(const Matrix& A) {
  if (A.rows() != A.cols()) throw ConfigError("greedy selection needs a square matrix");
  const int r = static_cast<int>(A.rows());
  std::vector<bool> row_used(r, false), col_used(r, false);
  GreedySelection sel;
  for (int k = 0; k < r; ++k) {
    int bi = -1, bj = -1;
    double best = -1.0;
    for (int i = 0; i < r; ++i) {
      if (row_used[i]) continue;
      for (int j = 0; j < r; ++j) {
        if (col_used[j]) continue;
        const double v = std::abs(A(i, j));
        if (v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    row_used[bi] = true;
    col_used[bj] = true;
    sel.pairs.emplace_back(bi, bj);
  }
  return sel;
}

RecoveryOutcome classify_recovery(const Matrix& M_final, double eps,
                                  double small_bound) {
  if (M_final.rows() != M_final.cols())
    throw ConfigError("correlation matrix must be square");
  if (eps <= 0 || eps >= 1) throw ConfigError("eps must lie in (0,1)");
  if (small_bound <= 0) throw ConfigError("small_bound must be positive");
  const int r = static_cast<int>(M_final.rows());
  if (r > 8) throw ConfigError("assignment search supports r <= 8");

  std::vector<int> perm(r), best_perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  best_perm = perm;
  double best_sum = -1.0;
  bool any_qualifies = false;
  bool best_qualifies = false;
  do {
    double sum = 0.0;
    bool qualifies = true;
    for (int j = 0; j < r; ++j) {
      const double v = std::abs(M_final(perm[j], j));
      sum += v;
      if (v < 1.0 - eps) qualifies = false;
    }
    any_qualifies = any_qualifies || qualifies;
    if (sum > best_sum) {
      best_sum = sum;
      best_perm = perm;
      best_qualifies = qualifies;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  RecoveryOutcome out;
  out.sigma = best_perm;
  out.margins.resize(r);
  for (int j = 0; j < r; ++j)
    out.margins(j) = std::abs(M_final(best_perm[j], j));

  bool identity = true;
  for (int j = 0; j < r; ++j)
    if (best_perm[j] != j) identity = false;

  if (best_qualifies) {
    out.kind = identity ? RecoveryKind::Exact : RecoveryKind::Permutation;
  } else if (any_qualifies) {
    // A qualifying non-maximal assignment exists; report it rather than the
    // higher-sum assignment that misses the threshold.
    std::iota(perm.begin(), perm.end(), 0);
    do {
      bool qualifies = true;
      for (int j = 0; j < r; ++j)
        if (std::abs(M_final(perm[j], j)) < 1.0 - eps) qualifies = false;
      if (qualifies) {
        out.sigma = perm;
        for (int j = 0; j < r; ++j)
          out.margins(j) = std::abs(M_final(perm[j], j));
        identity = true;
        for (int j = 0; j < r; ++j)
          if (perm[j] != j) identity = false;
        out.kind = identity ? RecoveryKind::Exact : RecoveryKind::Permutation;
        break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    Vector theta = eigenvalues_G(M_final);
    if ((theta.array() >= 1.0 - eps).all()) {
      out.kind = RecoveryKind::Subspace;
      out.margins = theta;
    } else {
      out.kind = RecoveryKind::None;
    }
  }

  out.eliminated_ok = true;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (out.sigma[j] == i) continue;
      if (std::abs(M_final(i, j)) > small_bound) out.eliminated_ok = false;
    }
  return out;
}

EliminationReport detect_sequential_elimination(const Trajectory& traj,
                                                double eps,
                                                double eps_prime) {
  if (traj.size() == 0) throw ConfigError("trajectory is empty");
  const int r = static_cast<int>(traj.corr.front().rows());
  const long T = static_cast<long>(traj.size());

  // crossing[i][j]: first snapshot from which |m_ij| >= 1 - eps holds
  // through the end of the recording; T when it never does.
  std::vector<std::vector<long>> crossing(r, std::vector<long>(r, T));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      long t = T;
      while (t > 0 &&
             std::abs(traj.corr[static_cast<std::size_t>(t - 1)](i, j)) >=
                 1.0 - eps)
        --t;
      crossing[i][static_cast<std::size_t>(j)] = t;
    }

  struct Crossed {
    long t;
    int i, j;
  };
  std::vector<Crossed> crossed;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (crossing[i][static_cast<std::size_t>(j)] < T)
        crossed.push_back({crossing[i][static_cast<std::size_t>(j)], i, j});
  std::sort(crossed.begin(), crossed.end(), [](const Crossed& a, const Crossed& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  EliminationReport report;
  for (const Crossed& c : crossed) {
    report.ordering.emplace_back(c.i, c.j);
    report.stopping_times.push_back(traj.steps[static_cast<std::size_t>(c.t)]);
    report.stopping_taus.push_back(traj.taus[static_cast<std::size_t>(c.t)]);
  }

  if (static_cast<int>(crossed.size()) != r) {
    report.violation = "expected " + std::to_string(r) +
                       " macroscopic pair(s), found " +
                       std::to_string(crossed.size());
    return report;
  }
  std::vector<bool> row_seen(r, false), col_seen(r, false);
  for (const Crossed& c : crossed) {
    if (row_seen[c.i]) {
      report.violation = "row " + std::to_string(c.i + 1) + " selected twice";
      return report;
    }
    if (col_seen[c.j]) {
      report.violation =
          "column " + std::to_string(c.j + 1) + " selected twice";
      return report;
    }
    row_seen[c.i] = true;
    col_seen[c.j] = true;
  }
  for (const Crossed& c : crossed)
    for (long t = c.t; t < T; ++t) {
      const Matrix& M = traj.corr[static_cast<std::size_t>(t)];
      for (int j = 0; j < r; ++j)
        if (j != c.j && std::abs(M(c.i, j)) > eps_prime) {
          report.violation = "entry (" + std::to_string(c.i + 1) + "," +
                             std::to_string(j + 1) + ") above eps_prime at step " +
                             std::to_string(traj.steps[static_cast<std::size_t>(t)]);
          return report;
        }
      for (int i = 0; i < r; ++i)
        if (i != c.i && std::abs(M(i, c.j)) > eps_prime) {
          report.violation = "entry (" + std::to_string(i + 1) + "," +
                             std::to_string(c.j + 1) + ") above eps_prime at step " +
                             std::to_string(traj.steps[static_cast<std::size_t>(t)]);
          return report;
        }
    }

  report.valid = true;
  return report;
}

double subspace_distance(const Matrix& M) {
  const double r = static_cast<double>(M.rows());
  const double radicand = 2.0 * (r - (M * M.transpose()).trace());
  if (radicand < -1e-9)
    throw ConfigError("correlation matrix has singular values above 1");
  return std::sqrt(std::max(0.0, radicand));
}

Vector eigenvalues_G(const Matrix& M) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M * M.transpose());
  if (es.info() != Eigen::Success)
    throw NumericError("eigensolve failed on M M^T");
  return es.eigenvalues().reverse();
}

}  // namespace stpca::analysis
