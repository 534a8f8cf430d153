#pragma once

#include "stpca/analysis.hpp"
#include "stpca/population.hpp"
#include "stpca/sgd.hpp"
#include "stpca/trajectory.hpp"
#include "stpca/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace stpca::harness {

enum class ExperimentKind { Online, Population };

struct AnalysisThresholds {
  double eps = 0.1;          // macroscopic threshold |m| >= 1 - eps
  double eps_prime = 0.1;    // row/column smallness after elimination
  double small_bound = 0.1;  // off-assignment bound for eliminated_ok
};

struct PopulationConfig {
  double dtau = 0.0;  // 0 selects population::default_dtau(params)
  long n_steps = 1000;
  long record_stride = 1;
  population::Method method = population::Method::Rk4;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Online;
  ModelParams params;
  sgd::SGDConfig sgd;   // used when kind == Online
  PopulationConfig pop; // used when kind == Population
  int n_seeds = 1;
  std::uint64_t base_seed = 1;
  std::string preset_name;
  AnalysisThresholds thresholds;
  // Condition the online starting frame on non-negative spike correlations
  // (the population presets already start from |gamma|). For odd p a
  // negative starting correlation is trapped near zero by the sign saddle,
  // so raw uniform starts recover only a random subset of the spikes.
  bool positive_init = true;

  void validate() const;
};

struct SeedResult {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  Trajectory traj;
  analysis::RecoveryOutcome outcome;
  analysis::EliminationReport elimination;
  // |m_11| fell noticeably below its running maximum after first
  // exceeding 1/2 (step-size instability diagnostic).
  bool unstable = false;
};

struct PairStats {
  long count = 0;
  double mean = 0.0, min = 0.0, median = 0.0, max = 0.0;
};

struct ExperimentSummary {
  ExperimentSpec spec;
  std::vector<SeedResult> results;
  // Fractions over all seeds (failed seeds count as "none"); keys
  // "exact", "permutation", "subspace", "none".
  std::map<std::string, double> frequencies;
  // Population times at which each pair "i_j" (1-based) became and stayed
  // macroscopic, aggregated over the seeds where it happened.
  std::map<std::string, PairStats> hitting_times;
  // In-memory diagnostics only; deliberately kept out of the serialized
  // summary so identical runs produce identical files.
  double wall_ms = 0.0;
};

/// Initial correlations for a population run: |gamma_ij| / sqrt(N) with
/// gamma from the first r rows of a uniform Stiefel draw at the model's N,
/// all signs taken positive.
Matrix population_initial_correlations(const ModelParams& params,
                                       std::uint64_t seed);

/// Runs n_seeds independent trajectories (seed = base_seed + k), analyzes
/// each, and aggregates. Seeds run on up to `jobs` worker threads
/// (jobs <= 0 uses the hardware concurrency); aggregation folds in seed
/// order, so results do not depend on scheduling. Per-seed failures are
/// recorded in the summary rather than thrown.
ExperimentSummary run_experiment(const ExperimentSpec& spec, int jobs = 1);

/// Parameter presets reproducing the simulation figures: fig1-fig5, fig9,
/// fig10 are population-dynamics runs, fig6-fig8 online SGD runs.
ExperimentSpec figure_preset(const std::string& name);

const std::vector<std::string>& preset_names();

}  // namespace stpca::harness
