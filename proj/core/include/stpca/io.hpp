#pragma once

#include "stpca/harness.hpp"
#include "stpca/trajectory.hpp"

#include <filesystem>
#include <string>

namespace stpca::io {

/// CSV text for one trajectory. Header
///   step,tau,m_1_1,...,m_r_r,theta_1,...,theta_r
/// with the correlations in row-major order; one data row per snapshot;
/// doubles rendered with %.17g so files round-trip and identical runs
/// produce identical bytes.
std::string trajectory_csv(const Trajectory& traj);

/// Serialized experiment summary with fields
/// {params, config, outcomes, frequencies, hitting_times, failures}.
/// Wall-clock diagnostics are deliberately excluded.
std::string summary_json(const harness::ExperimentSummary& summary);

/// Writes <run_dir>/summary.json and <run_dir>/seed_<seed>.csv for every
/// seed, creating run_dir if needed.
void write_run(const harness::ExperimentSummary& summary,
               const std::filesystem::path& run_dir);

}  // namespace stpca::io
