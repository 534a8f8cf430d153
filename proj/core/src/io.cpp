#include "stpca/io.hpp"

#include "stpca/population.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

namespace stpca::io {

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json params_json(const ModelParams& params) {
  ordered_json j;
  j["p"] = params.p;
  j["r"] = params.r;
  j["n"] = params.N;
  std::vector<double> snrs(params.lambdas.data(),
                           params.lambdas.data() + params.lambdas.size());
  j["lambda"] = snrs;
  j["sigma"] = params.sigma;
  j["noise"] =
      params.noise_dist == NoiseDist::Gaussian ? "gaussian" : "rademacher";
  return j;
}

ordered_json config_json(const harness::ExperimentSpec& spec) {
  ordered_json j;
  if (spec.kind == harness::ExperimentKind::Online) {
    j["kind"] = "online";
    j["delta"] = spec.sgd.delta;
    j["delta_over_n"] = spec.sgd.delta / static_cast<double>(spec.params.N);
    j["steps"] = spec.sgd.M;
    j["record_stride"] = spec.sgd.record_stride;
    j["backend"] = spec.sgd.backend.kind == noise::BackendKind::Explicit
                       ? "explicit"
                       : "implicit";
    j["positive_init"] = spec.positive_init;
  } else {
    j["kind"] = "population";
    j["dtau"] = spec.pop.dtau > 0 ? spec.pop.dtau
                                  : population::default_dtau(spec.params);
    j["steps"] = spec.pop.n_steps;
    j["record_stride"] = spec.pop.record_stride;
    j["method"] =
        spec.pop.method == population::Method::Rk4 ? "rk4" : "euler";
  }
  j["seeds"] = spec.n_seeds;
  j["base_seed"] = spec.base_seed;
  j["eps"] = spec.thresholds.eps;
  j["eps_prime"] = spec.thresholds.eps_prime;
  j["small_bound"] = spec.thresholds.small_bound;
  j["preset"] = spec.preset_name;
  return j;
}

ordered_json outcome_json(const harness::SeedResult& result) {
  ordered_json j;
  j["seed"] = result.seed;
  j["kind"] = analysis::to_string(result.outcome.kind);
  std::vector<int> sigma;
  for (int row : result.outcome.sigma) sigma.push_back(row + 1);
  j["sigma"] = sigma;
  std::vector<double> margins(
      result.outcome.margins.data(),
      result.outcome.margins.data() + result.outcome.margins.size());
  j["margins"] = margins;
  j["eliminated_ok"] = result.outcome.eliminated_ok;
  j["unstable"] = result.unstable;

  ordered_json elim;
  ordered_json ordering = ordered_json::array();
  for (const auto& [i, jcol] : result.elimination.ordering)
    ordering.push_back({i + 1, jcol + 1});
  elim["ordering"] = ordering;
  elim["stopping_steps"] = result.elimination.stopping_times;
  elim["stopping_taus"] = result.elimination.stopping_taus;
  elim["valid"] = result.elimination.valid;
  elim["violation"] = result.elimination.violation;
  j["elimination"] = elim;
  return j;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
  const int r =
      traj.size() > 0 ? static_cast<int>(traj.corr.front().rows()) : 0;
  std::string out = "step,tau";
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= r; ++j)
      out += ",m_" + std::to_string(i) + "_" + std::to_string(j);
  for (int i = 1; i <= r; ++i) out += ",theta_" + std::to_string(i);
  out += "\n";

  for (std::size_t s = 0; s < traj.size(); ++s) {
    out += std::to_string(traj.steps[s]);
    out += ",";
    out += fmt(traj.taus[s]);
    const Matrix& M = traj.corr[s];
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        out += ",";
        out += fmt(M(i, j));
      }
    const Vector& theta = traj.eigs[s];
    for (int i = 0; i < r; ++i) {
      out += ",";
      out += fmt(theta(i));
    }
    out += "\n";
  }
  return out;
}

std::string summary_json(const harness::ExperimentSummary& summary) {
  ordered_json j;
  j["params"] = params_json(summary.spec.params);
  j["config"] = config_json(summary.spec);

  ordered_json outcomes = ordered_json::array();
  for (const harness::SeedResult& result : summary.results)
    if (!result.failed) outcomes.push_back(outcome_json(result));
  j["outcomes"] = outcomes;

  ordered_json freqs;
  for (const auto& [key, value] : summary.frequencies) freqs[key] = value;
  j["frequencies"] = freqs;

  ordered_json hits;
  for (const auto& [key, stats] : summary.hitting_times) {
    ordered_json s;
    s["count"] = stats.count;
    s["mean"] = stats.mean;
    s["min"] = stats.min;
    s["median"] = stats.median;
    s["max"] = stats.max;
    hits[key] = s;
  }
  j["hitting_times"] = hits;

  ordered_json failures = ordered_json::array();
  for (const harness::SeedResult& result : summary.results)
    if (result.failed)
      failures.push_back(
          ordered_json{{"seed", result.seed}, {"error", result.error}});
  j["failures"] = failures;

  return j.dump(2) + "\n";
}

void write_run(const harness::ExperimentSummary& summary,
               const std::filesystem::path& run_dir) {
  std::filesystem::create_directories(run_dir);
  {
    std::ofstream out(run_dir / "summary.json", std::ios::binary);
    if (!out) throw ConfigError("cannot write to " + run_dir.string());
    out << summary_json(summary);
  }
  for (const harness::SeedResult& result : summary.results) {
    if (result.failed) continue;
    std::ofstream out(
        run_dir / ("seed_" + std::to_string(result.seed) + ".csv"),
        std::ios::binary);
    out << trajectory_csv(result.traj);
  }
}

}  // namespace stpca::io
