// stl: simulation and analysis toolkit for multi-spiked tensor PCA.
//
// Subcommands:
//   simulate      online SGD seed sweeps (presets fig6-fig8 or custom)
//   population    deterministic correlation dynamics (fig1-fig5, fig9, fig10)
//   verify-bounds randomized checks of the sequence comparison envelopes
//   predict       hitting-time predictions for given parameters
//
// Exit codes: 0 success, 2 configuration/parse error, 3 numeric failure.

#include "stpca/bounds.hpp"
#include "stpca/harness.hpp"
#include "stpca/io.hpp"
#include "stpca/population.hpp"
#include "stpca/rng.hpp"

#include "svg_chart.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace stpca;

struct CommonFlags {
  std::string preset;
  int p = 0;
  int r = 0;
  long n = 0;
  std::string lambda_csv;
  double sigma = -1.0;
  std::string noise;
  std::string backend;
  double delta = 0.0;
  double delta_over_n = 0.0;
  long steps = -1;
  int seeds = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long record_stride = 0;
  double eps = 0.0;
  double eps_prime = 0.0;
  std::string out;
  bool svg = false;
  int jobs = 0;
  bool force = false;
  bool raw_init = false;
  double dtau = 0.0;
  std::string method;
};

Vector parse_lambdas(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size())
      throw ConfigError("cannot parse --lambda entry '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("--lambda needs at least one value");
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<long>(values.size()));
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool online) {
  cmd->set_config("--config", "", "Flag file (key = value); flags override");
  cmd->add_option("--preset", flags.preset,
                  "Figure preset name (fig1..fig10)");
  cmd->add_option("--p", flags.p, "Tensor order (>= 2)");
  cmd->add_option("--r", flags.r, "Number of spikes");
  cmd->add_option("--n", flags.n, "Ambient dimension");
  cmd->add_option("--lambda", flags.lambda_csv,
                  "Comma-separated SNRs, non-increasing");
  if (online) {
    cmd->add_option("--sigma", flags.sigma, "Noise scale (default 1)");
    cmd->add_option("--noise", flags.noise, "gaussian or rademacher")
        ->check(CLI::IsMember({"gaussian", "rademacher"}));
    cmd->add_option("--backend", flags.backend,
                    "implicit (exact Gaussian law) or explicit (streams N^p)")
        ->check(CLI::IsMember({"implicit", "explicit"}));
    auto* d = cmd->add_option("--delta", flags.delta, "Step size delta");
    auto* dn = cmd->add_option("--delta-over-n", flags.delta_over_n,
                               "Step size as delta/N");
    d->excludes(dn);
    cmd->add_flag("--force", flags.force,
                  "Lift the explicit backend's N^p entry budget");
    cmd->add_flag("--raw-init", flags.raw_init,
                  "Start from a raw uniform frame instead of conditioning "
                  "the initial spike correlations to be non-negative");
  } else {
    cmd->add_option("--dtau", flags.dtau,
                    "Integration step (default min(1e-2, 0.1/(p lambda1^2)))");
    cmd->add_option("--method", flags.method, "rk4 or euler")
        ->check(CLI::IsMember({"rk4", "euler"}));
  }
  cmd->add_option("--steps", flags.steps, "Number of steps");
  cmd->add_option("--seeds", flags.seeds, "Number of seeds to sweep");
  cmd->add_option("--seed", flags.seed, "Base seed")
      ->trigger_on_parse()
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--record-stride", flags.record_stride,
                  "Steps between snapshots");
  cmd->add_option("--eps", flags.eps,
                  "Macroscopic threshold: recovered when |m| >= 1 - eps");
  cmd->add_option("--eps-prime", flags.eps_prime,
                  "Row/column smallness threshold after elimination");
  cmd->add_option("--out", flags.out,
                  "Output root (default $STL_OUT_DIR or .)");
  cmd->add_flag("--svg", flags.svg, "Also write per-seed SVG line charts");
  cmd->add_option("--jobs", flags.jobs,
                  "Worker threads (default: available cores)");
}

harness::ExperimentSpec build_spec(const CommonFlags& flags, bool online) {
  harness::ExperimentSpec spec;
  if (!flags.preset.empty()) {
    spec = harness::figure_preset(flags.preset);
    const bool preset_online =
        spec.kind == harness::ExperimentKind::Online;
    if (preset_online != online)
      throw ConfigError("preset " + flags.preset + " belongs to the " +
                        (preset_online ? "simulate" : "population") +
                        " subcommand");
  } else {
    spec.kind = online ? harness::ExperimentKind::Online
                       : harness::ExperimentKind::Population;
    if (flags.p == 0 || flags.r == 0 || flags.lambda_csv.empty())
      throw ConfigError("--p, --r and --lambda are required without --preset");
    if (online && flags.n == 0)
      throw ConfigError("--n is required without --preset");
    spec.params.N = online ? flags.n : 1000000;
    spec.n_seeds = 1;
  }

  if (flags.p != 0) spec.params.p = flags.p;
  if (flags.r != 0) spec.params.r = flags.r;
  if (flags.n != 0) spec.params.N = flags.n;
  if (!flags.lambda_csv.empty())
    spec.params.lambdas = parse_lambdas(flags.lambda_csv);
  if (flags.sigma >= 0) spec.params.sigma = flags.sigma;
  if (!flags.noise.empty())
    spec.params.noise_dist = flags.noise == "gaussian"
                                 ? NoiseDist::Gaussian
                                 : NoiseDist::Rademacher;
  if (spec.params.lambdas.size() == 0)
    throw ConfigError("--lambda is required without --preset");

  if (online) {
    if (!flags.backend.empty())
      spec.sgd.backend.kind = flags.backend == "explicit"
                                  ? noise::BackendKind::Explicit
                                  : noise::BackendKind::GaussianImplicit;
    if (flags.force)
      spec.sgd.backend.max_tensor_entries = std::size_t(1) << 40;
    if (flags.delta > 0) spec.sgd.delta = flags.delta;
    if (flags.delta_over_n > 0)
      spec.sgd.delta = flags.delta_over_n * static_cast<double>(spec.params.N);
    if (flags.steps >= 0) spec.sgd.M = flags.steps;
    if (flags.record_stride > 0) spec.sgd.record_stride = flags.record_stride;
    if (flags.raw_init) spec.positive_init = false;
  } else {
    if (flags.dtau > 0) spec.pop.dtau = flags.dtau;
    if (!flags.method.empty())
      spec.pop.method = flags.method == "euler" ? population::Method::Euler
                                                : population::Method::Rk4;
    if (flags.steps >= 0) spec.pop.n_steps = flags.steps;
    if (flags.record_stride > 0) spec.pop.record_stride = flags.record_stride;
  }

  if (flags.seeds > 0) spec.n_seeds = flags.seeds;
  if (flags.seed_set) spec.base_seed = flags.seed;
  if (flags.eps > 0) spec.thresholds.eps = flags.eps;
  if (flags.eps_prime > 0) spec.thresholds.eps_prime = flags.eps_prime;
  return spec;
}

fs::path output_root(const CommonFlags& flags) {
  if (!flags.out.empty()) return flags.out;
  if (const char* env = std::getenv("STL_OUT_DIR")) return env;
  return ".";
}

std::string run_id(const harness::ExperimentSpec& spec) {
  if (!spec.preset_name.empty()) return spec.preset_name;
  std::string id = spec.kind == harness::ExperimentKind::Online
                       ? "online"
                       : "population";
  id += "_p" + std::to_string(spec.params.p);
  id += "_r" + std::to_string(spec.params.r);
  id += "_n" + std::to_string(spec.params.N);
  id += "_seed" + std::to_string(spec.base_seed);
  return id;
}

int run_sweep(const CommonFlags& flags, bool online) {
  harness::ExperimentSpec spec = build_spec(flags, online);
  harness::ExperimentSummary summary =
      harness::run_experiment(spec, flags.jobs);

  const fs::path run_dir = output_root(flags) / run_id(spec);
  io::write_run(summary, run_dir);
  if (flags.svg) {
    for (const harness::SeedResult& result : summary.results) {
      if (result.failed) continue;
      std::ofstream out(
          run_dir / ("seed_" + std::to_string(result.seed) + ".svg"),
          std::ios::binary);
      out << stl_cli::trajectory_svg(
          result.traj, run_id(spec) + " seed " + std::to_string(result.seed));
    }
  }

  std::cout << "wrote " << (run_dir / "summary.json").string() << "\n";
  std::cout << "frequencies:";
  for (const auto& [key, value] : summary.frequencies)
    std::cout << " " << key << "=" << value;
  std::cout << "\n";
  long failed = 0;
  for (const auto& result : summary.results)
    if (result.failed) ++failed;
  if (failed > 0)
    std::cout << failed << " seed(s) failed; see summary.json\n";
  return 0;
}

int run_verify_bounds(std::uint64_t seed, long count, long horizon) {
  using namespace stpca::bounds;
  CounterRng rng(seed, 0, RngRole::Generic);
  long failures = 0;

  auto random_spec = [&](BoundKind kind) {
    SequenceBoundSpec spec;
    spec.p = kind == BoundKind::Gronwall ? 2 : (rng.uniform01() < 0.5 ? 3 : 4);
    if (kind == BoundKind::Logistic) spec.p = 2;
    spec.a1 = 1e-3 + 0.1 * rng.uniform01();
    spec.a2 = spec.a1 * (1.0 + rng.uniform01());
    spec.b1 = 1e-3 + 0.2 * rng.uniform01();
    spec.b2 = spec.b1 * (1.0 + rng.uniform01());
    if (kind == BoundKind::Logistic) spec.a2 = std::min(spec.a2, 0.45);
    return spec;
  };

  auto build_sequence = [&](const SequenceBoundSpec& spec, BoundKind kind) {
    std::vector<double> u;
    double sum = 0.0;
    for (long t = 0; t < horizon; ++t) {
      const double lo = spec.a1 + spec.b1 * sum;
      const double hi = spec.a2 + spec.b2 * sum;
      const double ut = lo + (hi - lo) * rng.uniform01();
      if (kind == BoundKind::Logistic && ut > 0.95) break;
      if (ut > 1e90) break;
      u.push_back(ut);
      switch (kind) {
        case BoundKind::Gronwall: sum += ut; break;
        case BoundKind::Bihari: sum += std::pow(ut, spec.p - 1); break;
        case BoundKind::Logistic: sum += ut * (1.0 - ut); break;
      }
    }
    return u;
  };

  for (BoundKind kind :
       {BoundKind::Gronwall, BoundKind::Bihari, BoundKind::Logistic}) {
    const char* name = kind == BoundKind::Gronwall  ? "gronwall"
                       : kind == BoundKind::Bihari  ? "bihari"
                                                    : "logistic";
    long kind_failures = 0;
    for (long c = 0; c < count; ++c) {
      SequenceBoundSpec spec = random_spec(kind);
      std::vector<double> u = build_sequence(spec, kind);
      SandwichReport report = verify_sandwich(u, spec, kind);
      if (!report.ok) {
        ++kind_failures;
        std::cerr << name << " sequence " << c << ": " << report.what
                  << "\n";
      }
    }
    std::cout << name << ": " << (count - kind_failures) << "/" << count
              << " sequences within envelopes\n";
    failures += kind_failures;
  }
  if (failures > 0) {
    std::cerr << failures << " envelope violations\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "stl: online SGD and population dynamics for multi-spiked tensor PCA"};
  app.require_subcommand(1);

  CommonFlags sim_flags, pop_flags;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Online SGD seed sweep");
  add_common_flags(simulate, sim_flags, true);
  CLI::App* population = app.add_subcommand(
      "population", "Deterministic correlation dynamics");
  add_common_flags(population, pop_flags, false);

  CLI::App* verify =
      app.add_subcommand("verify-bounds", "Randomized envelope checks");
  std::uint64_t vb_seed = 1;
  long vb_count = 100, vb_horizon = 400;
  verify->add_option("--seed", vb_seed, "Base seed");
  verify->add_option("--count", vb_count, "Sequences per bound kind");
  verify->add_option("--horizon", vb_horizon, "Maximum sequence length");

  CLI::App* predict =
      app.add_subcommand("predict", "Hitting-time predictions");
  int pr_p = 3;
  double pr_gamma = 1.0, pr_li = 1.0, pr_lj = 1.0, pr_delta = 1.0,
         pr_eps = 0.5;
  double pr_n = 1e6;
  predict->add_option("--p", pr_p, "Tensor order");
  predict->add_option("--gamma", pr_gamma,
                      "Rescaled initial correlation gamma = m0 sqrt(N)");
  predict->add_option("--lambda-i", pr_li, "Row SNR");
  predict->add_option("--lambda-j", pr_lj, "Column SNR");
  predict->add_option("--delta", pr_delta, "Step size");
  predict->add_option("--n", pr_n, "Ambient dimension");
  predict->add_option("--eps", pr_eps, "Target correlation level");

  try {
    app.parse(argc, argv);

    if (simulate->parsed()) return run_sweep(sim_flags, true);
    if (population->parsed()) return run_sweep(pop_flags, false);
    if (verify->parsed())
      return run_verify_bounds(vb_seed, vb_count, vb_horizon);
    if (predict->parsed()) {
      const double pred = stpca::population::predicted_hitting_time(
          pr_gamma, pr_li, pr_lj, pr_p, pr_delta, pr_n, pr_eps);
      // The p = 2 branch is already a step count; the p >= 3 branch is the
      // population time over delta, so steps carry an extra sqrt(N).
      const double steps = pr_p >= 3 ? pred * std::sqrt(pr_n) : pred;
      const double tau = steps * pr_delta / std::sqrt(pr_n);
      std::printf("predicted_steps %.17g\n", steps);
      std::printf("population_time %.17g\n", tau);
      return 0;
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
