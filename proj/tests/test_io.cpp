#include "stpca/io.hpp"

#include "stpca/harness.hpp"
#include "stpca/population.hpp"

#include <doctest.h>
#include <json.hpp>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using stpca::Matrix;
using stpca::ModelParams;
using stpca::Trajectory;
using stpca::Vector;
namespace fs = std::filesystem;
namespace harness = stpca::harness;
namespace io = stpca::io;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, sep)) fields.push_back(field);
  return fields;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> key_order(const nlohmann::ordered_json& j) {
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  return keys;
}

harness::ExperimentSummary small_online_summary() {
  harness::ExperimentSpec spec;
  spec.kind = harness::ExperimentKind::Online;
  spec.params.p = 2;
  spec.params.r = 2;
  spec.params.N = 50;
  spec.params.lambdas = Vector::LinSpaced(2, 2.0, 1.0);
  spec.params.sigma = 0.0;
  spec.sgd.delta = 1.0;
  spec.sgd.M = 30;
  spec.sgd.record_stride = 10;
  spec.n_seeds = 2;
  spec.base_seed = 9;
  return harness::run_experiment(spec);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("trajectory csv lays out correlations row-major with eigenvalues") {
  Trajectory traj;
  traj.steps = {0, 3};
  traj.taus = {0.0, 1.0 / 3.0};
  Matrix m0(2, 2);
  m0 << 0.1, -0.25, 1.0 / 3.0, 1e-300;
  Matrix m1(2, 2);
  m1 << 123456789.123456789, 0.0, -1e-17, 0.5;
  traj.corr = {m0, m1};
  traj.eigs = {Vector::LinSpaced(2, 0.9, 0.2),
               (Vector(2) << 1.0, 4.9406564584124654e-324).finished()};
  traj.final_M = m1;

  const std::string csv = io::trajectory_csv(traj);
  const auto lines = lines_of(csv);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "step,tau,m_1_1,m_1_2,m_2_1,m_2_2,theta_1,theta_2");

  const auto row0 = split(lines[1], ',');
  REQUIRE(row0.size() == 8);
  CHECK(row0[0] == "0");

  // Every double must survive a text round trip bit for bit.
  const double originals0[] = {0.0,  0.1, -0.25, 1.0 / 3.0,
                               1e-300, 0.9, 0.2};
  for (int k = 0; k < 7; ++k)
    CHECK(std::strtod(row0[static_cast<std::size_t>(k + 1)].c_str(),
                      nullptr) == originals0[k]);

  const auto row1 = split(lines[2], ',');
  REQUIRE(row1.size() == 8);
  CHECK(row1[0] == "3");
  const double originals1[] = {1.0 / 3.0,         123456789.123456789, 0.0,
                               -1e-17,            0.5,                 1.0,
                               4.9406564584124654e-324};
  for (int k = 0; k < 7; ++k)
    CHECK(std::strtod(row1[static_cast<std::size_t>(k + 1)].c_str(),
                      nullptr) == originals1[k]);

  CHECK(io::trajectory_csv(Trajectory{}) == "step,tau\n");
}

TEST_CASE("csv from a run has one row per recorded snapshot") {
  const auto summary = small_online_summary();
  const auto& traj = summary.results[0].traj;
  REQUIRE(traj.size() == 4);  // steps 0, 10, 20, 30
  const std::string csv = io::trajectory_csv(traj);
  const auto lines = lines_of(csv);
  REQUIRE(lines.size() == 5);
  for (std::size_t s = 0; s < 4; ++s) {
    const auto fields = split(lines[s + 1], ',');
    REQUIRE(fields.size() == 2 + 4 + 2);
    CHECK(fields[0] == std::to_string(traj.steps[s]));
    CHECK(std::strtod(fields[1].c_str(), nullptr) == traj.taus[s]);
    CHECK(std::strtod(fields[2].c_str(), nullptr) == traj.corr[s](0, 0));
    CHECK(std::strtod(fields[5].c_str(), nullptr) == traj.corr[s](1, 1));
    CHECK(std::strtod(fields[6].c_str(), nullptr) == traj.eigs[s](0));
  }
}

TEST_CASE("summary json carries the expected sections in order") {
  const auto summary = small_online_summary();
  const std::string text = io::summary_json(summary);
  CHECK(text.back() == '\n');
  CHECK(text.find("wall") == std::string::npos);

  const auto j = nlohmann::ordered_json::parse(text);
  CHECK(key_order(j) == std::vector<std::string>{"params", "config",
                                                 "outcomes", "frequencies",
                                                 "hitting_times", "failures"});
  CHECK(key_order(j["params"]) ==
        std::vector<std::string>{"p", "r", "n", "lambda", "sigma", "noise"});
  CHECK(j["params"]["p"] == 2);
  CHECK(j["params"]["n"] == 50);
  CHECK(j["params"]["lambda"].size() == 2);
  CHECK(j["params"]["lambda"][0] == 2.0);
  CHECK(j["params"]["noise"] == "gaussian");

  CHECK(key_order(j["config"]) ==
        std::vector<std::string>{"kind", "delta", "delta_over_n", "steps",
                                 "record_stride", "backend", "positive_init",
                                 "seeds", "base_seed", "eps", "eps_prime",
                                 "small_bound", "preset"});
  CHECK(j["config"]["kind"] == "online");
  CHECK(j["config"]["delta"] == 1.0);
  CHECK(j["config"]["delta_over_n"] == doctest::Approx(0.02));
  CHECK(j["config"]["backend"] == "implicit");
  CHECK(j["config"]["positive_init"] == true);
  CHECK(j["config"]["preset"] == "");

  REQUIRE(j["outcomes"].size() == 2);
  const auto& outcome = j["outcomes"][0];
  CHECK(key_order(outcome) ==
        std::vector<std::string>{"seed", "kind", "sigma", "margins",
                                 "eliminated_ok", "unstable", "elimination"});
  CHECK(outcome["seed"] == 9);
  CHECK(key_order(outcome["elimination"]) ==
        std::vector<std::string>{"ordering", "stopping_steps", "stopping_taus",
                                 "valid", "violation"});
  for (const auto& row : outcome["sigma"]) {
    CHECK(row.get<int>() >= 1);
    CHECK(row.get<int>() <= 2);
  }
  for (const auto& pair : outcome["elimination"]["ordering"]) {
    REQUIRE(pair.size() == 2);
    CHECK(pair[0].get<int>() >= 1);
    CHECK(pair[1].get<int>() >= 1);
  }

  double total = 0.0;
  for (const char* key : {"exact", "permutation", "subspace", "none"})
    total += j["frequencies"][key].get<double>();
  CHECK(total == doctest::Approx(1.0));
  CHECK(j["failures"].empty());
}

TEST_CASE("population config serializes the resolved step size") {
  harness::ExperimentSpec spec;
  spec.kind = harness::ExperimentKind::Population;
  spec.params.p = 3;
  spec.params.r = 2;
  spec.params.N = 100;
  spec.params.lambdas = Vector::LinSpaced(2, 3.0, 1.0);
  spec.params.sigma = 1.0;
  spec.pop.dtau = 0.0;
  spec.pop.n_steps = 50;
  spec.pop.record_stride = 10;
  spec.n_seeds = 1;

  const auto summary = harness::run_experiment(spec);
  const auto j = nlohmann::ordered_json::parse(io::summary_json(summary));
  CHECK(key_order(j["config"]) ==
        std::vector<std::string>{"kind", "dtau", "steps", "record_stride",
                                 "method", "seeds", "base_seed", "eps",
                                 "eps_prime", "small_bound", "preset"});
  CHECK(j["config"]["kind"] == "population");
  CHECK(j["config"]["dtau"].get<double>() ==
        stpca::population::default_dtau(spec.params));
  CHECK(j["config"]["method"] == "rk4");
}

TEST_CASE("failed seeds move from outcomes to failures") {
  harness::ExperimentSpec spec;
  spec.kind = harness::ExperimentKind::Population;
  spec.params.p = 3;
  spec.params.r = 2;
  spec.params.N = 100;
  spec.params.lambdas = Vector::Constant(2, 2.0);
  spec.params.sigma = 1.0;
  spec.pop.dtau = 1e9;
  spec.pop.n_steps = 40;
  spec.n_seeds = 1;
  spec.base_seed = 4;

  const auto summary = harness::run_experiment(spec);
  const auto j = nlohmann::ordered_json::parse(io::summary_json(summary));
  CHECK(j["outcomes"].empty());
  REQUIRE(j["failures"].size() == 1);
  CHECK(j["failures"][0]["seed"] == 4);
  CHECK(!j["failures"][0]["error"].get<std::string>().empty());
  CHECK(j["frequencies"]["none"] == 1.0);
}

TEST_CASE("write_run produces stable files named by seed") {
  const auto summary = small_online_summary();
  const fs::path dir = fs::temp_directory_path() /
                       ("stpca_io_test_" + std::to_string(::getpid()));
  fs::remove_all(dir);

  io::write_run(summary, dir);
  REQUIRE(fs::exists(dir / "summary.json"));
  REQUIRE(fs::exists(dir / "seed_9.csv"));
  REQUIRE(fs::exists(dir / "seed_10.csv"));

  const std::string first_json = read_file(dir / "summary.json");
  const std::string first_csv = read_file(dir / "seed_9.csv");
  CHECK(first_json == io::summary_json(summary));
  CHECK(first_csv == io::trajectory_csv(summary.results[0].traj));

  io::write_run(summary, dir);
  CHECK(read_file(dir / "summary.json") == first_json);
  CHECK(read_file(dir / "seed_9.csv") == first_csv);

  fs::remove_all(dir);
}
