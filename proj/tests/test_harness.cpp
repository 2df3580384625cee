#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "vecrm/harness.hpp"
#include "vecrm/metrics.hpp"
#include "vecrm/util.hpp"

using namespace vecrm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("vecrm_test_" + tag);
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig small_config(const std::string& out) {
  ExperimentConfig c = scenario1_preset();
  c.scenario.vehicle_count = 4;
  c.learner.rounds = 50;
  c.solvers = {SolverId::kRegretMatching, SolverId::kExhaustiveSearch};
  c.seeds = {1, 2};
  c.output_dir = out;
  return c;
}

}  // namespace

TEST_CASE("solver names round-trip") {
  for (SolverId id : {SolverId::kRegretMatching, SolverId::kTimeAveragedRegretMatching,
                      SolverId::kExhaustiveSearch}) {
    CHECK(solver_from_name(solver_name(id)) == id);
  }
  CHECK(solver_name(SolverId::kRegretMatching) == "rm");
  CHECK(solver_name(SolverId::kTimeAveragedRegretMatching) == "trm");
  CHECK(solver_name(SolverId::kExhaustiveSearch) == "es");
  CHECK_THROWS_AS(solver_from_name("rlnf"), ConfigError);
  CHECK_THROWS_AS(solver_from_name("gradient"), ConfigError);
}

TEST_CASE("config serialization is a fixed point") {
  ExperimentConfig c = scenario2_preset();
  c.seeds = {4, 8, 15};
  c.threads = 3;
  const std::string once = config_to_json(c);
  const std::string twice = config_to_json(config_from_json(once));
  CHECK(once == twice);
}

TEST_CASE("an empty document yields the defaults") {
  const ExperimentConfig c = config_from_json("{}");
  const ExperimentConfig d;
  CHECK(config_to_json(c) == config_to_json(d));
}

TEST_CASE("partial documents override only their keys") {
  const ExperimentConfig c =
      config_from_json(R"({"learner": {"rounds": 123}, "seeds": [9]})");
  CHECK(c.learner.rounds == 123);
  CHECK(c.learner.lambda == 0.5);
  CHECK(c.seeds == std::vector<std::uint64_t>{9});
  CHECK(c.scenario.rsu_count == 2);
}

TEST_CASE("malformed documents are configuration errors") {
  CHECK_THROWS_AS(config_from_json("{"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"learner": {"rounds": "many"}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"solvers": ["warp"]})"), ConfigError);
}

TEST_CASE("presets describe the two reference deployments") {
  const ExperimentConfig s1 = scenario1_preset();
  CHECK(s1.scenario.rsu_count == 2);
  CHECK(s1.scenario.vehicle_count == 10);
  CHECK(s1.learner.rounds == 3000);
  CHECK(s1.solvers.size() == 3);

  const ExperimentConfig s2 = scenario2_preset();
  CHECK(s2.scenario.rsu_count == 10);
  CHECK(s2.scenario.vehicle_count == 100);
  CHECK(s2.learner.rounds == 20000);

  // Both presets pin the gentler propagation model.
  CHECK(s1.scenario.radio.pathloss_exponent == 2.0);
  CHECK(s2.scenario.radio.pathloss_exponent == 2.0);
  validate_config(s1);
  validate_config(s2);
}

TEST_CASE("config validation rejects bad fields") {
  auto expect_reject = [](auto&& mutate) {
    ExperimentConfig c = scenario1_preset();
    mutate(c);
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  };
  expect_reject([](ExperimentConfig& c) { c.learner.lambda = 1.5; });
  expect_reject([](ExperimentConfig& c) { c.threads = 0; });
  expect_reject([](ExperimentConfig& c) { c.seeds = {3, 3}; });
  expect_reject([](ExperimentConfig& c) { c.learner.mu.c = 0.5; });
  expect_reject([](ExperimentConfig& c) { c.game.beta = 0.0; });
  expect_reject([](ExperimentConfig& c) { c.learner.rounds = 0; });
  expect_reject([](ExperimentConfig& c) { c.es_cap = 0; });
  expect_reject([](ExperimentConfig& c) {
    c.solvers = {SolverId::kRegretMatching, SolverId::kRegretMatching};
  });
  expect_reject([](ExperimentConfig& c) { c.scenario.rsu_count = 0; });
}

TEST_CASE("an experiment writes traces, a summary, and a config echo") {
  TempDir tmp("end_to_end");
  const ExperimentConfig cfg = small_config(tmp.path.string());
  const ResultsBundle bundle = run_experiment(cfg);
  REQUIRE(bundle.runs.size() == 4);  // 2 solvers x 2 seeds
  emit_outputs(bundle, cfg.output_dir);

  CHECK(fs::exists(tmp.path / "summary.json"));
  CHECK(fs::exists(tmp.path / "config.json"));
  for (const char* name : {"trace_rm_1.csv", "trace_rm_2.csv", "trace_es_1.csv",
                           "trace_es_2.csv"}) {
    CHECK(fs::exists(tmp.path / name));
  }

  const std::string echoed = slurp(tmp.path / "config.json");
  CHECK(echoed == config_to_json(cfg));
  CHECK(config_to_json(config_from_json(echoed)) == echoed);

  SUBCASE("trace rows mirror the run records") {
    const std::string trace = slurp(tmp.path / "trace_rm_1.csv");
    std::istringstream lines(trace);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "round,objective,lyapunov_max,jain,action_profile_hash");
    std::size_t rows = 0;
    double min_objective = std::numeric_limits<double>::infinity();
    while (std::getline(lines, line)) {
      ++rows;
      std::istringstream cells(line);
      std::string cell;
      REQUIRE(std::getline(cells, cell, ','));  // round
      CHECK(std::stoi(cell) == static_cast<int>(rows));
      REQUIRE(std::getline(cells, cell, ','));  // objective
      min_objective = std::min(min_objective, std::stod(cell));
    }
    CHECK(rows == 50);

    const nlohmann::json summary = nlohmann::json::parse(slurp(tmp.path / "summary.json"));
    const auto& rm_cells = summary.at("solvers").at("rm");
    REQUIRE(rm_cells.size() == 2);
    const auto& cell0 = rm_cells.at(0);
    CHECK(cell0.at("seed").get<std::uint64_t>() == 1);
    CHECK(cell0.at("trace_file").get<std::string>() == "trace_rm_1.csv");
    // The summary minimum must match the emitted trace column to print
    // precision.
    CHECK(cell0.at("min_objective").get<double>() ==
          doctest::Approx(min_objective).epsilon(1e-9));

    const auto& es_cells = summary.at("solvers").at("es");
    REQUIRE(es_cells.size() == 2);
    CHECK(es_cells.at(0).at("profiles_enumerated").get<std::uint64_t>() == 81);
    CHECK(es_cells.at(0).at("found_feasible").get<bool>());
    // The learner can only approach the exhaustive optimum from above.
    CHECK(cell0.at("min_objective").get<double>() >=
          es_cells.at(0).at("min_objective").get<double>() - 1e-9);
  }

  SUBCASE("emitted bytes are reproducible") {
    const std::string before = slurp(tmp.path / "trace_rm_2.csv");
    const ResultsBundle again = run_experiment(cfg);
    emit_outputs(again, cfg.output_dir);
    CHECK(slurp(tmp.path / "trace_rm_2.csv") == before);
    ExperimentConfig wide = cfg;
    wide.threads = 4;
    const ResultsBundle parallel = run_experiment(wide);
    emit_outputs(parallel, cfg.output_dir);
    CHECK(slurp(tmp.path / "trace_rm_2.csv") == before);
  }
}

TEST_CASE("es traces hold the single optimum row") {
  TempDir tmp("es_row");
  ExperimentConfig cfg = small_config(tmp.path.string());
  cfg.solvers = {SolverId::kExhaustiveSearch};
  cfg.seeds = {1};
  const ResultsBundle bundle = run_experiment(cfg);
  emit_outputs(bundle, cfg.output_dir);
  const std::string trace = slurp(tmp.path / "trace_es_1.csv");
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 2);  // header + one row
  REQUIRE(bundle.runs.size() == 1);
  CHECK(bundle.runs[0].converged);
  CHECK(bundle.runs[0].convergence_iteration == 1);
  CHECK(bundle.runs[0].lyapunov_final == 0.0);
}

TEST_CASE("a run without solvers still writes the scaffolding") {
  TempDir tmp("vacuous");
  ExperimentConfig cfg = small_config(tmp.path.string());
  cfg.solvers = {};
  const ResultsBundle bundle = run_experiment(cfg);
  CHECK(bundle.runs.empty());
  emit_outputs(bundle, cfg.output_dir);
  CHECK(fs::exists(tmp.path / "summary.json"));
  CHECK(fs::exists(tmp.path / "config.json"));
  std::size_t csvs = 0;
  for (const auto& entry : fs::directory_iterator(tmp.path)) {
    if (entry.path().extension() == ".csv") ++csvs;
  }
  CHECK(csvs == 0);
}

TEST_CASE("trace numbers use a fixed shortest-round-trip format") {
  CHECK(format_trace_double(0.0) == "0");
  CHECK(format_trace_double(1.5) == "1.5");
  CHECK(format_trace_double(-3.25) == "-3.25");
  CHECK(format_trace_double(1e300) == "1e+300");
  // Twelve significant digits, no locale surprises.
  CHECK(format_trace_double(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("scenario documents list every sampled entity") {
  const ExperimentConfig cfg = scenario1_preset();
  const Scenario s = build_scenario(cfg.scenario, 5);
  const nlohmann::json doc = nlohmann::json::parse(scenario_to_json(s));
  CHECK(doc.at("nodes").size() == 3);
  CHECK(doc.at("vehicles").size() == 10);
  CHECK(doc.at("rng_seed").get<std::uint64_t>() == 5);
}
