#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vecrm/baselines.hpp"
#include "vecrm/game.hpp"
#include "vecrm/learner.hpp"
#include "vecrm/scenario.hpp"

namespace vecrm {

enum class SolverId { kRegretMatching, kTimeAveragedRegretMatching, kExhaustiveSearch };

std::string solver_name(SolverId id);
SolverId solver_from_name(const std::string& name);

struct LearnerRunConfig {
  int rounds = 2000;
  double lambda = 0.5;
  MuRule mu;
  ClockMode clock = ClockMode::kSnapshot;
  double t0 = 0.0;
  double time_step_s = 1.0;
  double convergence_rel_tol = 0.01;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  GameSpec game;
  LearnerRunConfig learner;
  std::vector<SolverId> solvers = {SolverId::kRegretMatching};
  std::vector<std::uint64_t> seeds = {1};
  std::string output_dir = "out";
  std::uint64_t es_cap = 10'000'000;
  int threads = 1;
};

// Embedded experiment presets matching the two reference deployments: a short
// segment with two RSUs and ten vehicles, and a long one with ten RSUs and a
// hundred vehicles.
ExperimentConfig scenario1_preset();
ExperimentConfig scenario2_preset();

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

void validate_config(const ExperimentConfig& config);

std::string scenario_to_json(const Scenario& scenario);

// Outcome of one (solver, seed) cell.
struct SolverRun {
  SolverId solver = SolverId::kRegretMatching;
  std::uint64_t seed = 0;
  double min_objective = 0.0;
  double final_objective = 0.0;
  bool final_feasible = false;
  std::size_t convergence_iteration = 0;
  bool converged = false;
  double fairness = 0.0;       // Jain index on |u| at the converged round
  double lyapunov_final = 0.0; // max over players, final round
  double wall_time_s = 0.0;
  // Per-round rows in trace-file order: round, objective, max Lyapunov, Jain,
  // profile hash.
  struct Row {
    int round = 0;
    double objective = 0.0;
    double lyapunov_max = 0.0;
    double jain = 0.0;
    std::uint64_t profile_hash = 0;
  };
  std::vector<Row> rows;
  bool es_found_feasible = false;
  std::uint64_t es_profiles = 0;
};

struct ResultsBundle {
  ExperimentConfig config;
  std::vector<SolverRun> runs;
};

// Runs every (solver, seed) cell sequentially with deterministic per-cell
// seeding; validation errors surface as ConfigError.
ResultsBundle run_experiment(const ExperimentConfig& config);

// Writes trace_<solver>_<seed>.csv per cell plus summary.json and the resolved
// config echo (config.json) under the output directory.
void emit_outputs(const ResultsBundle& bundle, const std::string& output_dir);

// Fixed-format float used by every trace cell; guarantees byte-stable output.
std::string format_trace_double(double value);

}  // namespace vecrm
