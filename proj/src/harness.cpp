#include "vecrm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include "json.hpp"

#include "vecrm/metrics.hpp"
#include "vecrm/util.hpp"

namespace vecrm {

using nlohmann::json;

std::string solver_name(SolverId id) {
  switch (id) {
    case SolverId::kRegretMatching: return "rm";
    case SolverId::kTimeAveragedRegretMatching: return "trm";
    case SolverId::kExhaustiveSearch: return "es";
  }
  throw std::logic_error("unknown solver id");
}

SolverId solver_from_name(const std::string& name) {
  if (name == "rm") return SolverId::kRegretMatching;
  if (name == "trm") return SolverId::kTimeAveragedRegretMatching;
  if (name == "es") return SolverId::kExhaustiveSearch;
  if (name == "rlnf") {
    throw ConfigError("solver 'rlnf' is reserved but not implemented");
  }
  throw ConfigError("unknown solver '" + name + "' (expected rm, trm or es)");
}

namespace {

json node_class_to_json(const NodeClassParams& p) {
  return json{{"bandwidth_mhz", p.bandwidth_mhz},
              {"upload_price_per_mhz", p.upload_price_per_mhz},
              {"compute_price_per_ghz", p.compute_price_per_ghz},
              {"capacity_cap_ghz", p.capacity_cap_ghz},
              {"perpendicular_offset_m", p.perpendicular_offset_m}};
}

void node_class_from_json(const json& j, NodeClassParams& p) {
  p.bandwidth_mhz = j.value("bandwidth_mhz", p.bandwidth_mhz);
  p.upload_price_per_mhz = j.value("upload_price_per_mhz", p.upload_price_per_mhz);
  p.compute_price_per_ghz = j.value("compute_price_per_ghz", p.compute_price_per_ghz);
  p.capacity_cap_ghz = j.value("capacity_cap_ghz", p.capacity_cap_ghz);
  p.perpendicular_offset_m = j.value("perpendicular_offset_m", p.perpendicular_offset_m);
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return json(v);
  return json(nullptr);
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["scenario"] = {
      {"rsu_count", c.scenario.rsu_count},
      {"vehicle_count", c.scenario.vehicle_count},
      {"inter_rsu_distance_m", c.scenario.inter_rsu_distance_m},
      {"rsu_coverage_radius_m", c.scenario.rsu_coverage_radius_m},
      {"lane_count", c.scenario.lane_count},
      {"lane_width_m", c.scenario.lane_width_m},
      {"lane_speeds_kmh", c.scenario.lane_speeds_kmh},
      {"transmit_power_dbm", c.scenario.transmit_power_dbm},
      {"task_size_mb", c.scenario.task_size_mb},
      {"task_cycles_gcycles",
       json::array({c.scenario.task_cycles_min_gcycles, c.scenario.task_cycles_max_gcycles})},
      {"allocated_capacity_ghz",
       json::array({c.scenario.allocated_capacity_min_ghz, c.scenario.allocated_capacity_max_ghz})},
      {"wired_bandwidth_mbps", c.scenario.wired_bandwidth_mbps},
      {"hop_delay_s", c.scenario.hop_delay_s},
      {"migration_price_per_mb", c.scenario.migration_price_per_mb},
      {"service_entity_size_mb", c.scenario.service_entity_size_mb},
      {"rsu", node_class_to_json(c.scenario.rsu)},
      {"bs", node_class_to_json(c.scenario.bs)},
      {"radio",
       {{"noise_dbm", c.scenario.radio.noise_dbm},
        {"pathloss_exponent", c.scenario.radio.pathloss_exponent},
        {"reference_distance_m", c.scenario.radio.reference_distance_m},
        {"reference_gain_db", c.scenario.radio.reference_gain_db}}},
  };
  j["game"] = {{"beta", c.game.beta},
               {"gamma", c.game.gamma},
               {"penalty", c.game.penalty}};
  j["learner"] = {{"rounds", c.learner.rounds},
                  {"lambda", c.learner.lambda},
                  {"mu_c", c.learner.mu.c},
                  {"mu_min", c.learner.mu.min_value},
                  {"mode", c.learner.clock == ClockMode::kSnapshot ? "snapshot" : "mobile"},
                  {"t0", c.learner.t0},
                  {"time_step_s", c.learner.time_step_s},
                  {"convergence_rel_tol", c.learner.convergence_rel_tol}};
  json solvers = json::array();
  for (SolverId s : c.solvers) solvers.push_back(solver_name(s));
  j["solvers"] = solvers;
  j["seeds"] = c.seeds;
  j["output_dir"] = c.output_dir;
  j["es_cap"] = c.es_cap;
  j["threads"] = c.threads;
  return j.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    if (j.contains("scenario")) {
      const json& s = j["scenario"];
      c.scenario.rsu_count = s.value("rsu_count", c.scenario.rsu_count);
      c.scenario.vehicle_count = s.value("vehicle_count", c.scenario.vehicle_count);
      c.scenario.inter_rsu_distance_m =
          s.value("inter_rsu_distance_m", c.scenario.inter_rsu_distance_m);
      c.scenario.rsu_coverage_radius_m =
          s.value("rsu_coverage_radius_m", c.scenario.rsu_coverage_radius_m);
      c.scenario.lane_count = s.value("lane_count", c.scenario.lane_count);
      c.scenario.lane_width_m = s.value("lane_width_m", c.scenario.lane_width_m);
      if (s.contains("lane_speeds_kmh")) {
        c.scenario.lane_speeds_kmh = s["lane_speeds_kmh"].get<std::vector<double>>();
      }
      c.scenario.transmit_power_dbm =
          s.value("transmit_power_dbm", c.scenario.transmit_power_dbm);
      c.scenario.task_size_mb = s.value("task_size_mb", c.scenario.task_size_mb);
      if (s.contains("task_cycles_gcycles")) {
        auto r = s["task_cycles_gcycles"].get<std::vector<double>>();
        if (r.size() != 2) throw ConfigError("config: task_cycles_gcycles must be [min, max]");
        c.scenario.task_cycles_min_gcycles = r[0];
        c.scenario.task_cycles_max_gcycles = r[1];
      }
      if (s.contains("allocated_capacity_ghz")) {
        auto r = s["allocated_capacity_ghz"].get<std::vector<double>>();
        if (r.size() != 2) throw ConfigError("config: allocated_capacity_ghz must be [min, max]");
        c.scenario.allocated_capacity_min_ghz = r[0];
        c.scenario.allocated_capacity_max_ghz = r[1];
      }
      c.scenario.wired_bandwidth_mbps =
          s.value("wired_bandwidth_mbps", c.scenario.wired_bandwidth_mbps);
      c.scenario.hop_delay_s = s.value("hop_delay_s", c.scenario.hop_delay_s);
      c.scenario.migration_price_per_mb =
          s.value("migration_price_per_mb", c.scenario.migration_price_per_mb);
      c.scenario.service_entity_size_mb =
          s.value("service_entity_size_mb", c.scenario.service_entity_size_mb);
      if (s.contains("rsu")) node_class_from_json(s["rsu"], c.scenario.rsu);
      if (s.contains("bs")) node_class_from_json(s["bs"], c.scenario.bs);
      if (s.contains("radio")) {
        const json& r = s["radio"];
        c.scenario.radio.noise_dbm = r.value("noise_dbm", c.scenario.radio.noise_dbm);
        c.scenario.radio.pathloss_exponent =
            r.value("pathloss_exponent", c.scenario.radio.pathloss_exponent);
        c.scenario.radio.reference_distance_m =
            r.value("reference_distance_m", c.scenario.radio.reference_distance_m);
        c.scenario.radio.reference_gain_db =
            r.value("reference_gain_db", c.scenario.radio.reference_gain_db);
      }
    }
    if (j.contains("game")) {
      const json& g = j["game"];
      c.game.beta = g.value("beta", c.game.beta);
      c.game.gamma = g.value("gamma", c.game.gamma);
      c.game.penalty = g.value("penalty", c.game.penalty);
    }
    if (j.contains("learner")) {
      const json& l = j["learner"];
      c.learner.rounds = l.value("rounds", c.learner.rounds);
      c.learner.lambda = l.value("lambda", c.learner.lambda);
      c.learner.mu.c = l.value("mu_c", c.learner.mu.c);
      c.learner.mu.min_value = l.value("mu_min", c.learner.mu.min_value);
      if (l.contains("mode")) {
        const std::string mode = l["mode"].get<std::string>();
        if (mode == "snapshot") {
          c.learner.clock = ClockMode::kSnapshot;
        } else if (mode == "mobile") {
          c.learner.clock = ClockMode::kMobile;
        } else {
          throw ConfigError("config: mode must be 'snapshot' or 'mobile'");
        }
      }
      c.learner.t0 = l.value("t0", c.learner.t0);
      c.learner.time_step_s = l.value("time_step_s", c.learner.time_step_s);
      c.learner.convergence_rel_tol =
          l.value("convergence_rel_tol", c.learner.convergence_rel_tol);
    }
    if (j.contains("solvers")) {
      c.solvers.clear();
      for (const auto& s : j["solvers"]) {
        c.solvers.push_back(solver_from_name(s.get<std::string>()));
      }
    }
    if (j.contains("seeds")) c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    c.output_dir = j.value("output_dir", c.output_dir);
    c.es_cap = j.value("es_cap", c.es_cap);
    c.threads = j.value("threads", c.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: schema error: ") + e.what());
  }
  return c;
}

void validate_config(const ExperimentConfig& c) {
  // Scenario field validation happens inside build_scenario; build a throwaway
  // instance so bad configs fail before any run starts.
  build_scenario(c.scenario, 0);
  if (!(c.game.beta > 0.0) || !(c.game.gamma > 0.0)) {
    throw ConfigError("config: beta and gamma must be positive");
  }
  if (!(c.game.penalty > 0.0)) throw ConfigError("config: penalty must be positive");
  if (c.learner.rounds < 1) throw ConfigError("config: rounds must be >= 1");
  if (!(c.learner.lambda >= 0.0 && c.learner.lambda <= 1.0)) {
    throw ConfigError("config: lambda must lie in [0, 1]");
  }
  if (!(c.learner.mu.c >= 1.0)) {
    throw ConfigError("config: mu_c must be >= 1 to keep strategies valid");
  }
  if (!(c.learner.mu.min_value > 0.0)) throw ConfigError("config: mu_min must be positive");
  if (!(c.learner.t0 >= 0.0)) throw ConfigError("config: t0 must be >= 0");
  if (!(c.learner.time_step_s > 0.0)) throw ConfigError("config: time_step_s must be positive");
  if (!(c.learner.convergence_rel_tol > 0.0)) {
    throw ConfigError("config: convergence_rel_tol must be positive");
  }
  if (c.es_cap == 0) throw ConfigError("config: es_cap must be >= 1");
  if (c.threads < 1) throw ConfigError("config: threads must be >= 1");
  std::set<std::uint64_t> seed_set(c.seeds.begin(), c.seeds.end());
  if (seed_set.size() != c.seeds.size()) throw ConfigError("config: duplicate seeds");
  std::set<SolverId> solver_set(c.solvers.begin(), c.solvers.end());
  if (solver_set.size() != c.solvers.size()) throw ConfigError("config: duplicate solvers");
}

ExperimentConfig scenario1_preset() {
  ExperimentConfig c;
  c.scenario.rsu_count = 2;
  c.scenario.vehicle_count = 10;
  // The reference channel constants leave highway-scale links too slow for any
  // deadline, so the presets pin a gentler propagation model.
  c.scenario.radio = {-110.0, 2.0, 1.0, 0.0};
  c.learner.rounds = 3000;
  c.learner.lambda = 0.5;
  c.solvers = {SolverId::kRegretMatching, SolverId::kTimeAveragedRegretMatching,
               SolverId::kExhaustiveSearch};
  c.seeds = {1};
  return c;
}

ExperimentConfig scenario2_preset() {
  ExperimentConfig c = scenario1_preset();
  c.scenario.rsu_count = 10;
  c.scenario.vehicle_count = 100;
  c.learner.rounds = 20000;
  c.solvers = {SolverId::kRegretMatching};
  return c;
}

std::string scenario_to_json(const Scenario& s) {
  json nodes = json::array();
  for (const Node& n : s.nodes) {
    nodes.push_back({{"id", n.id},
                     {"kind", n.is_rsu() ? "rsu" : "bs"},
                     {"axial_position_m", n.axial_position_m},
                     {"perpendicular_offset_m", n.perpendicular_offset_m},
                     {"coverage_radius_m", n.coverage_radius_m},
                     {"bandwidth_mhz", n.bandwidth_mhz},
                     {"upload_price_per_mhz", n.upload_price_per_mhz},
                     {"compute_price_per_ghz", n.compute_price_per_ghz},
                     {"capacity_cap_ghz", n.capacity_cap_ghz},
                     {"noise_dbm", n.noise_dbm}});
  }
  json vehicles = json::array();
  for (const Vehicle& v : s.vehicles) {
    vehicles.push_back({{"id", v.id},
                        {"lane", v.lane},
                        {"initial_axial_position_m", v.initial_axial_position_m},
                        {"direction", v.direction},
                        {"speed_mps", v.speed_mps},
                        {"transmit_power_dbm", v.transmit_power_dbm},
                        {"task_size_mb", v.task.size_mb},
                        {"task_cycles_gcycles", v.task.cycles_gcycles}});
  }
  json j{{"highway_length_m", s.highway_length_m},
         {"lane_width_m", s.lane_width_m},
         {"inter_rsu_distance_m", s.inter_rsu_distance_m},
         {"rsu_coverage_radius_m", s.rsu_coverage_radius_m},
         {"rng_seed", s.rng_seed},
         {"nodes", nodes},
         {"vehicles", vehicles},
         {"backhaul",
          {{"wired_bandwidth_mbps", s.backhaul.wired_bandwidth_mbps},
           {"hop_delay_s", s.backhaul.hop_delay_s},
           {"migration_price_per_mb", s.backhaul.migration_price_per_mb},
           {"service_entity_size_mb", s.backhaul.service_entity_size_mb},
           {"hops", s.backhaul.hops}}},
         {"allocated_ghz", s.allocated_ghz}};
  return j.dump(2) + "\n";
}

namespace {

SolverRun::Row make_row(int round, const RoundRecord& record) {
  SolverRun::Row row;
  row.round = round;
  row.objective = record.objective;
  row.lyapunov_max = 0.0;
  for (double p : record.lyapunov) row.lyapunov_max = std::max(row.lyapunov_max, p);
  std::vector<double> magnitudes;
  magnitudes.reserve(record.utilities.size());
  for (double u : record.utilities) magnitudes.push_back(std::abs(u));
  row.jain = jain_fairness(magnitudes);
  row.profile_hash = fnv1a64(record.actions);
  return row;
}

SolverRun run_learner_cell(VecGame& game, const ExperimentConfig& config,
                           SolverId solver, std::uint64_t seed) {
  LearnerConfig lc;
  lc.rounds = config.learner.rounds;
  lc.mode = solver == SolverId::kRegretMatching ? AveragingMode::kForgetting
                                                : AveragingMode::kHarmonic;
  lc.lambda = config.learner.lambda;
  lc.mu = config.learner.mu;
  lc.threads = config.threads;

  ExperimentTrace trace = run_learning(game, lc, seed);

  SolverRun run;
  run.solver = solver;
  run.seed = seed;
  run.rows.reserve(trace.rounds.size());
  std::vector<double> objectives;
  objectives.reserve(trace.rounds.size());
  run.min_objective = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < trace.rounds.size(); ++r) {
    run.rows.push_back(make_row(static_cast<int>(r) + 1, trace.rounds[r]));
    objectives.push_back(trace.rounds[r].objective);
    run.min_objective = std::min(run.min_objective, trace.rounds[r].objective);
  }
  const RoundRecord& last = trace.rounds.back();
  run.final_objective = last.objective;
  run.final_feasible = last.feasible;
  run.lyapunov_final = run.rows.back().lyapunov_max;
  run.convergence_iteration =
      convergence_iteration(objectives, config.learner.convergence_rel_tol);
  run.converged = run.convergence_iteration < trace.rounds.size();
  run.fairness = run.rows[run.convergence_iteration - 1].jain;
  return run;
}

SolverRun run_es_cell(VecGame& game, const ExperimentConfig& config,
                      std::uint64_t seed) {
  SolverRun run;
  run.solver = SolverId::kExhaustiveSearch;
  run.seed = seed;
  EsResult es = exhaustive_search(game, config.es_cap, config.threads);
  run.es_profiles = es.profiles_enumerated;
  run.es_found_feasible = es.found_feasible;
  if (!es.found_feasible) {
    run.min_objective = std::numeric_limits<double>::infinity();
    run.final_objective = std::numeric_limits<double>::infinity();
    run.final_feasible = false;
    run.convergence_iteration = 0;
    run.converged = false;
    run.fairness = 0.0;
    return run;
  }
  RoundRecord record;
  record.actions = es.best;
  record.utilities.assign(game.player_count(), 0.0);
  game.realized_utilities(record.actions, record.utilities);
  record.objective = es.objective;
  record.lyapunov.assign(game.player_count(), 0.0);
  record.feasible = true;
  run.rows.push_back(make_row(1, record));
  run.min_objective = es.objective;
  run.final_objective = es.objective;
  run.final_feasible = true;
  run.convergence_iteration = 1;
  run.converged = true;
  run.fairness = run.rows[0].jain;
  run.lyapunov_final = 0.0;
  return run;
}

}  // namespace

ResultsBundle run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  ResultsBundle bundle;
  bundle.config = config;
  for (std::uint64_t seed : config.seeds) {
    const Scenario scenario = build_scenario(config.scenario, seed);
    VecGame game(scenario, config.game, config.learner.clock, config.learner.t0,
                 config.learner.time_step_s);
    for (SolverId solver : config.solvers) {
      const auto start = std::chrono::steady_clock::now();
      SolverRun run = solver == SolverId::kExhaustiveSearch
                          ? run_es_cell(game, config, seed)
                          : run_learner_cell(game, config, solver, seed);
      const auto stop = std::chrono::steady_clock::now();
      run.wall_time_s = std::chrono::duration<double>(stop - start).count();
      bundle.runs.push_back(std::move(run));
    }
  }
  return bundle;
}

std::string format_trace_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

std::string trace_file_name(const SolverRun& run) {
  return "trace_" + solver_name(run.solver) + "_" + std::to_string(run.seed) + ".csv";
}

void write_trace(const std::filesystem::path& path, const SolverRun& run) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open trace file " + path.string());
  out << "round,objective,lyapunov_max,jain,action_profile_hash\n";
  char hash_buf[24];
  for (const SolverRun::Row& row : run.rows) {
    std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                  static_cast<unsigned long long>(row.profile_hash));
    out << row.round << ',' << format_trace_double(row.objective) << ','
        << format_trace_double(row.lyapunov_max) << ','
        << format_trace_double(row.jain) << ',' << hash_buf << '\n';
  }
  if (!out.good()) throw std::ios_base::failure("failed writing trace file " + path.string());
}

}  // namespace

void emit_outputs(const ResultsBundle& bundle, const std::string& output_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::ios_base::failure("cannot create output directory " + dir.string() +
                                 ": " + ec.message());
  }

  json summary;
  summary["solvers"] = json::object();
  for (const SolverRun& run : bundle.runs) {
    write_trace(dir / trace_file_name(run), run);

    json cell{{"seed", run.seed},
              {"trace_file", trace_file_name(run)},
              {"min_objective", finite_or_null(run.min_objective)},
              {"final_objective", finite_or_null(run.final_objective)},
              {"final_feasible", run.final_feasible},
              {"convergence_iteration", run.convergence_iteration},
              {"converged", run.converged},
              {"fairness", run.fairness},
              {"lyapunov_final_max", run.lyapunov_final},
              {"wall_time_s", run.wall_time_s}};
    if (run.solver == SolverId::kExhaustiveSearch) {
      cell["profiles_enumerated"] = run.es_profiles;
      cell["found_feasible"] = run.es_found_feasible;
    }
    summary["solvers"][solver_name(run.solver)].push_back(cell);
  }

  {
    std::ofstream out(dir / "summary.json", std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open summary.json");
    out << summary.dump(2) << "\n";
  }
  {
    std::ofstream out(dir / "config.json", std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open config.json");
    out << config_to_json(bundle.config);
  }
}

}  // namespace vecrm
