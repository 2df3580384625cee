// Experiment runner: loads a config (file or embedded preset), applies flag
// overrides, runs the selected solvers over the selected seeds and writes the
// trace/summary/config bundle to the output directory.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "vecrm/baselines.hpp"
#include "vecrm/harness.hpp"
#include "vecrm/util.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitEnumerationCap = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in.good() && !in.eof()) throw std::ios_base::failure("cannot read " + path);
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicular edge task-offloading experiments"};

  std::string config_path;
  std::string preset;
  std::vector<std::string> solver_names;
  std::vector<std::uint64_t> seeds;
  int rounds = -1;
  double lambda = -1.0;
  std::string mode;
  std::string out_dir;
  int threads = 0;
  bool print_config = false;
  bool dump_scenario = false;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--preset", preset, "Embedded preset: scenario1 or scenario2")
      ->check(CLI::IsMember({"scenario1", "scenario2"}));
  app.add_option("--solver", solver_names, "Solver to run: rm, trm or es (repeatable)");
  app.add_option("--seed", seeds, "Scenario seed (repeatable)");
  app.add_option("--rounds", rounds, "Learning rounds")->check(CLI::PositiveNumber);
  app.add_option("--lambda", lambda, "Forgetting factor in [0, 1]");
  app.add_option("--mode", mode, "Environment clock: snapshot or mobile")
      ->check(CLI::IsMember({"snapshot", "mobile"}));
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--print-config", print_config, "Print the resolved config and exit");
  app.add_flag("--dump-scenario", dump_scenario,
               "Also write scenario_<seed>.json per seed");

  CLI11_PARSE(app, argc, argv);

  try {
    vecrm::ExperimentConfig config;
    if (!config_path.empty() && !preset.empty()) {
      throw vecrm::ConfigError("--config and --preset are mutually exclusive");
    }
    if (!config_path.empty()) {
      config = vecrm::config_from_json(read_file(config_path));
    } else if (preset == "scenario2") {
      config = vecrm::scenario2_preset();
    } else {
      config = vecrm::scenario1_preset();
    }

    if (!solver_names.empty()) {
      config.solvers.clear();
      for (const std::string& name : solver_names) {
        config.solvers.push_back(vecrm::solver_from_name(name));
      }
    }
    if (!seeds.empty()) config.seeds = seeds;
    if (rounds > 0) config.learner.rounds = rounds;
    if (lambda >= 0.0) config.learner.lambda = lambda;
    if (mode == "snapshot") config.learner.clock = vecrm::ClockMode::kSnapshot;
    if (mode == "mobile") config.learner.clock = vecrm::ClockMode::kMobile;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (threads > 0) config.threads = threads;

    vecrm::validate_config(config);

    if (print_config) {
      std::cout << vecrm::config_to_json(config);
      return 0;
    }

    vecrm::ResultsBundle bundle = vecrm::run_experiment(config);
    vecrm::emit_outputs(bundle, config.output_dir);

    if (dump_scenario) {
      for (std::uint64_t seed : config.seeds) {
        const vecrm::Scenario s = vecrm::build_scenario(config.scenario, seed);
        const std::string path =
            config.output_dir + "/scenario_" + std::to_string(seed) + ".json";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::ios_base::failure("cannot open " + path);
        out << vecrm::scenario_to_json(s);
      }
    }

    std::cerr << "wrote " << bundle.runs.size() << " run(s) to " << config.output_dir
              << "\n";
    return 0;
  } catch (const vecrm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const vecrm::EnumerationCapExceeded& e) {
    std::cerr << "enumeration error: " << e.what() << "\n";
    return kExitEnumerationCap;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
