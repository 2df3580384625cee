#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"

#include "fixture.hpp"
#include "vecrm/game.hpp"
#include "vecrm/learner.hpp"
#include "vecrm/util.hpp"

using namespace vecrm;
using vecrm::testing::tiny_scenario;

TEST_CASE("forgetting regret update blends old average and fresh difference") {
  RegretState s(0, 2, AveragingMode::kForgetting, 0.5);
  s.set_regret(0, 1, 2.0);
  const double u[] = {0.0, 4.0};  // switching 0 -> 1 would have gained 4
  s.update_regret(u, 0);
  CHECK(s.regret(0, 1) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("forgetting factor 1 is pure memory") {
  RegretState s(0, 2, AveragingMode::kForgetting, 1.0);
  s.set_regret(0, 1, 2.0);
  const double u[] = {0.0, 100.0};
  s.update_regret(u, 0);
  CHECK(s.regret(0, 1) == 2.0);
}

TEST_CASE("harmonic averaging overwrites everything at round one") {
  RegretState s(0, 2, AveragingMode::kHarmonic, 0.0);
  s.set_regret(0, 1, 99.0);
  const double u[] = {1.0, 5.0};
  s.update_regret(u, 0);
  CHECK(s.regret(0, 1) == doctest::Approx(4.0).epsilon(1e-15));

  // Round two weighs both rounds equally.
  const double u2[] = {1.0, 3.0};
  s.update_regret(u2, 0);
  CHECK(s.regret(0, 1) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("unplayed rows only decay") {
  RegretState s(0, 3, AveragingMode::kForgetting, 0.5);
  s.set_regret(1, 0, 6.0);
  const double u[] = {0.0, 1.0, 2.0};
  s.update_regret(u, 0);  // row 1 was not played
  CHECK(s.regret(1, 0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(s.regret(0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.regret(0, 0) == 0.0);
}

TEST_CASE("strategy update from the played row") {
  RegretState s(0, 3, AveragingMode::kForgetting, 0.5);
  s.set_regret(0, 1, 3.0);
  s.set_regret(0, 2, -1.0);
  s.update_strategy(10.0);
  CHECK(s.strategy()[0] == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(s.strategy()[1] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(s.strategy()[2] == 0.0);

  SUBCASE("doubling mu halves the switching mass") {
    s.update_strategy(20.0);
    CHECK(s.strategy()[1] == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(s.strategy()[0] == doctest::Approx(0.85).epsilon(1e-15));
  }
}

TEST_CASE("no positive regret means repeating the action surely") {
  RegretState s(0, 4, AveragingMode::kForgetting, 0.5);
  s.set_regret(0, 1, -2.0);
  s.set_regret(0, 3, -0.5);
  s.update_strategy(5.0);
  CHECK(s.strategy()[0] == 1.0);
  CHECK(s.strategy()[1] == 0.0);
  CHECK(s.strategy()[2] == 0.0);
  CHECK(s.strategy()[3] == 0.0);
}

TEST_CASE("strategies always sum to one") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> reg(-5.0, 5.0);
  RegretState s(0, 5, AveragingMode::kForgetting, 0.9);
  for (int trial = 0; trial < 200; ++trial) {
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t k = 0; k < 5; ++k) {
        if (j != k) s.set_regret(j, k, reg(rng));
      }
    }
    s.update_strategy(s.mu_for(MuRule{}));
    double sum = 0.0;
    for (double p : s.strategy()) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mu rule scales with the largest positive regret") {
  RegretState s(0, 3, AveragingMode::kForgetting, 0.5);
  s.set_regret(0, 1, 3.0);
  s.set_regret(0, 2, -1.0);
  CHECK(s.mu_for(MuRule{1.0, 1.0}) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(s.mu_for(MuRule{2.0, 1.0}) == doctest::Approx(18.0).epsilon(1e-15));

  RegretState calm(0, 3, AveragingMode::kForgetting, 0.5);
  calm.set_regret(0, 1, -3.0);
  CHECK(calm.mu_for(MuRule{1.0, 1.0}) == 1.0);  // floor
}

TEST_CASE("sampling follows the strategy") {
  RegretState s(0, 3, AveragingMode::kForgetting, 0.5);
  s.set_regret(0, 1, 3.0);
  s.set_regret(0, 2, -1.0);
  s.update_strategy(10.0);  // {0.7, 0.3, 0}
  std::mt19937_64 rng(2024);
  int counts[3] = {0, 0, 0};
  const int n = 20000;
  for (int i = 0; i < n; ++i) counts[s.sample_action(rng)]++;
  CHECK(counts[0] / static_cast<double>(n) == doctest::Approx(0.7).epsilon(0.03));
  CHECK(counts[1] / static_cast<double>(n) == doctest::Approx(0.3).epsilon(0.07));
  CHECK(counts[2] == 0);
}

TEST_CASE("initial strategy is uniform") {
  RegretState s(0, 3, AveragingMode::kForgetting, 0.5);
  for (double p : s.strategy()) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("lyapunov potential is half the squared positive part") {
  RegretState s(0, 2, AveragingMode::kForgetting, 0.5);
  s.set_regret(0, 1, 3.0);
  s.set_regret(1, 0, -1.0);
  CHECK(lyapunov_potential(s) == doctest::Approx(4.5).epsilon(1e-15));

  RegretState calm(0, 3, AveragingMode::kForgetting, 0.5);
  calm.set_regret(0, 1, -2.0);
  CHECK(lyapunov_potential(calm) == 0.0);
}

TEST_CASE("lyapunov potential equals the distance to the negative orthant") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> reg(-4.0, 4.0);
  RegretState s(0, 4, AveragingMode::kForgetting, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    double expect = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 4; ++k) {
        if (j == k) continue;
        const double v = reg(rng);
        s.set_regret(j, k, v);
        // Projection onto the orthant clamps each coordinate independently.
        const double excess = std::max(v, 0.0);
        expect += 0.5 * excess * excess;
      }
    }
    CHECK(lyapunov_potential(s) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("forgetting empirical weights follow the recursive blend") {
  const double lambda = 0.9;
  EmpiricalDistribution e(AveragingMode::kForgetting, lambda);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> pick(0, 2);
  std::map<JointAction, double> phi;  // direct recursion
  std::vector<JointAction> seen;
  for (int t = 0; t < 60; ++t) {
    JointAction a{pick(rng), pick(rng)};
    e.record(a);
    for (auto& [key, w] : phi) w *= lambda;
    phi[a] += 1.0 - lambda;
    seen.push_back(a);
  }
  for (const JointAction& a : seen) {
    CHECK(e.mass(a) == doctest::Approx(phi[a]).epsilon(1e-12));
  }
  CHECK(e.total_mass() == doctest::Approx(1.0 - std::pow(lambda, 60)).epsilon(1e-12));
  const JointDistribution d = e.normalized();
  CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero forgetting factor keeps a point mass on the last profile") {
  EmpiricalDistribution e(AveragingMode::kForgetting, 0.0);
  e.record({0, 1});
  e.record({1, 1});
  CHECK(e.mass({1, 1}) == 1.0);
  CHECK(e.mass({0, 1}) == 0.0);
}

TEST_CASE("harmonic empirical weights are plain frequencies") {
  EmpiricalDistribution e(AveragingMode::kHarmonic, 0.0);
  e.record({0});
  e.record({0});
  e.record({1});
  e.record({2});
  CHECK(e.mass({0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.mass({1}) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(e.total_mass() == 1.0);
}

TEST_CASE("long forgetting runs survive the rescaling") {
  // lambda^20000 underflows any double; the mass bookkeeping must not.
  EmpiricalDistribution e(AveragingMode::kForgetting, 0.5);
  for (int t = 0; t < 20000; ++t) e.record({static_cast<std::size_t>(t % 3)});
  CHECK(e.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isfinite(e.mass({0})));
  const JointDistribution d = e.normalized();
  CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bad learner parameters are rejected") {
  CHECK_THROWS_AS(RegretState(0, 2, AveragingMode::kForgetting, 1.5), ConfigError);
  CHECK_THROWS_AS(RegretState(0, 2, AveragingMode::kForgetting, -0.1), ConfigError);
  RegretState s(0, 2, AveragingMode::kForgetting, 0.5);
  CHECK_THROWS_AS(s.update_strategy(0.0), std::invalid_argument);
  const double u[] = {1.0};
  CHECK_THROWS_AS(s.update_regret(u, 0), std::invalid_argument);

  const Scenario sc = tiny_scenario();
  VecGame game(sc, GameSpec{});
  LearnerConfig bad;
  bad.rounds = 0;
  CHECK_THROWS_AS(run_learning(game, bad, 1), ConfigError);
  LearnerConfig bad_lambda;
  bad_lambda.lambda = 2.0;
  CHECK_THROWS_AS(run_learning(game, bad_lambda, 1), ConfigError);
}

TEST_CASE("runs are identical at any thread count") {
  ScenarioConfig cfg;
  cfg.radio = RadioParams{-110.0, 2.0, 1.0, 0.0};
  const Scenario s = build_scenario(cfg, 3);
  LearnerConfig lc;
  lc.rounds = 200;

  VecGame g1(s, GameSpec{});
  lc.threads = 1;
  const ExperimentTrace a = run_learning(g1, lc, 99);

  VecGame g4(s, GameSpec{});
  lc.threads = 4;
  const ExperimentTrace b = run_learning(g4, lc, 99);

  REQUIRE(a.rounds.size() == b.rounds.size());
  for (std::size_t r = 0; r < a.rounds.size(); ++r) {
    CHECK(a.rounds[r].actions == b.rounds[r].actions);
    CHECK(a.rounds[r].utilities == b.rounds[r].utilities);
    CHECK(a.rounds[r].lyapunov == b.rounds[r].lyapunov);
    CHECK(a.rounds[r].objective == b.rounds[r].objective);
  }
}

TEST_CASE("different seeds explore differently") {
  const Scenario s = tiny_scenario(4);
  VecGame g(s, GameSpec{});
  LearnerConfig lc;
  lc.rounds = 20;
  const ExperimentTrace a = run_learning(g, lc, 1);
  const ExperimentTrace b = run_learning(g, lc, 2);
  bool differs = false;
  for (std::size_t r = 0; r < a.rounds.size() && !differs; ++r) {
    differs = a.rounds[r].actions != b.rounds[r].actions;
  }
  CHECK(differs);
}

TEST_CASE("a strictly dominant profile absorbs the play") {
  // Each player's action 0 strictly dominates regardless of the opponent.
  MatrixGame g({2, 2}, {{1.0, 1.0, 0.0, 0.0}, {1.0, 0.0, 1.0, 0.0}});
  LearnerConfig lc;
  lc.rounds = 400;
  lc.lambda = 0.5;
  const ExperimentTrace trace = run_learning(g, lc, 5);

  const JointAction best{0, 0};
  CHECK(trace.rounds.back().actions == best);
  const JointDistribution dist = trace.empirical.normalized();
  CHECK(dist.mass(best) > 0.9);
  CHECK(is_correlated_equilibrium(g, dist, 0.05).is_ce);
  // Late-round regrets leave no incentive to move.
  CHECK(trace.rounds.back().lyapunov[0] <= 1e-6);
  CHECK(trace.rounds.back().lyapunov[1] <= 1e-6);
}

TEST_CASE("round records carry the realized payoffs and objective") {
  const Scenario s = tiny_scenario(3);
  VecGame g(s, GameSpec{});
  LearnerConfig lc;
  lc.rounds = 30;
  const ExperimentTrace trace = run_learning(g, lc, 11);
  CHECK(trace.rounds.size() == 30);
  for (const RoundRecord& r : trace.rounds) {
    REQUIRE(r.actions.size() == 3);
    REQUIRE(r.utilities.size() == 3);
    double sum = 0.0;
    for (double u : r.utilities) sum += u;
    CHECK(r.objective == doctest::Approx(-sum).epsilon(1e-12));
    CHECK(r.feasible == g.feasible(r.actions));
  }
}
