#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "vecrm/game.hpp"

namespace vecrm {

enum class AveragingMode { kForgetting, kHarmonic };

// Stay-probability scaling: mu = max(min_value, c * action_count * max positive
// regret). With c >= 1 the switch mass stays below 1 and the played action
// always keeps positive probability.
struct MuRule {
  double c = 1.0;
  double min_value = 1.0;
};

// Per-player average regret matrix and mixed strategy.
class RegretState {
 public:
  RegretState(std::size_t player, std::size_t action_count, AveragingMode mode,
              double lambda);

  std::size_t player() const { return player_; }
  std::size_t action_count() const { return action_count_; }
  AveragingMode mode() const { return mode_; }
  double lambda() const { return lambda_; }
  int round() const { return round_; }

  double regret(std::size_t j, std::size_t k) const {
    return average_regret_[j * action_count_ + k];
  }
  void set_regret(std::size_t j, std::size_t k, double value) {
    average_regret_[j * action_count_ + k] = value;
  }

  const std::vector<double>& strategy() const { return strategy_; }
  std::size_t last_action() const { return last_action_; }

  // Folds one round of play into the average: the played row receives the
  // utility differences, every other row receives zero instantaneous regret.
  void update_regret(std::span<const double> action_utilities, std::size_t chosen);

  // Recomputes the strategy from the played row with the given scaling.
  void update_strategy(double mu);

  double mu_for(const MuRule& rule) const;

  std::size_t sample_action(std::mt19937_64& rng) const;

 private:
  std::size_t player_;
  std::size_t action_count_;
  AveragingMode mode_;
  double lambda_;
  int round_ = 0;                       // completed regret updates
  std::size_t last_action_ = 0;
  std::vector<double> average_regret_;  // [j * action_count + k]
  std::vector<double> strategy_;
};

// Half the squared distance from the average regret matrix to the
// nonpositive orthant.
double lyapunov_potential(const RegretState& state);

// Weighted occupation measure over joint actions. Forgetting mode applies the
// same geometric weights as the regret average; harmonic mode counts plainly.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution(AveragingMode mode, double lambda);

  void record(const JointAction& actions);
  double mass(const JointAction& actions) const;
  double total_mass() const;
  JointDistribution normalized() const;
  int rounds() const { return rounds_; }

 private:
  void compact();

  AveragingMode mode_;
  double lambda_;
  int rounds_ = 0;
  double scale_ = 1.0;
  std::map<JointAction, double> weight_;
};

struct RoundRecord {
  JointAction actions;
  std::vector<double> utilities;  // realized, per player
  double objective = 0.0;         // negated utility sum
  std::vector<double> lyapunov;   // per player, after the update
  bool feasible = false;
};

struct ExperimentTrace {
  std::vector<RoundRecord> rounds;
  EmpiricalDistribution empirical{AveragingMode::kForgetting, 0.5};
};

struct LearnerConfig {
  int rounds = 2000;
  AveragingMode mode = AveragingMode::kForgetting;
  double lambda = 0.5;      // ignored in harmonic mode
  MuRule mu;
  int threads = 1;
};

// One synchronized round: every player samples from its current strategy, the
// realized profile is shared, and each player updates regrets and strategy
// from its counterfactual utilities.
RoundRecord run_round(Game& game, std::vector<RegretState>& states, int round,
                      std::vector<std::mt19937_64>& player_rngs,
                      const MuRule& mu_rule, int threads = 1);

// Full learning run with uniform initial strategies and zero regrets. Player
// RNG streams derive from the master seed alone, so results are identical at
// any thread count.
ExperimentTrace run_learning(Game& game, const LearnerConfig& config,
                             std::uint64_t master_seed);

std::vector<std::mt19937_64> make_player_rngs(std::size_t players,
                                              std::uint64_t master_seed);

}  // namespace vecrm
