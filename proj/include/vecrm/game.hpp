#pragma once

#include <map>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "vecrm/problem.hpp"

namespace vecrm {

struct GameSpec {
  double beta = 1.0;
  double gamma = 1.0;
  double penalty = 1e6;  // must dominate every feasible per-task delay + cost
};

enum class ClockMode { kSnapshot, kMobile };

// Stage game replayed every learning round. Implementations must be
// deterministic functions of (round, joint action).
class Game {
 public:
  virtual ~Game() = default;

  virtual std::size_t player_count() const = 0;
  virtual std::size_t action_count(std::size_t player) const = 0;

  // Advances the environment clock; called once per round before any utility.
  virtual void begin_round(int /*round*/) {}

  virtual double utility(std::size_t player, const JointAction& actions) const = 0;

  // out[k] = utility the player would get by switching to k, others fixed.
  virtual void counterfactual_utilities(std::size_t player, const JointAction& actions,
                                        std::span<double> out) const;

  virtual void realized_utilities(const JointAction& actions,
                                  std::span<double> out) const;

  // Full-problem feasibility and social objective; the defaults suit abstract
  // games where every profile is admissible.
  virtual bool feasible(const JointAction& /*actions*/) const { return true; }
  virtual double objective(const JointAction& actions) const;
};

// Offloading game on a scenario: actions are target nodes, utilities are
// negated delay-plus-cost, infeasible placements earn a flat penalty.
class VecGame final : public Game {
 public:
  VecGame(const Scenario& scenario, const GameSpec& spec,
          ClockMode clock = ClockMode::kSnapshot, double t0 = 0.0, double dt = 1.0);

  std::size_t player_count() const override { return scenario_->vehicles.size(); }
  std::size_t action_count(std::size_t) const override { return scenario_->nodes.size(); }

  void begin_round(int round) override;
  void set_time(double t);
  double current_time() const { return time_; }

  double utility(std::size_t player, const JointAction& actions) const override;
  void counterfactual_utilities(std::size_t player, const JointAction& actions,
                                std::span<double> out) const override;
  void realized_utilities(const JointAction& actions,
                          std::span<double> out) const override;

  bool feasible(const JointAction& actions) const override;
  double objective(const JointAction& actions) const override;

  const Scenario& scenario() const { return *scenario_; }
  const GameSpec& spec() const { return spec_; }

 private:
  void rebuild_tables();
  double load_at(NodeId node, const JointAction& actions) const;
  double penalty_utility() const { return -(spec_.beta + spec_.gamma) * spec_.penalty; }

  const Scenario* scenario_;
  GameSpec spec_;
  ClockMode clock_;
  double t0_;
  double dt_;
  double time_ = 0.0;
  bool tables_ready_ = false;

  // Per-player candidate tables at the current clock; only capacity coupling
  // remains profile-dependent.
  std::vector<NodeId> serving_;
  std::vector<std::vector<double>> value_;        // beta*delay + gamma*cost
  std::vector<std::vector<bool>> placement_ok_;   // deadline met, delay bounded
};

// Dense normal-form game for experiments and tests; utilities indexed by the
// mixed-radix rank of the joint action.
class MatrixGame final : public Game {
 public:
  MatrixGame(std::vector<std::size_t> action_counts,
             std::vector<std::vector<double>> utilities);

  // Independent uniform payoffs in [0, 1).
  static MatrixGame random(std::size_t players, std::size_t actions,
                           std::uint64_t seed);

  std::size_t player_count() const override { return action_counts_.size(); }
  std::size_t action_count(std::size_t player) const override {
    return action_counts_.at(player);
  }
  double utility(std::size_t player, const JointAction& actions) const override;

  std::size_t profile_count() const { return profile_count_; }
  double utility_range() const;

 private:
  std::size_t rank(const JointAction& actions) const;

  std::vector<std::size_t> action_counts_;
  std::vector<std::vector<double>> utilities_;  // [player][profile rank]
  std::size_t profile_count_ = 0;
};

// Sparse probability mass over joint actions.
class JointDistribution {
 public:
  void add(const JointAction& actions, double mass);
  double mass(const JointAction& actions) const;
  double total() const;
  JointDistribution normalized() const;

  const std::map<JointAction, double>& support() const { return mass_; }

 private:
  std::map<JointAction, double> mass_;
};

struct CeCheck {
  bool is_ce = false;
  double worst_gain = 0.0;  // largest expected deviation gain over (i, j, k)
};

// Tests every conditional swap j -> k against the distribution; passes when no
// player can gain more than epsilon. The distribution must sum to 1 (1e-9).
CeCheck is_correlated_equilibrium(const Game& game, const JointDistribution& dist,
                                  double epsilon);

}  // namespace vecrm
