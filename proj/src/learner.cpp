#include "vecrm/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vecrm/util.hpp"

namespace vecrm {

RegretState::RegretState(std::size_t player, std::size_t action_count,
                         AveragingMode mode, double lambda)
    : player_(player), action_count_(action_count), mode_(mode), lambda_(lambda) {
  if (action_count_ == 0) throw std::invalid_argument("regret state: empty action set");
  if (mode_ == AveragingMode::kForgetting && !(lambda_ >= 0.0 && lambda_ <= 1.0)) {
    throw ConfigError("learner: forgetting factor must lie in [0, 1]");
  }
  average_regret_.assign(action_count_ * action_count_, 0.0);
  strategy_.assign(action_count_, 1.0 / static_cast<double>(action_count_));
}

void RegretState::update_regret(std::span<const double> action_utilities,
                                std::size_t chosen) {
  if (action_utilities.size() != action_count_) {
    throw std::invalid_argument("regret update: one utility per action required");
  }
  if (chosen >= action_count_) {
    throw std::invalid_argument("regret update: chosen action out of range");
  }
  ++round_;
  const double keep = mode_ == AveragingMode::kForgetting
                          ? lambda_
                          : 1.0 - 1.0 / static_cast<double>(round_);
  const double step = 1.0 - keep;
  const double chosen_utility = action_utilities[chosen];
  for (std::size_t j = 0; j < action_count_; ++j) {
    for (std::size_t k = 0; k < action_count_; ++k) {
      const std::size_t idx = j * action_count_ + k;
      // Unplayed rows carry zero instantaneous regret and only decay.
      const double instant =
          (j == chosen && k != chosen) ? action_utilities[k] - chosen_utility : 0.0;
      average_regret_[idx] = keep * average_regret_[idx] + step * instant;
    }
  }
  last_action_ = chosen;
}

void RegretState::update_strategy(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("strategy update: mu must be positive");
  const std::size_t j = last_action_;
  double switch_mass = 0.0;
  for (std::size_t k = 0; k < action_count_; ++k) {
    if (k == j) continue;
    const double positive = std::max(regret(j, k), 0.0);
    strategy_[k] = positive / mu;
    switch_mass += strategy_[k];
  }
  strategy_[j] = std::max(1.0 - switch_mass, 0.0);
}

double RegretState::mu_for(const MuRule& rule) const {
  const std::size_t j = last_action_;
  double max_positive = 0.0;
  for (std::size_t k = 0; k < action_count_; ++k) {
    if (k != j) max_positive = std::max(max_positive, regret(j, k));
  }
  return std::max(rule.min_value,
                  rule.c * static_cast<double>(action_count_) * max_positive);
}

std::size_t RegretState::sample_action(std::mt19937_64& rng) const {
  // Explicit inverse-CDF walk in action order keeps sampling portable.
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  double cum = 0.0;
  for (std::size_t k = 0; k < action_count_; ++k) {
    cum += strategy_[k];
    if (r < cum) return k;
  }
  return action_count_ - 1;
}

double lyapunov_potential(const RegretState& state) {
  double sum = 0.0;
  const std::size_t n = state.action_count();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (j == k) continue;
      const double positive = std::max(state.regret(j, k), 0.0);
      sum += positive * positive;
    }
  }
  return 0.5 * sum;
}

EmpiricalDistribution::EmpiricalDistribution(AveragingMode mode, double lambda)
    : mode_(mode), lambda_(lambda) {}

void EmpiricalDistribution::record(const JointAction& actions) {
  ++rounds_;
  if (mode_ == AveragingMode::kHarmonic) {
    weight_[actions] += 1.0;
    return;
  }
  if (lambda_ == 0.0) {
    weight_.clear();
    scale_ = 1.0;
    weight_[actions] = 1.0;
    return;
  }
  // weight * scale is the true mass; scaling avoids touching every entry.
  scale_ *= lambda_;
  weight_[actions] += (1.0 - lambda_) / scale_;
  if (scale_ < 1e-280) compact();
}

void EmpiricalDistribution::compact() {
  std::map<JointAction, double> rescaled;
  for (const auto& [a, w] : weight_) {
    const double mass = w * scale_;
    if (mass > 1e-300) rescaled[a] = mass;
  }
  weight_ = std::move(rescaled);
  scale_ = 1.0;
}

double EmpiricalDistribution::mass(const JointAction& actions) const {
  auto it = weight_.find(actions);
  if (it == weight_.end()) return 0.0;
  if (mode_ == AveragingMode::kHarmonic) {
    return rounds_ == 0 ? 0.0 : it->second / static_cast<double>(rounds_);
  }
  return it->second * scale_;
}

double EmpiricalDistribution::total_mass() const {
  if (mode_ == AveragingMode::kHarmonic) {
    return rounds_ == 0 ? 0.0 : 1.0;
  }
  double sum = 0.0;
  for (const auto& [_, w] : weight_) sum += w;
  return sum * scale_;
}

JointDistribution EmpiricalDistribution::normalized() const {
  const double sum = total_mass();
  if (!(sum > 0.0)) {
    throw std::invalid_argument("empirical distribution: nothing recorded yet");
  }
  JointDistribution out;
  if (mode_ == AveragingMode::kHarmonic) {
    for (const auto& [a, w] : weight_) {
      out.add(a, w / static_cast<double>(rounds_));
    }
    return out;
  }
  for (const auto& [a, w] : weight_) out.add(a, w * scale_ / sum);
  return out;
}

std::vector<std::mt19937_64> make_player_rngs(std::size_t players,
                                              std::uint64_t master_seed) {
  std::vector<std::mt19937_64> rngs;
  rngs.reserve(players);
  for (std::size_t i = 0; i < players; ++i) {
    rngs.emplace_back(splitmix64(master_seed ^ (0x51a9b1c7u + i)));
  }
  return rngs;
}

RoundRecord run_round(Game& game, std::vector<RegretState>& states, int round,
                      std::vector<std::mt19937_64>& player_rngs,
                      const MuRule& mu_rule, int threads) {
  const std::size_t players = game.player_count();
  game.begin_round(round);

  RoundRecord record;
  record.actions.resize(players);
  for (std::size_t i = 0; i < players; ++i) {
    record.actions[i] = states[i].sample_action(player_rngs[i]);
  }

  record.utilities.assign(players, 0.0);
  game.realized_utilities(record.actions, record.utilities);
  record.objective = 0.0;
  for (double u : record.utilities) record.objective -= u;
  record.feasible = game.feasible(record.actions);

  record.lyapunov.assign(players, 0.0);
  // Every player sees the same broadcast profile; updates are independent.
  parallel_for(players, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> buf;
    for (std::size_t i = begin; i < end; ++i) {
      buf.assign(states[i].action_count(), 0.0);
      game.counterfactual_utilities(i, record.actions, buf);
      states[i].update_regret(buf, record.actions[i]);
      states[i].update_strategy(states[i].mu_for(mu_rule));
      record.lyapunov[i] = lyapunov_potential(states[i]);
    }
  });
  return record;
}

ExperimentTrace run_learning(Game& game, const LearnerConfig& config,
                             std::uint64_t master_seed) {
  if (config.rounds < 1) throw ConfigError("learner: rounds must be >= 1");
  if (config.mode == AveragingMode::kForgetting &&
      !(config.lambda >= 0.0 && config.lambda <= 1.0)) {
    throw ConfigError("learner: forgetting factor must lie in [0, 1]");
  }
  const std::size_t players = game.player_count();
  std::vector<RegretState> states;
  states.reserve(players);
  for (std::size_t i = 0; i < players; ++i) {
    states.emplace_back(i, game.action_count(i), config.mode, config.lambda);
  }
  auto rngs = make_player_rngs(players, master_seed);

  ExperimentTrace trace;
  trace.empirical = EmpiricalDistribution(config.mode, config.lambda);
  trace.rounds.reserve(static_cast<std::size_t>(config.rounds));
  for (int r = 1; r <= config.rounds; ++r) {
    RoundRecord record = run_round(game, states, r, rngs, config.mu, config.threads);
    trace.empirical.record(record.actions);
    trace.rounds.push_back(std::move(record));
  }
  return trace;
}

}  // namespace vecrm
