#include "vecrm/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vecrm/channel.hpp"
#include "vecrm/compute_model.hpp"
#include "vecrm/util.hpp"

namespace vecrm {

namespace {

// Largest delay-plus-cost any feasible placement can reach, from geometry and
// price extremes. Placements with a deadline are bounded by the deadline
// itself; deadline-free ones (BS processing) by the worst uplink.
double feasible_value_bound(const Scenario& s, const GameSpec& spec) {
  double max_size = 0.0, max_cycles = 0.0, min_power = std::numeric_limits<double>::infinity();
  double max_lane_y = 0.0;
  for (const Vehicle& v : s.vehicles) {
    max_size = std::max(max_size, v.task.size_mb);
    max_cycles = std::max(max_cycles, v.task.cycles_gcycles);
    min_power = std::min(min_power, v.transmit_power_dbm);
    max_lane_y = std::max(max_lane_y, v.lane * s.lane_width_m);
  }
  double min_alloc = std::numeric_limits<double>::infinity();
  double max_proc_cost = 0.0;
  for (NodeId n = 0; n < s.nodes.size(); ++n) {
    for (VehicleId i = 0; i < s.vehicles.size(); ++i) {
      min_alloc = std::min(min_alloc, s.allocated_ghz[n][i]);
      max_proc_cost = std::max(max_proc_cost,
                               s.nodes[n].compute_price_per_ghz * s.allocated_ghz[n][i]);
    }
  }

  int max_hops = 0;
  for (NodeId a = 0; a < s.nodes.size(); ++a) {
    for (NodeId b = 0; b < s.nodes.size(); ++b) {
      max_hops = std::max(max_hops, hop_count(s.backhaul, a, b));
    }
  }

  double min_rate = std::numeric_limits<double>::infinity();
  for (const Node& n : s.nodes) {
    // An RSU only serves vehicles inside its coverage; the BS can serve from
    // anywhere on the highway.
    const double axial = n.is_rsu() ? n.coverage_radius_m
                                    : std::max(n.axial_position_m,
                                               s.highway_length_m - n.axial_position_m);
    const double d = std::hypot(axial, max_lane_y + n.perpendicular_offset_m);
    const double rate = shannon_rate_mbps(n.bandwidth_mhz, min_power,
                                          path_gain(d, s.radio), n.noise_dbm);
    min_rate = std::min(min_rate, rate);
  }

  double max_delay;
  if (min_rate > 0.0) {
    // BS processing carries no deadline, so the raw worst-case path bounds it.
    const double upload = 8.0 * max_size / min_rate;
    const double migration = 8.0 * max_size / s.backhaul.wired_bandwidth_mbps +
                             2.0 * s.backhaul.hop_delay_s * max_hops;
    const double processing = max_cycles / min_alloc;
    max_delay = upload + migration + processing;
  } else {
    max_delay = std::numeric_limits<double>::infinity();
  }

  double max_upload_cost = 0.0;
  for (const Node& n : s.nodes) {
    max_upload_cost = std::max(max_upload_cost,
                               n.upload_price_per_mhz * n.bandwidth_mhz);
  }
  const double max_cost = max_upload_cost +
                          s.backhaul.migration_price_per_mb *
                              s.backhaul.service_entity_size_mb +
                          max_proc_cost;
  return spec.beta * max_delay + spec.gamma * max_cost;
}

}  // namespace

void Game::counterfactual_utilities(std::size_t player, const JointAction& actions,
                                    std::span<double> out) const {
  JointAction probe = actions;
  for (std::size_t k = 0; k < action_count(player); ++k) {
    probe[player] = k;
    out[k] = utility(player, probe);
  }
}

void Game::realized_utilities(const JointAction& actions, std::span<double> out) const {
  for (std::size_t i = 0; i < player_count(); ++i) out[i] = utility(i, actions);
}

double Game::objective(const JointAction& actions) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < player_count(); ++i) sum += utility(i, actions);
  return -sum;
}

VecGame::VecGame(const Scenario& scenario, const GameSpec& spec, ClockMode clock,
                 double t0, double dt)
    : scenario_(&scenario), spec_(spec), clock_(clock), t0_(t0), dt_(dt), time_(t0) {
  if (!(spec_.beta > 0.0) || !(spec_.gamma > 0.0)) {
    throw ConfigError("game: beta and gamma must be positive");
  }
  if (!(spec_.penalty > 0.0)) throw ConfigError("game: penalty must be positive");
  const double bound = feasible_value_bound(scenario, spec);
  if (!(spec_.penalty > bound) ||
      !((spec_.beta + spec_.gamma) * spec_.penalty > bound)) {
    throw ConfigError(
        "game: penalty " + std::to_string(spec_.penalty) +
        " does not dominate the feasible delay+cost bound " + std::to_string(bound) +
        "; raise game.penalty");
  }
  rebuild_tables();
}

void VecGame::set_time(double t) {
  if (tables_ready_ && t == time_) return;
  time_ = t;
  rebuild_tables();
}

void VecGame::begin_round(int round) {
  const double t = clock_ == ClockMode::kSnapshot
                       ? t0_
                       : t0_ + dt_ * static_cast<double>(round - 1);
  set_time(t);
}

void VecGame::rebuild_tables() {
  const Scenario& s = *scenario_;
  const std::size_t players = s.vehicles.size();
  const std::size_t actions = s.nodes.size();
  serving_.assign(players, 0);
  value_.assign(players, std::vector<double>(actions, 0.0));
  placement_ok_.assign(players, std::vector<bool>(actions, false));

  for (VehicleId i = 0; i < players; ++i) {
    const NodeId serving = serving_node(s, i, time_);
    serving_[i] = serving;
    const double rate = data_rate_mbps(s, s.nodes[serving], s.vehicles[i], time_);
    for (NodeId k = 0; k < actions; ++k) {
      const DelayBreakdown d = delay_breakdown_with_rate(s, i, serving, k, rate);
      const CostBreakdown c = cost_breakdown(s, i, serving, k);
      const double deadline = mobility_deadline_s(s, i, serving, k, time_);
      placement_ok_[i][k] = !d.unbounded && d.total_s <= deadline;
      value_[i][k] = spec_.beta * d.total_s + spec_.gamma * c.total;
    }
  }
  tables_ready_ = true;
}

double VecGame::load_at(NodeId node, const JointAction& actions) const {
  double load = 0.0;
  for (VehicleId i = 0; i < actions.size(); ++i) {
    if (actions[i] == node) load += scenario_->allocated_ghz[node][i];
  }
  return load;
}

double VecGame::utility(std::size_t player, const JointAction& actions) const {
  const NodeId target = actions[player];
  const bool ok = placement_ok_[player][target] &&
                  load_at(target, actions) <= scenario_->nodes[target].capacity_cap_ghz;
  return ok ? -value_[player][target] : penalty_utility();
}

void VecGame::counterfactual_utilities(std::size_t player, const JointAction& actions,
                                       std::span<double> out) const {
  const Scenario& s = *scenario_;
  const std::size_t actions_n = s.nodes.size();
  // Loads of everyone else; the player's own contribution moves with k.
  std::vector<double> load(actions_n, 0.0);
  for (VehicleId i = 0; i < actions.size(); ++i) {
    if (i == player) continue;
    load[actions[i]] += s.allocated_ghz[actions[i]][i];
  }
  for (NodeId k = 0; k < actions_n; ++k) {
    const bool ok = placement_ok_[player][k] &&
                    load[k] + s.allocated_ghz[k][player] <= s.nodes[k].capacity_cap_ghz;
    out[k] = ok ? -value_[player][k] : penalty_utility();
  }
}

void VecGame::realized_utilities(const JointAction& actions,
                                 std::span<double> out) const {
  const Scenario& s = *scenario_;
  std::vector<double> load(s.nodes.size(), 0.0);
  for (VehicleId i = 0; i < actions.size(); ++i) {
    load[actions[i]] += s.allocated_ghz[actions[i]][i];
  }
  for (VehicleId i = 0; i < actions.size(); ++i) {
    const NodeId target = actions[i];
    const bool ok = placement_ok_[i][target] &&
                    load[target] <= s.nodes[target].capacity_cap_ghz;
    out[i] = ok ? -value_[i][target] : penalty_utility();
  }
}

bool VecGame::feasible(const JointAction& actions) const {
  const Scenario& s = *scenario_;
  std::vector<double> load(s.nodes.size(), 0.0);
  for (VehicleId i = 0; i < actions.size(); ++i) {
    if (!placement_ok_[i][actions[i]]) return false;
    load[actions[i]] += s.allocated_ghz[actions[i]][i];
  }
  for (NodeId n = 0; n < s.nodes.size(); ++n) {
    if (load[n] > s.nodes[n].capacity_cap_ghz) return false;
  }
  return true;
}

double VecGame::objective(const JointAction& actions) const {
  const Scenario& s = *scenario_;
  std::vector<double> load(s.nodes.size(), 0.0);
  for (VehicleId i = 0; i < actions.size(); ++i) {
    load[actions[i]] += s.allocated_ghz[actions[i]][i];
  }
  double sum = 0.0;
  for (VehicleId i = 0; i < actions.size(); ++i) {
    const NodeId target = actions[i];
    const bool ok = placement_ok_[i][target] &&
                    load[target] <= s.nodes[target].capacity_cap_ghz;
    sum += ok ? value_[i][target] : (spec_.beta + spec_.gamma) * spec_.penalty;
  }
  return sum;
}

MatrixGame::MatrixGame(std::vector<std::size_t> action_counts,
                       std::vector<std::vector<double>> utilities)
    : action_counts_(std::move(action_counts)), utilities_(std::move(utilities)) {
  profile_count_ = 1;
  for (std::size_t n : action_counts_) {
    if (n == 0) throw std::invalid_argument("matrix game: empty action set");
    profile_count_ *= n;
  }
  if (utilities_.size() != action_counts_.size()) {
    throw std::invalid_argument("matrix game: one utility table per player required");
  }
  for (const auto& table : utilities_) {
    if (table.size() != profile_count_) {
      throw std::invalid_argument("matrix game: utility table size mismatch");
    }
  }
}

MatrixGame MatrixGame::random(std::size_t players, std::size_t actions,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t profiles = 1;
  for (std::size_t p = 0; p < players; ++p) profiles *= actions;
  std::vector<std::vector<double>> tables(players, std::vector<double>(profiles));
  for (auto& table : tables) {
    for (auto& v : table) v = u(rng);
  }
  return MatrixGame(std::vector<std::size_t>(players, actions), std::move(tables));
}

std::size_t MatrixGame::rank(const JointAction& actions) const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < action_counts_.size(); ++i) {
    r = r * action_counts_[i] + actions[i];
  }
  return r;
}

double MatrixGame::utility(std::size_t player, const JointAction& actions) const {
  return utilities_[player][rank(actions)];
}

double MatrixGame::utility_range() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& table : utilities_) {
    for (double v : table) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return hi - lo;
}

void JointDistribution::add(const JointAction& actions, double mass) {
  mass_[actions] += mass;
}

double JointDistribution::mass(const JointAction& actions) const {
  auto it = mass_.find(actions);
  return it == mass_.end() ? 0.0 : it->second;
}

double JointDistribution::total() const {
  double sum = 0.0;
  for (const auto& [_, m] : mass_) sum += m;
  return sum;
}

JointDistribution JointDistribution::normalized() const {
  const double sum = total();
  if (!(sum > 0.0)) {
    throw std::invalid_argument("joint distribution: cannot normalize zero mass");
  }
  JointDistribution out;
  for (const auto& [a, m] : mass_) out.add(a, m / sum);
  return out;
}

CeCheck is_correlated_equilibrium(const Game& game, const JointDistribution& dist,
                                  double epsilon) {
  if (std::abs(dist.total() - 1.0) > 1e-9) {
    throw std::invalid_argument("correlated equilibrium check: distribution must sum to 1");
  }
  CeCheck result;
  result.worst_gain = -std::numeric_limits<double>::infinity();
  std::vector<double> buf;
  for (std::size_t i = 0; i < game.player_count(); ++i) {
    const std::size_t n = game.action_count(i);
    // gains[j*n + k]: expected benefit of swapping recommendation j for k.
    std::vector<double> gains(n * n, 0.0);
    buf.assign(n, 0.0);
    for (const auto& [actions, p] : dist.support()) {
      if (p == 0.0) continue;
      const std::size_t j = actions[i];
      game.counterfactual_utilities(i, actions, buf);
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) gains[j * n + k] += p * (buf[k] - buf[j]);
      }
    }
    for (double g : gains) result.worst_gain = std::max(result.worst_gain, g);
  }
  result.is_ce = result.worst_gain <= epsilon;
  return result;
}

}  // namespace vecrm
