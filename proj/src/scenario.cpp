#include "vecrm/scenario.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "vecrm/util.hpp"

namespace vecrm {

namespace {

void validate(const ScenarioConfig& c) {
  if (c.rsu_count == 0) throw ConfigError("scenario: rsu_count must be >= 1");
  if (c.vehicle_count == 0) throw ConfigError("scenario: vehicle_count must be >= 1");
  if (!(c.inter_rsu_distance_m > 0.0)) throw ConfigError("scenario: inter_rsu_distance_m must be positive");
  if (!(c.rsu_coverage_radius_m > 0.0)) throw ConfigError("scenario: rsu_coverage_radius_m must be positive");
  if (c.lane_count == 0 || c.lane_count % 2 != 0) throw ConfigError("scenario: lane_count must be a positive even number");
  if (!(c.lane_width_m > 0.0)) throw ConfigError("scenario: lane_width_m must be positive");
  if (c.lane_speeds_kmh.size() != c.lane_count / 2) throw ConfigError("scenario: one lane speed per lane pair is required");
  for (double s : c.lane_speeds_kmh) {
    if (!(s > 0.0)) throw ConfigError("scenario: lane speeds must be positive");
  }
  if (!std::isfinite(c.transmit_power_dbm)) throw ConfigError("scenario: transmit_power_dbm must be finite");
  if (!(c.task_size_mb >= 0.0)) throw ConfigError("scenario: task_size_mb must be >= 0");
  if (c.task_cycles_min_gcycles > c.task_cycles_max_gcycles) throw ConfigError("scenario: task cycle range has min > max");
  if (!(c.task_cycles_min_gcycles > 0.0)) throw ConfigError("scenario: task cycles must be positive");
  if (c.allocated_capacity_min_ghz > c.allocated_capacity_max_ghz) throw ConfigError("scenario: allocated capacity range has min > max");
  if (!(c.allocated_capacity_min_ghz > 0.0)) throw ConfigError("scenario: allocated capacity must be positive");
  if (!(c.wired_bandwidth_mbps > 0.0)) throw ConfigError("scenario: wired_bandwidth_mbps must be positive");
  if (!(c.hop_delay_s >= 0.0)) throw ConfigError("scenario: hop_delay_s must be >= 0");
  if (!(c.migration_price_per_mb >= 0.0)) throw ConfigError("scenario: migration_price_per_mb must be >= 0");
  if (!(c.service_entity_size_mb >= 0.0)) throw ConfigError("scenario: service_entity_size_mb must be >= 0");
  for (const NodeClassParams* p : {&c.rsu, &c.bs}) {
    if (!(p->bandwidth_mhz > 0.0)) throw ConfigError("scenario: node bandwidth must be positive");
    if (!(p->upload_price_per_mhz >= 0.0)) throw ConfigError("scenario: upload price must be >= 0");
    if (!(p->compute_price_per_ghz >= 0.0)) throw ConfigError("scenario: compute price must be >= 0");
    if (!(p->capacity_cap_ghz > 0.0)) throw ConfigError("scenario: capacity cap must be positive");
    if (!(p->perpendicular_offset_m >= 0.0)) throw ConfigError("scenario: perpendicular offset must be >= 0");
  }
  const double cap_floor = std::min(c.rsu.capacity_cap_ghz, c.bs.capacity_cap_ghz);
  if (c.allocated_capacity_max_ghz > cap_floor) {
    throw ConfigError("scenario: allocated capacity range exceeds a node capacity cap");
  }
  if (!(c.radio.pathloss_exponent >= 2.0)) throw ConfigError("scenario: pathloss exponent must be >= 2");
  if (!(c.radio.reference_distance_m > 0.0)) throw ConfigError("scenario: reference distance must be positive");
  if (!std::isfinite(c.radio.noise_dbm)) throw ConfigError("scenario: noise must be finite");
  if (!std::isfinite(c.radio.reference_gain_db)) throw ConfigError("scenario: reference gain must be finite");
}

std::vector<std::vector<int>> build_hops(std::size_t rsu_count) {
  const std::size_t n = rsu_count + 1;
  std::vector<std::vector<int>> hops(n, std::vector<int>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) {
        hops[a][b] = 0;
      } else if (a < rsu_count && b < rsu_count) {
        hops[a][b] = static_cast<int>(a < b ? b - a : a - b);
      } else {
        hops[a][b] = 1;  // BS <-> RSU direct link
      }
    }
  }
  return hops;
}

}  // namespace

Scenario build_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  validate(config);

  Scenario s;
  s.highway_length_m = config.inter_rsu_distance_m * static_cast<double>(config.rsu_count);
  s.lane_width_m = config.lane_width_m;
  s.inter_rsu_distance_m = config.inter_rsu_distance_m;
  s.rsu_coverage_radius_m = config.rsu_coverage_radius_m;
  s.radio = config.radio;
  s.rng_seed = seed;

  // RSUs sit at the center of consecutive highway segments; the BS at the midpoint.
  for (std::size_t k = 0; k < config.rsu_count; ++k) {
    Node n;
    n.id = k;
    n.kind = NodeKind::kRsu;
    n.axial_position_m = config.inter_rsu_distance_m * (static_cast<double>(k) + 0.5);
    n.perpendicular_offset_m = config.rsu.perpendicular_offset_m;
    n.coverage_radius_m = config.rsu_coverage_radius_m;
    n.bandwidth_mhz = config.rsu.bandwidth_mhz;
    n.upload_price_per_mhz = config.rsu.upload_price_per_mhz;
    n.compute_price_per_ghz = config.rsu.compute_price_per_ghz;
    n.capacity_cap_ghz = config.rsu.capacity_cap_ghz;
    n.noise_dbm = config.radio.noise_dbm;
    s.nodes.push_back(n);
  }
  {
    Node bs;
    bs.id = config.rsu_count;
    bs.kind = NodeKind::kBs;
    bs.axial_position_m = s.highway_length_m / 2.0;
    bs.perpendicular_offset_m = config.bs.perpendicular_offset_m;
    bs.coverage_radius_m = s.highway_length_m;  // spans the whole segment
    bs.bandwidth_mhz = config.bs.bandwidth_mhz;
    bs.upload_price_per_mhz = config.bs.upload_price_per_mhz;
    bs.compute_price_per_ghz = config.bs.compute_price_per_ghz;
    bs.capacity_cap_ghz = config.bs.capacity_cap_ghz;
    bs.noise_dbm = config.radio.noise_dbm;
    s.nodes.push_back(bs);
  }

  s.backhaul.wired_bandwidth_mbps = config.wired_bandwidth_mbps;
  s.backhaul.hop_delay_s = config.hop_delay_s;
  s.backhaul.migration_price_per_mb = config.migration_price_per_mb;
  s.backhaul.service_entity_size_mb = config.service_entity_size_mb;
  s.backhaul.hops = build_hops(config.rsu_count);

  // Sampling order is part of the determinism contract: per vehicle position,
  // lane, cycles; then the capacity matrix node-major.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos_dist(0.0, s.highway_length_m);
  std::uniform_int_distribution<std::size_t> lane_dist(1, config.lane_count);
  std::uniform_real_distribution<double> cycles_dist(config.task_cycles_min_gcycles,
                                                     config.task_cycles_max_gcycles);
  const std::size_t half = config.lane_count / 2;
  for (std::size_t i = 0; i < config.vehicle_count; ++i) {
    Vehicle v;
    v.id = i;
    v.initial_axial_position_m = pos_dist(rng);
    v.lane = static_cast<int>(lane_dist(rng));
    const std::size_t lane0 = static_cast<std::size_t>(v.lane) - 1;
    v.direction = lane0 < half ? 1 : -1;
    v.speed_mps = kmh_to_mps(config.lane_speeds_kmh[lane0 % half]);
    v.transmit_power_dbm = config.transmit_power_dbm;
    v.task.owner = i;
    v.task.size_mb = config.task_size_mb;
    v.task.cycles_gcycles = cycles_dist(rng);
    s.vehicles.push_back(v);
  }

  std::uniform_real_distribution<double> cap_dist(config.allocated_capacity_min_ghz,
                                                  config.allocated_capacity_max_ghz);
  s.allocated_ghz.assign(s.nodes.size(), std::vector<double>(config.vehicle_count, 0.0));
  for (std::size_t n = 0; n < s.nodes.size(); ++n) {
    for (std::size_t i = 0; i < config.vehicle_count; ++i) {
      s.allocated_ghz[n][i] = cap_dist(rng);
    }
  }
  return s;
}

double position_at(const Vehicle& vehicle, double t, double highway_length_m) {
  assert(t >= 0.0);
  const double raw = vehicle.initial_axial_position_m +
                     vehicle.direction * vehicle.speed_mps * t;
  return std::clamp(raw, 0.0, highway_length_m);
}

NodeId serving_node(const Scenario& scenario, VehicleId vehicle, double t) {
  const Vehicle& v = scenario.vehicles.at(vehicle);
  const double x = position_at(v, t, scenario.highway_length_m);
  NodeId best = scenario.bs_id();
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < scenario.rsu_count(); ++k) {
    const Node& n = scenario.nodes[k];
    const double d = std::abs(x - n.axial_position_m);
    // Closed coverage interval; ties by smaller axial distance, then smaller id.
    if (d <= n.coverage_radius_m && d < best_dist) {
      best = k;
      best_dist = d;
    }
  }
  return best;
}

double residual_coverage_distance(const Scenario& scenario, VehicleId vehicle,
                                  double t) {
  const NodeId serving = serving_node(scenario, vehicle, t);
  if (serving == scenario.bs_id()) {
    throw std::invalid_argument(
        "residual_coverage_distance: vehicle " + std::to_string(vehicle) +
        " is served by the BS");
  }
  const Vehicle& v = scenario.vehicles.at(vehicle);
  const Node& rsu = scenario.nodes[serving];
  const double x = position_at(v, t, scenario.highway_length_m);
  const double exit = rsu.axial_position_m + v.direction * rsu.coverage_radius_m;
  const double rem = v.direction * (exit - x);
  return std::clamp(rem, 0.0, 2.0 * rsu.coverage_radius_m);
}

UpcomingRsu gap_distance_to_next_rsu(const Scenario& scenario, VehicleId vehicle,
                                     double t) {
  const Vehicle& v = scenario.vehicles.at(vehicle);
  const double x = position_at(v, t, scenario.highway_length_m);
  bool found = false;
  UpcomingRsu best;
  for (std::size_t k = 0; k < scenario.rsu_count(); ++k) {
    const Node& n = scenario.nodes[k];
    const double entry = n.axial_position_m - v.direction * n.coverage_radius_m;
    const double dist = v.direction * (entry - x);
    if (dist >= 0.0 && (!found || dist < best.distance_m)) {
      best.rsu = k;
      best.distance_m = dist;
      found = true;
    }
  }
  if (!found) {
    throw NoUpcomingRsu("gap_distance_to_next_rsu: no RSU ahead of vehicle " +
                        std::to_string(vehicle));
  }
  return best;
}

int hop_count(const Backhaul& backhaul, NodeId a, NodeId b) {
  return backhaul.hops.at(a).at(b);
}

}  // namespace vecrm
