#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vecrm/channel.hpp"

namespace vecrm {

using NodeId = std::size_t;
using VehicleId = std::size_t;

enum class NodeKind { kRsu, kBs };

// Edge server attached to the highway: either a roadside unit with a bounded
// coverage interval or the base station, which covers the whole segment.
struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::kRsu;
  double axial_position_m = 0.0;
  double perpendicular_offset_m = 0.0;  // setback from the road edge
  double coverage_radius_m = 0.0;       // half-length of the axial coverage interval
  double bandwidth_mhz = 0.0;           // per-vehicle uplink bandwidth
  double upload_price_per_mhz = 0.0;
  double compute_price_per_ghz = 0.0;
  double capacity_cap_ghz = 0.0;
  double noise_dbm = -100.0;

  bool is_rsu() const { return kind == NodeKind::kRsu; }
};

struct Task {
  VehicleId owner = 0;
  double size_mb = 0.0;
  double cycles_gcycles = 0.0;
};

struct Vehicle {
  VehicleId id = 0;
  int lane = 1;                        // 1..lane_count; lanes 1-3 run +, 4-6 run -
  double initial_axial_position_m = 0.0;
  int direction = 1;                   // +1 or -1 along the axial coordinate
  double speed_mps = 0.0;
  double transmit_power_dbm = 20.0;
  Task task;
};

// Wired interconnect: RSUs form a linear chain and the base station has a
// direct link to every RSU. Hop counts are stored as data so a different
// topology only needs a different builder.
struct Backhaul {
  double wired_bandwidth_mbps = 100.0;
  double hop_delay_s = 0.02;           // per-hop forwarding delay coefficient
  double migration_price_per_mb = 0.002;
  double service_entity_size_mb = 500.0;
  std::vector<std::vector<int>> hops;  // [node][node], symmetric, zero diagonal
};

// Per-node service and radio parameters that differ between RSUs and the BS.
struct NodeClassParams {
  double bandwidth_mhz = 1.0;
  double upload_price_per_mhz = 2.0;
  double compute_price_per_ghz = 10.0;
  double capacity_cap_ghz = 20.0;
  double perpendicular_offset_m = 5.0;
};

struct ScenarioConfig {
  std::size_t rsu_count = 2;
  std::size_t vehicle_count = 10;
  double inter_rsu_distance_m = 3000.0;
  double rsu_coverage_radius_m = 600.0;
  std::size_t lane_count = 6;
  double lane_width_m = 3.5;
  // One speed per lane pair {1,4}, {2,5}, {3,6}.
  std::vector<double> lane_speeds_kmh = {90.0, 100.0, 120.0};
  double transmit_power_dbm = 20.0;
  double task_size_mb = 200.0;
  double task_cycles_min_gcycles = 0.5;
  double task_cycles_max_gcycles = 1.2;
  double allocated_capacity_min_ghz = 1.0;
  double allocated_capacity_max_ghz = 3.0;
  double wired_bandwidth_mbps = 100.0;
  double hop_delay_s = 0.02;
  double migration_price_per_mb = 0.002;
  double service_entity_size_mb = 500.0;
  NodeClassParams rsu{1.0, 2.0, 10.0, 20.0, 5.0};
  NodeClassParams bs{0.25, 20.0, 100.0, 30.0, 25.0};
  RadioParams radio;
};

struct Scenario {
  std::vector<Node> nodes;     // RSUs in chain order first, BS last
  std::vector<Vehicle> vehicles;
  Backhaul backhaul;
  // allocated_ghz[node][vehicle]: capacity the node would grant that task.
  std::vector<std::vector<double>> allocated_ghz;
  double highway_length_m = 0.0;
  double lane_width_m = 3.5;
  double inter_rsu_distance_m = 3000.0;
  double rsu_coverage_radius_m = 600.0;
  RadioParams radio;
  std::uint64_t rng_seed = 0;

  std::size_t rsu_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  NodeId bs_id() const { return nodes.size() - 1; }
  const Node& bs() const { return nodes.back(); }
};

// Raised by gap_distance_to_next_rsu when no RSU lies ahead of the vehicle.
class NoUpcomingRsu : public std::runtime_error {
 public:
  explicit NoUpcomingRsu(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic construction: identical (config, seed) pairs yield field-for-field
// identical scenarios. Validates ranges and counts, throwing ConfigError.
Scenario build_scenario(const ScenarioConfig& config, std::uint64_t seed);

// Axial position at time t >= 0; vehicles freeze at the highway boundary.
double position_at(const Vehicle& vehicle, double t, double highway_length_m);

// The node whose coverage interval holds the vehicle: an RSU when one covers the
// position (ties: smaller axial distance, then smaller id), otherwise the BS.
NodeId serving_node(const Scenario& scenario, VehicleId vehicle, double t);

// Distance along the travel direction until the vehicle exits the coverage of
// its serving RSU. Throws std::invalid_argument when the BS is serving.
double residual_coverage_distance(const Scenario& scenario, VehicleId vehicle,
                                  double t);

struct UpcomingRsu {
  NodeId rsu = 0;
  double distance_m = 0.0;  // travel distance to the coverage entry boundary
};

// Nearest RSU coverage-entry boundary at distance >= 0 along the travel
// direction (0 exactly at the boundary). Throws NoUpcomingRsu when the vehicle
// is heading away from every entry boundary.
UpcomingRsu gap_distance_to_next_rsu(const Scenario& scenario, VehicleId vehicle,
                                     double t);

// Wired hop count between nodes: chain distance between RSUs, one hop between
// the BS and any RSU, zero on the diagonal.
int hop_count(const Backhaul& backhaul, NodeId a, NodeId b);

}  // namespace vecrm
