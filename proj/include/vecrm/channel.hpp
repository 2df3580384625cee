#pragma once

#include <cstddef>

namespace vecrm {

struct Scenario;
struct Node;
struct Vehicle;

// Log-distance power-law radio model shared by every link.
struct RadioParams {
  double noise_dbm = -100.0;         // receiver noise power, applied per node
  double pathloss_exponent = 3.5;    // >= 2
  double reference_distance_m = 1.0; // > 0
  double reference_gain_db = -30.0;  // channel gain at the reference distance
};

// Channel power gain |h|^2 at the given 2-D separation. Throws std::domain_error
// for non-positive distance and std::invalid_argument for exponent < 2.
double path_gain(double distance_m, const RadioParams& params);

// Shannon rate in Mbps for a bandwidth in MHz (1 bit/s/Hz scaling).
double shannon_rate_mbps(double bandwidth_mhz, double tx_power_dbm, double gain,
                         double noise_dbm);

// Straight-line distance between a node and a vehicle at time t, including the
// lane offset across the road and the node's setback from the road edge.
double euclidean_distance_m(const Scenario& scenario, const Node& node,
                            const Vehicle& vehicle, double t);

// Uplink rate from vehicle to node at time t.
double data_rate_mbps(const Scenario& scenario, const Node& node,
                      const Vehicle& vehicle, double t);

}  // namespace vecrm
