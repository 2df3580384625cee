#include "vecrm/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "vecrm/scenario.hpp"
#include "vecrm/util.hpp"

namespace vecrm {

double path_gain(double distance_m, const RadioParams& params) {
  if (!(distance_m > 0.0)) {
    throw std::domain_error("path_gain: distance must be positive");
  }
  if (!(params.pathloss_exponent >= 2.0)) {
    throw std::invalid_argument("path_gain: pathloss exponent must be >= 2");
  }
  if (!(params.reference_distance_m > 0.0)) {
    throw std::invalid_argument("path_gain: reference distance must be positive");
  }
  const double ref = db_to_linear(params.reference_gain_db);
  return ref * std::pow(params.reference_distance_m / distance_m,
                        params.pathloss_exponent);
}

double shannon_rate_mbps(double bandwidth_mhz, double tx_power_dbm, double gain,
                         double noise_dbm) {
  const double snr = dbm_to_watts(tx_power_dbm) * gain / dbm_to_watts(noise_dbm);
  return bandwidth_mhz * std::log2(1.0 + snr);
}

double euclidean_distance_m(const Scenario& scenario, const Node& node,
                            const Vehicle& vehicle, double t) {
  const double x = position_at(vehicle, t, scenario.highway_length_m);
  // Lane centers sit at (lane - 0.5) widths from the road edge; infrastructure
  // stands on the opposite side of that edge.
  const double vehicle_y = (vehicle.lane - 0.5) * scenario.lane_width_m;
  const double node_y = -node.perpendicular_offset_m;
  return std::hypot(x - node.axial_position_m, vehicle_y - node_y);
}

double data_rate_mbps(const Scenario& scenario, const Node& node,
                      const Vehicle& vehicle, double t) {
  const double d = euclidean_distance_m(scenario, node, vehicle, t);
  const double gain = path_gain(d, scenario.radio);
  return shannon_rate_mbps(node.bandwidth_mhz, vehicle.transmit_power_dbm, gain,
                           node.noise_dbm);
}

}  // namespace vecrm
