#pragma once

#include "vecrm/scenario.hpp"

namespace vecrm::testing {

// Minimal hand-assembled deployment (2 RSUs + BS) with every knob pinned so
// reference arithmetic in the tests stays exact. Vehicles start at the first
// RSU's center in lane 1 with a 200 MB, 1 Gcycle task; every node grants
// 2 GHz.
inline Scenario tiny_scenario(std::size_t vehicle_count = 1) {
  Scenario s;
  s.radio = RadioParams{-110.0, 2.0, 1.0, 0.0};
  s.highway_length_m = 6000.0;
  s.lane_width_m = 3.5;
  s.inter_rsu_distance_m = 3000.0;
  s.rsu_coverage_radius_m = 600.0;

  for (NodeId k = 0; k < 2; ++k) {
    Node n;
    n.id = k;
    n.kind = NodeKind::kRsu;
    n.axial_position_m = 1500.0 + 3000.0 * static_cast<double>(k);
    n.perpendicular_offset_m = 5.0;
    n.coverage_radius_m = 600.0;
    n.bandwidth_mhz = 1.0;
    n.upload_price_per_mhz = 2.0;
    n.compute_price_per_ghz = 10.0;
    n.capacity_cap_ghz = 20.0;
    s.nodes.push_back(n);
  }
  Node bs;
  bs.id = 2;
  bs.kind = NodeKind::kBs;
  bs.axial_position_m = 3000.0;
  bs.perpendicular_offset_m = 25.0;
  bs.coverage_radius_m = 6000.0;
  bs.bandwidth_mhz = 0.25;
  bs.upload_price_per_mhz = 20.0;
  bs.compute_price_per_ghz = 100.0;
  bs.capacity_cap_ghz = 30.0;
  s.nodes.push_back(bs);

  s.backhaul.wired_bandwidth_mbps = 100.0;
  s.backhaul.hop_delay_s = 0.02;
  s.backhaul.migration_price_per_mb = 0.002;
  s.backhaul.service_entity_size_mb = 500.0;
  s.backhaul.hops = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};

  for (VehicleId i = 0; i < vehicle_count; ++i) {
    Vehicle v;
    v.id = i;
    v.lane = 1;
    v.initial_axial_position_m = 1500.0;
    v.direction = 1;
    v.speed_mps = 25.0;
    v.task = Task{i, 200.0, 1.0};
    s.vehicles.push_back(v);
  }

  s.allocated_ghz.assign(s.nodes.size(), std::vector<double>(vehicle_count, 2.0));
  return s;
}

}  // namespace vecrm::testing
