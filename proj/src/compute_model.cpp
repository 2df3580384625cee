#include "vecrm/compute_model.hpp"

#include "vecrm/channel.hpp"

namespace vecrm {

namespace {
constexpr double kMbPerMB = 8.0;
}

DelayBreakdown delay_breakdown_with_rate(const Scenario& scenario, VehicleId task,
                                         NodeId serving, NodeId target,
                                         double rate_mbps) {
  const Vehicle& v = scenario.vehicles.at(task);
  DelayBreakdown d;

  const double bits_mb = v.task.size_mb * kMbPerMB;
  if (rate_mbps > 0.0) {
    d.upload_s = bits_mb / rate_mbps;
  } else if (bits_mb > 0.0) {
    d.unbounded = true;
  }

  if (target != serving) {
    // Task data rides the wired backhaul; the result detours one hop each way.
    d.migration_s = bits_mb / scenario.backhaul.wired_bandwidth_mbps +
                    2.0 * scenario.backhaul.hop_delay_s *
                        hop_count(scenario.backhaul, serving, target);
  }

  const double capacity = scenario.allocated_ghz.at(target).at(task);
  if (capacity > 0.0) {
    d.processing_s = v.task.cycles_gcycles / capacity;
  } else {
    d.unbounded = true;
  }

  d.total_s = d.upload_s + d.migration_s + d.processing_s;
  return d;
}

DelayBreakdown delay_breakdown(const Scenario& scenario, VehicleId task,
                               NodeId serving, NodeId target, double t) {
  const double rate = data_rate_mbps(scenario, scenario.nodes.at(serving),
                                     scenario.vehicles.at(task), t);
  return delay_breakdown_with_rate(scenario, task, serving, target, rate);
}

CostBreakdown cost_breakdown(const Scenario& scenario, VehicleId task,
                             NodeId serving, NodeId target) {
  const Node& up = scenario.nodes.at(serving);
  const Node& proc = scenario.nodes.at(target);
  CostBreakdown c;
  c.upload = up.upload_price_per_mhz * up.bandwidth_mhz;
  if (target != serving) {
    c.migration = scenario.backhaul.migration_price_per_mb *
                  scenario.backhaul.service_entity_size_mb;
  }
  c.processing = proc.compute_price_per_ghz * scenario.allocated_ghz.at(target).at(task);
  c.total = c.upload + c.migration + c.processing;
  return c;
}

}  // namespace vecrm
