#pragma once

#include "vecrm/scenario.hpp"

namespace vecrm {

// Delay components in seconds. `unbounded` marks a division by a zero rate or
// zero capacity; component values then hold only the finite parts and must not
// be fed into arithmetic. The game layer converts the marker into a penalty.
struct DelayBreakdown {
  double upload_s = 0.0;
  double migration_s = 0.0;
  double processing_s = 0.0;
  double total_s = 0.0;
  bool unbounded = false;
};

struct CostBreakdown {
  double upload = 0.0;
  double migration = 0.0;
  double processing = 0.0;
  double total = 0.0;
};

// Upload, migration and processing delay when `task`'s data is uploaded to
// `serving` and processed at `target` (equal ids mean local processing).
DelayBreakdown delay_breakdown(const Scenario& scenario, VehicleId task,
                               NodeId serving, NodeId target, double t);

// Same computation with the uplink rate supplied by the caller; the hot path
// reuses one rate across every candidate target.
DelayBreakdown delay_breakdown_with_rate(const Scenario& scenario, VehicleId task,
                                         NodeId serving, NodeId target,
                                         double rate_mbps);

// Monetary cost of the same placement: flat upload price, service-entity
// transfer price when migrating, and the price of the allocated capacity.
CostBreakdown cost_breakdown(const Scenario& scenario, VehicleId task,
                             NodeId serving, NodeId target);

}  // namespace vecrm
