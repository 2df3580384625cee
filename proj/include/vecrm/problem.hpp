#pragma once

#include <string>
#include <vector>

#include "vecrm/scenario.hpp"

namespace vecrm {

using Action = NodeId;                    // a player's action is its target node
using JointAction = std::vector<Action>;

// One row per task: where the task uploads and where it is processed.
struct Placement {
  VehicleId task = 0;
  NodeId serving = 0;
  NodeId target = 0;

  bool is_local() const { return serving == target; }
};

// Binary assignment view of a joint placement; every task contributes exactly
// one set variable (local or migrated).
struct DecisionMatrix {
  std::vector<Placement> placements;

  bool x_local(NodeId r, VehicleId i) const;
  bool x_migrated(NodeId r, NodeId rhat, VehicleId i) const;
  std::size_t ones_count() const { return placements.size(); }
};

DecisionMatrix decision_from_actions(const Scenario& scenario,
                                     const JointAction& actions, double t);

struct ConstraintViolation {
  enum class Kind { kMobility, kCapacity };
  Kind kind = Kind::kMobility;
  std::size_t index = 0;   // task id or node id
  double margin = 0.0;     // seconds over the deadline / GHz over the cap
};

struct ConstraintReport {
  std::vector<bool> mobility_ok;   // per task
  std::vector<bool> capacity_ok;   // per node
  std::vector<ConstraintViolation> violations;

  bool feasible() const { return violations.empty(); }
  std::string to_json() const;
};

// Mobility deadlines plus a single per-node capacity check covering local and
// inbound migrated load together.
ConstraintReport check_constraints(const Scenario& scenario,
                                   const DecisionMatrix& decision, double t);

struct ObjectiveValue {
  double value = 0.0;
  bool unbounded = false;  // some task had an unbounded delay
};

// Sum over tasks of beta * delay + gamma * cost.
ObjectiveValue objective(const Scenario& scenario, const DecisionMatrix& decision,
                         double t, double beta, double gamma);

// Remaining time the vehicle can still receive results from `target` given its
// serving node; +infinity when the placement has no mobility deadline. Returns
// -infinity when the deadline can never be met (no RSU ahead).
double mobility_deadline_s(const Scenario& scenario, VehicleId task,
                           NodeId serving, NodeId target, double t);

}  // namespace vecrm
