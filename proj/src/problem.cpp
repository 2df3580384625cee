#include "vecrm/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "vecrm/compute_model.hpp"

namespace vecrm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool DecisionMatrix::x_local(NodeId r, VehicleId i) const {
  for (const Placement& p : placements) {
    if (p.task == i) return p.serving == r && p.is_local();
  }
  return false;
}

bool DecisionMatrix::x_migrated(NodeId r, NodeId rhat, VehicleId i) const {
  for (const Placement& p : placements) {
    if (p.task == i) return p.serving == r && p.target == rhat && !p.is_local();
  }
  return false;
}

DecisionMatrix decision_from_actions(const Scenario& scenario,
                                     const JointAction& actions, double t) {
  if (actions.size() != scenario.vehicles.size()) {
    throw std::invalid_argument("decision_from_actions: one action per vehicle required");
  }
  DecisionMatrix d;
  d.placements.reserve(actions.size());
  for (VehicleId i = 0; i < actions.size(); ++i) {
    if (actions[i] >= scenario.nodes.size()) {
      throw std::invalid_argument("decision_from_actions: action is not a node id");
    }
    d.placements.push_back({i, serving_node(scenario, i, t), actions[i]});
  }
  return d;
}

double mobility_deadline_s(const Scenario& scenario, VehicleId task,
                           NodeId serving, NodeId target, double t) {
  const Vehicle& v = scenario.vehicles.at(task);
  const bool serving_rsu = scenario.nodes.at(serving).is_rsu();
  const bool target_rsu = scenario.nodes.at(target).is_rsu();

  if (!target_rsu) return kInf;  // the BS covers the whole highway

  if (serving_rsu) {
    const double residual = residual_coverage_distance(scenario, task, t);
    if (target == serving) return residual / v.speed_mps;
    const double extra = scenario.inter_rsu_distance_m *
                         hop_count(scenario.backhaul, serving, target);
    return (residual + extra) / v.speed_mps;
  }

  // BS-served vehicle in a gap: it must cross to the next RSU's area first.
  try {
    const UpcomingRsu next = gap_distance_to_next_rsu(scenario, task, t);
    const double extra = 2.0 * scenario.rsu_coverage_radius_m +
                         scenario.inter_rsu_distance_m *
                             hop_count(scenario.backhaul, next.rsu, target);
    return (next.distance_m + extra) / v.speed_mps;
  } catch (const NoUpcomingRsu&) {
    return -kInf;  // the vehicle never reaches any RSU coverage again
  }
}

ConstraintReport check_constraints(const Scenario& scenario,
                                   const DecisionMatrix& decision, double t) {
  ConstraintReport report;
  report.mobility_ok.assign(scenario.vehicles.size(), true);
  report.capacity_ok.assign(scenario.nodes.size(), true);

  for (const Placement& p : decision.placements) {
    const double deadline = mobility_deadline_s(scenario, p.task, p.serving, p.target, t);
    if (deadline == kInf) continue;
    const DelayBreakdown d = delay_breakdown(scenario, p.task, p.serving, p.target, t);
    if (d.unbounded || d.total_s > deadline) {
      report.mobility_ok[p.task] = false;
      const double margin = d.unbounded ? kInf : d.total_s - deadline;
      report.violations.push_back(
          {ConstraintViolation::Kind::kMobility, p.task, margin});
    }
  }

  std::vector<double> load(scenario.nodes.size(), 0.0);
  for (const Placement& p : decision.placements) {
    load[p.target] += scenario.allocated_ghz.at(p.target).at(p.task);
  }
  for (NodeId n = 0; n < scenario.nodes.size(); ++n) {
    if (load[n] > scenario.nodes[n].capacity_cap_ghz) {
      report.capacity_ok[n] = false;
      report.violations.push_back({ConstraintViolation::Kind::kCapacity, n,
                                   load[n] - scenario.nodes[n].capacity_cap_ghz});
    }
  }
  return report;
}

ObjectiveValue objective(const Scenario& scenario, const DecisionMatrix& decision,
                         double t, double beta, double gamma) {
  ObjectiveValue o;
  for (const Placement& p : decision.placements) {
    const DelayBreakdown d = delay_breakdown(scenario, p.task, p.serving, p.target, t);
    const CostBreakdown c = cost_breakdown(scenario, p.task, p.serving, p.target);
    if (d.unbounded) {
      o.unbounded = true;
      continue;
    }
    o.value += beta * d.total_s + gamma * c.total;
  }
  return o;
}

std::string ConstraintReport::to_json() const {
  std::ostringstream out;
  out << "{\"feasible\":" << (feasible() ? "true" : "false") << ",\"violations\":[";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const ConstraintViolation& v = violations[i];
    if (i > 0) out << ",";
    out << "{\"kind\":\""
        << (v.kind == ConstraintViolation::Kind::kMobility ? "mobility" : "capacity")
        << "\",\"index\":" << v.index << ",\"margin\":";
    if (std::isinf(v.margin)) {
      out << "\"unbounded\"";
    } else {
      out << v.margin;
    }
    out << "}";
  }
  out << "]}";
  return out.str();
}

}  // namespace vecrm
