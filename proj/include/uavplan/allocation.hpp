#pragma once

#include <optional>
#include <vector>

#include "uavplan/assignment.hpp"
#include "uavplan/clustering.hpp"
#include "uavplan/mission.hpp"

namespace uavplan {

enum class Strategy { Greedy, Hungarian, Auction };
enum class Metric { DubinsCsCsc, Euclidean };

const char* to_string(Strategy s);
const char* to_string(Metric m);

struct StrategyConfig {
  Strategy strategy = Strategy::Greedy;
  Metric metric = Metric::DubinsCsCsc;
  bool cluster_restricted = false;
  // When set, a UAV whose cluster holds no unassigned task claims from the
  // nearest active cluster's pool instead of waiting for the swarm to finish.
  // Cross-cluster raids lengthen the flown tours, so this stays off.
  bool cluster_fallback = false;
  std::optional<double> auction_epsilon;  // default: 1e-3 * mean finite entry
};

struct CostMatrix {
  std::vector<int> uav_ids;
  std::vector<int> task_ids;
  CostRows cost;  // [uav][task]; +infinity marks unreachable pairs
  Metric metric = Metric::DubinsCsCsc;
  bool empty() const { return uav_ids.empty() || task_ids.empty(); }
};

// Connection cost (Dubins via the task's cheapest entry, or straight-line)
// plus the task's fixed coverage length.
CostMatrix build_cost_matrix(const std::vector<const Uav*>& idle_uavs,
                             const std::vector<const Task*>& candidate_tasks, Metric metric,
                             double turn_radius);

struct AssignmentPair {
  int uav_id = 0;
  int task_id = 0;
  double cost = 0.0;
  bool fallback = false;  // claimed outside the UAV's own cluster
};

struct EpochOutcome {
  std::vector<AssignmentPair> pairs;
  std::vector<int> unassigned_uavs;  // idle UAVs that received nothing
  bool ran = false;                  // false: nothing idle or nothing unassigned
  bool any_fallback = false;
  double wall_seconds = 0.0;
  // Total flyable length of the full plan regenerated by the decoupled
  // Euclidean baselines (allocation of every open task plus smoothing);
  // zero for the coupled Dubins strategies.
  double decoupled_plan_length = 0.0;
};

struct DecisionContext {
  std::vector<Uav>& uavs;
  std::vector<Task>& tasks;
  ClusterModel* clusters;  // null when clustering preprocessing is off
  double now = 0.0;
  double turn_radius = 0.0;
  Pose base;
};

// One allocation round over the currently idle UAVs and unassigned tasks.
// Winning pairs are committed: tasks flip to Assigned and UAVs to InTransit
// with the connecting Dubins path attached.
//
// The coupled strategies price candidates directly with Dubins lengths. The
// Euclidean strategies are the classical decoupled baselines: each planning
// event allocates with straight-line costs, then regenerates complete
// per-UAV sequences for every open task and smooths them into flyable paths,
// of which only the first legs are committed.
EpochOutcome decision_epoch(DecisionContext ctx, const StrategyConfig& cfg);

}  // namespace uavplan
