#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavplan/allocation.hpp"
#include "uavplan/clustering.hpp"
#include "uavplan/mission.hpp"

namespace uavplan {

struct ScheduledTask {
  double time = 0.0;
  Vec2 position;
  TaskType type = PointFreeTask{};
};

// Emergency schedule: a new-task window with either scripted injections or
// per-step Bernoulli draws, plus an optional damage event.
struct EventTimeline {
  double window_start = 30.0;  // new tasks may appear from here...
  double window_end = 50.0;    // ...until here
  double emergence_probability = 0.0;  // per-step draw inside the window
  int new_task_cap = 0;                // stop drawing after this many
  double constrained_fraction = 0.2;   // share of drawn tasks with entry headings
  std::vector<ScheduledTask> scheduled;
  bool damage_enabled = false;
  std::optional<double> damage_time;  // absent with damage enabled: 50 + 10u
  std::optional<int> damage_victim;   // absent: uniform draw over surviving UAVs
  uint64_t rng_seed = 0;              // 0: derive from the scenario seed

  static EventTimeline none() { return {}; }
  // Probability calibrated so the expected number of draws over the window
  // matches the cap.
  static EventTimeline stochastic_new_tasks(int cap, double dt, double start = 30.0,
                                            double end = 50.0);
  static EventTimeline damage_only(std::optional<double> time = std::nullopt,
                                   std::optional<int> victim = std::nullopt);
};

struct SimConfig {
  double dt = 0.1;
  double arrival_tolerance = 0.0;  // arrival when remaining <= max(this, speed*dt)
  StrategyConfig strategy;
  bool preprocess_clustering = true;
  bool loiter = false;   // idle UAVs circle instead of freezing
  int trace_every = 10;  // steps between trace rows
  uint64_t cluster_seed = 0;  // 0: derive from the scenario seed
};

struct TraceRow {
  double t = 0.0;
  int uav_id = 0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  UavState state = UavState::Idle;
  double odometer = 0.0;
};

struct EventRow {
  double t = 0.0;
  std::string kind;  // assign, arrive, complete, new_task, damage, release, reassign
  int uav_id = -1;
  int task_id = -1;
  std::string detail;
};

struct PlanningEvent {
  double time = 0.0;
  double wall_seconds = 0.0;
  std::vector<int> idle_uavs;
  int assignments = 0;
  double baseline_plan_length = 0.0;  // decoupled baselines only
};

struct TaskRecord {
  int id = 0;
  std::optional<double> created_at;
  std::optional<double> assigned_at;
  std::optional<double> completed_at;
  std::optional<int> executed_by;
  int cluster = -1;
};

struct UavReport {
  int id = 0;
  DistanceBreakdown parts;
  double odometer = 0.0;
  double loiter_distance = 0.0;
  std::vector<int> task_sequence;  // completion order
  bool damaged = false;
  Pose final_pose;
};

struct SimResult {
  std::vector<UavReport> per_uav;
  std::vector<PlanningEvent> planning_events;
  std::vector<TaskRecord> task_timeline;
  double completion_time = 0.0;
  std::vector<TraceRow> trace;
  std::vector<EventRow> events;
  bool mission_failed = false;
  std::string failure_reason;
  int initial_task_count = 0;
  int injected_count = 0;
  int damaged_count = 0;
};

// Mutable world owned by the run loop; exposed so tests can script worlds and
// drive the injectors directly.
struct SimState {
  double now = 0.0;
  Scenario scenario;
  std::vector<Uav> uavs;
  std::vector<Task> tasks;
  ClusterModel clusters;
  bool clustering_enabled = false;
  int next_task_id = 0;
  std::vector<EventRow> events;

  void log(const char* kind, int uav_id, int task_id, std::string detail = {});
};

SimState init_state(const Scenario& scenario, const SimConfig& cfg);

// Creates an Unassigned task at `position`, classifying it into the nearest
// active cluster when clustering preprocessing is on. Assignment happens at a
// later decision epoch. Throws NoAvailableUavError when every cluster is
// inactive.
Task& inject_new_task(SimState& st, Vec2 position, const TaskType& type);

// Damages `victim`: pose frozen, current task released, the cluster
// deactivated and its open tasks reclassified to the surviving clusters.
// Damaging an already-damaged UAV logs a warning and is a no-op.
void inject_damage(SimState& st, int victim, double now);

// Fixed-step loop: inject emergencies, run decision epochs for idle UAVs,
// advance flights, and send survivors home once every task is complete.
SimResult run(const Scenario& scenario, const SimConfig& cfg, const EventTimeline& timeline);

}  // namespace uavplan
