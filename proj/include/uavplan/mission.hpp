#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uavplan/geometry.hpp"

namespace uavplan {

// ---------------------------------------------------------------------------
// Task taxonomy
// ---------------------------------------------------------------------------

struct PointFreeTask {};

struct PointConstrainedTask {
  double entry_heading = 0.0;
};

struct LineTask {
  Vec2 endpoint_b;
};

struct CircleTask {
  double radius = 0.0;
  int sweeps = 1;
};

struct AreaTask {
  double width = 0.0;
  double height = 0.0;
  double orientation = 0.0;
  double lane_spacing = 0.0;
};

using TaskType =
    std::variant<PointFreeTask, PointConstrainedTask, LineTask, CircleTask, AreaTask>;

const char* type_name(const TaskType& type);
bool has_entry_heading_constraint(const TaskType& type);

enum class TaskState { Unassigned, Assigned, Completed };
const char* to_string(TaskState s);

struct Task {
  int id = 0;
  Vec2 position;
  TaskType type = PointFreeTask{};
  TaskState state = TaskState::Unassigned;
  std::optional<int> assigned_to;
  std::optional<double> created_at;
  std::optional<double> assigned_at;
  std::optional<double> completed_at;

  // Legal transitions only; anything else throws std::logic_error.
  void assign_to(int uav_id, double now);
  void complete(double now);
  void release(double now);  // damage recovery path: Assigned -> Unassigned
};

// ---------------------------------------------------------------------------
// Vehicles
// ---------------------------------------------------------------------------

enum class UavState { Idle, InTransit, Busy, Damaged };
const char* to_string(UavState s);

// Odometer split: leg to the first task, connecting legs between tasks,
// coverage flown at tasks, and the return leg.
struct DistanceBreakdown {
  double first_leg = 0.0;
  double between_tasks = 0.0;
  double coverage = 0.0;
  double return_leg = 0.0;
  double total() const { return first_leg + between_tasks + coverage + return_leg; }
};

enum class LegKind { FirstConnect, Connect, Coverage, Return };

// Chosen entry configuration of a task: a point with an optional required
// heading (absent selects a CS connection, present a CSC connection).
struct TaskEntry {
  Vec2 point;
  std::optional<double> heading;
  int candidate = 0;
};

struct CoveragePlan {
  Pose entry;
  std::vector<Segment> segments;
  double length = 0.0;
  Pose exit;
};

struct Uav {
  int id = 0;
  Pose pose;
  UavState state = UavState::Idle;
  double speed = 0.0;
  double turn_radius = 0.0;
  std::optional<DubinsPath> current_path;
  std::optional<int> current_task;
  std::optional<int> cluster;
  double path_progress = 0.0;
  std::optional<TaskEntry> current_entry;
  std::optional<CoveragePlan> current_coverage;
  LegKind current_leg = LegKind::FirstConnect;
  bool first_leg_done = false;
  bool returning = false;
  bool returned = false;
  DistanceBreakdown parts;
  double odometer = 0.0;
  double loiter_distance = 0.0;
  std::optional<Segment> loiter_circle;
  double loiter_progress = 0.0;
};

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

struct TypeMix {
  double point_free = 1.0;
  double point_constrained = 0.0;
  double line = 0.0;
  double circle = 0.0;
  double area = 0.0;
};

struct Scenario {
  int uav_count = 0;   // K
  int task_count = 0;  // initial N
  double area_side = 2500.0;
  Pose base;
  std::vector<Task> tasks;
  double uav_speed = 17.5;
  double turn_radius = 80.0;
  uint64_t seed = 0;
};

// Throws ScenarioError when an invariant is broken (K >= N, bad geometry...).
void validate_scenario(const Scenario& s);

// Uniform i.i.d. task positions in [0, area_side]^2, deterministic per seed.
Scenario random_scenario(uint64_t seed, int uav_count, int task_count, double area_side,
                         const TypeMix& mix);

// ---------------------------------------------------------------------------
// Entry configurations and coverage paths
// ---------------------------------------------------------------------------

// Number of admissible entry configurations for the task geometry
// (1 for points, 2 for lines, 32 for circles, 4 for areas).
int entry_candidate_count(const Task& task);
TaskEntry entry_candidate(const Task& task, int index);

// Canonical entry (candidate 0).
TaskEntry task_entry(const Task& task);

// Entry candidate with the cheapest Dubins connection from `from`;
// ties resolve to the lowest candidate index.
TaskEntry select_entry(const Task& task, const Pose& from, double turn_radius);

// Length of the coverage path, independent of the chosen entry.
double coverage_length(const Task& task, double turn_radius);

// Flyable coverage path starting at `entry_pose`, which must match one of the
// task's entry candidates (arrival heading fills in the free heading of
// unconstrained points).
CoveragePlan coverage_plan(const Task& task, const Pose& entry_pose, double turn_radius);

}  // namespace uavplan
