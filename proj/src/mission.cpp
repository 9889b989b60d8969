#include "uavplan/mission.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavplan/errors.hpp"
#include "uavplan/rng.hpp"

namespace uavplan {

namespace {

constexpr int kCircleEntryCandidates = 32;
constexpr double kEntryMatchTolerance = 1e-6;

std::logic_error bad_transition(const char* what) {
  return std::logic_error(std::string("illegal task transition: ") + what);
}

}  // namespace

const char* type_name(const TaskType& type) {
  switch (type.index()) {
    case 0: return "point_free";
    case 1: return "point_constrained";
    case 2: return "line";
    case 3: return "circle";
    case 4: return "area";
  }
  return "?";
}

bool has_entry_heading_constraint(const TaskType& type) {
  return !std::holds_alternative<PointFreeTask>(type);
}

const char* to_string(TaskState s) {
  switch (s) {
    case TaskState::Unassigned: return "unassigned";
    case TaskState::Assigned: return "assigned";
    case TaskState::Completed: return "completed";
  }
  return "?";
}

const char* to_string(UavState s) {
  switch (s) {
    case UavState::Idle: return "idle";
    case UavState::InTransit: return "in_transit";
    case UavState::Busy: return "busy";
    case UavState::Damaged: return "damaged";
  }
  return "?";
}

void Task::assign_to(int uav_id, double now) {
  if (state != TaskState::Unassigned) throw bad_transition("assign from non-unassigned");
  state = TaskState::Assigned;
  assigned_to = uav_id;
  assigned_at = now;
}

void Task::complete(double now) {
  if (state != TaskState::Assigned) throw bad_transition("complete from non-assigned");
  state = TaskState::Completed;
  completed_at = now;
}

void Task::release(double now) {
  (void)now;
  if (state != TaskState::Assigned) throw bad_transition("release from non-assigned");
  state = TaskState::Unassigned;
  assigned_to.reset();
  assigned_at.reset();
}

void validate_scenario(const Scenario& s) {
  if (s.uav_count < 1) throw ScenarioError("scenario: uav count must be >= 1");
  if (s.uav_count >= s.task_count)
    throw ScenarioError("scenario: uav count must be strictly less than task count");
  if (!(s.area_side > 0.0)) throw ScenarioError("scenario: area side must be > 0");
  if (!(s.turn_radius > 0.0)) throw ScenarioError("scenario: turn radius must be > 0");
  if (!(s.uav_speed > 0.0)) throw ScenarioError("scenario: speed must be > 0");
  if (static_cast<int>(s.tasks.size()) != s.task_count)
    throw ScenarioError("scenario: task list does not match task count");
  for (const auto& t : s.tasks) {
    if (t.position.x < 0.0 || t.position.x > s.area_side || t.position.y < 0.0 ||
        t.position.y > s.area_side)
      throw ScenarioError("scenario: task position outside mission area");
    if (const auto* c = std::get_if<CircleTask>(&t.type)) {
      if (c->radius < s.turn_radius)
        throw ScenarioError("scenario: circle task radius below turn radius");
      if (c->sweeps < 1) throw ScenarioError("scenario: circle sweeps must be >= 1");
    }
    if (const auto* a = std::get_if<AreaTask>(&t.type)) {
      if (!(a->lane_spacing > 0.0) || !(a->width > 0.0) || !(a->height > 0.0))
        throw ScenarioError("scenario: area task dimensions must be > 0");
      if (a->lane_spacing < 2.0 * s.turn_radius)
        throw ScenarioError("scenario: area lane spacing below turn diameter");
    }
  }
}

Scenario random_scenario(uint64_t seed, int uav_count, int task_count, double area_side,
                         const TypeMix& mix) {
  if (uav_count >= task_count)
    throw std::invalid_argument("random_scenario: need uav count < task count");
  if (!(area_side > 0.0)) throw std::invalid_argument("random_scenario: area side must be > 0");
  const double mix_sum =
      mix.point_free + mix.point_constrained + mix.line + mix.circle + mix.area;
  if (std::abs(mix_sum - 1.0) > 1e-9)
    throw std::invalid_argument("random_scenario: type mix must sum to 1");

  Scenario s;
  s.uav_count = uav_count;
  s.task_count = task_count;
  s.area_side = area_side;
  s.base = Pose{0.0, 0.0, 0.0};
  s.seed = seed;
  Rng rng(seed);
  s.tasks.reserve(task_count);
  for (int i = 0; i < task_count; ++i) {
    Task t;
    t.id = i;
    t.created_at = 0.0;
    for (int attempt = 0; attempt < 100; ++attempt) {
      t.position = {area_side * rng.uniform(), area_side * rng.uniform()};
      const double u = rng.uniform();
      if (u < mix.point_free) {
        t.type = PointFreeTask{};
      } else if (u < mix.point_free + mix.point_constrained) {
        t.type = PointConstrainedTask{kTwoPi * rng.uniform()};
      } else if (u < mix.point_free + mix.point_constrained + mix.line) {
        const double len = 150.0 + 250.0 * rng.uniform();
        const double ang = kTwoPi * rng.uniform();
        t.type = LineTask{t.position + len * heading_vector(ang)};
      } else if (u < mix.point_free + mix.point_constrained + mix.line + mix.circle) {
        t.type = CircleTask{s.turn_radius * (1.0 + 2.0 * rng.uniform()), 1};
      } else {
        t.type = AreaTask{200.0 + 200.0 * rng.uniform(),
                          2.0 * s.turn_radius * (1.0 + std::floor(2.0 * rng.uniform())),
                          kTwoPi * rng.uniform(), 2.0 * s.turn_radius};
      }
      // Keep only tasks whose entry is reachable from the base.
      try {
        const TaskEntry e = task_entry(t);
        (void)connect(s.base, e.point, e.heading, s.turn_radius);
        break;
      } catch (const UnreachableError&) {
        continue;
      }
    }
    s.tasks.push_back(std::move(t));
  }
  validate_scenario(s);
  return s;
}

// ---------------------------------------------------------------------------
// Entry candidates
// ---------------------------------------------------------------------------

int entry_candidate_count(const Task& task) {
  switch (task.type.index()) {
    case 0:
    case 1: return 1;
    case 2: return 2;
    case 3: return kCircleEntryCandidates;
    case 4: return 4;
  }
  return 1;
}

TaskEntry entry_candidate(const Task& task, int index) {
  if (index < 0 || index >= entry_candidate_count(task))
    throw std::invalid_argument("entry_candidate: index out of range");
  if (std::holds_alternative<PointFreeTask>(task.type))
    return {task.position, std::nullopt, 0};
  if (const auto* p = std::get_if<PointConstrainedTask>(&task.type))
    return {task.position, normalize_angle(p->entry_heading), 0};
  if (const auto* l = std::get_if<LineTask>(&task.type)) {
    const Vec2 a = task.position;
    const Vec2 b = l->endpoint_b;
    if (index == 0) return {a, normalize_angle(std::atan2(b.y - a.y, b.x - a.x)), 0};
    return {b, normalize_angle(std::atan2(a.y - b.y, a.x - b.x)), 1};
  }
  if (const auto* c = std::get_if<CircleTask>(&task.type)) {
    // Candidate tangent points, flown counterclockwise.
    const double phi = kTwoPi * index / kCircleEntryCandidates;
    const Vec2 point = task.position + c->radius * heading_vector(phi);
    return {point, normalize_angle(phi + kPi / 2.0), index};
  }
  const auto& a = std::get<AreaTask>(task.type);
  const bool flip_x = (index & 1) != 0;
  const bool flip_y = (index & 2) != 0;
  const Vec2 ex = heading_vector(a.orientation);
  const Vec2 ey = heading_vector(a.orientation + kPi / 2.0);
  const int lanes = static_cast<int>(std::floor(a.height / a.lane_spacing + 1e-9)) + 1;
  Vec2 corner = task.position;
  if (flip_x) corner = corner + a.width * ex;
  if (flip_y) corner = corner + ((lanes - 1) * a.lane_spacing) * ey;
  const double heading = normalize_angle(a.orientation + (flip_x ? kPi : 0.0));
  return {corner, heading, index};
}

TaskEntry task_entry(const Task& task) { return entry_candidate(task, 0); }

TaskEntry select_entry(const Task& task, const Pose& from, double turn_radius) {
  const int n = entry_candidate_count(task);
  std::optional<TaskEntry> best;
  double best_cost = 0.0;
  for (int i = 0; i < n; ++i) {
    TaskEntry cand = entry_candidate(task, i);
    try {
      const double cost = connect(from, cand.point, cand.heading, turn_radius).total_length;
      if (!best || cost < best_cost) {
        best = cand;
        best_cost = cost;
      }
    } catch (const UnreachableError&) {
      continue;
    }
  }
  if (!best) throw UnreachableError("select_entry: no reachable entry candidate");
  return *best;
}

// ---------------------------------------------------------------------------
// Coverage paths
// ---------------------------------------------------------------------------

double coverage_length(const Task& task, double turn_radius) {
  if (const auto* c = std::get_if<CircleTask>(&task.type)) {
    if (c->radius < turn_radius)
      throw ScenarioError("coverage_length: circle radius below turn radius");
    return c->sweeps * kTwoPi * c->radius;
  }
  if (const auto* l = std::get_if<LineTask>(&task.type))
    return distance(task.position, l->endpoint_b);
  if (const auto* a = std::get_if<AreaTask>(&task.type)) {
    if (a->lane_spacing < 2.0 * turn_radius)
      throw ScenarioError("coverage_length: lane spacing below turn diameter");
    const int lanes = static_cast<int>(std::floor(a->height / a->lane_spacing + 1e-9)) + 1;
    const double turn_len = kPi * turn_radius + (a->lane_spacing - 2.0 * turn_radius);
    return lanes * a->width + (lanes - 1) * turn_len;
  }
  return 0.0;  // flyover
}

namespace {

CoveragePlan area_plan(const AreaTask& area, const Task& task, const Pose& entry_pose,
                       double turn_radius) {
  if (area.lane_spacing < 2.0 * turn_radius)
    throw ScenarioError("coverage_plan: lane spacing below turn diameter");
  int candidate = -1;
  for (int i = 0; i < 4; ++i) {
    const TaskEntry c = entry_candidate(task, i);
    if (distance(c.point, entry_pose.position()) < kEntryMatchTolerance &&
        std::abs(normalize_angle(*c.heading - entry_pose.theta + kPi) - kPi) <
            kEntryMatchTolerance) {
      candidate = i;
      break;
    }
  }
  if (candidate < 0)
    throw std::logic_error("coverage_plan: entry pose does not match area geometry");
  const bool flip_y = (candidate & 2) != 0;
  const int lanes = static_cast<int>(std::floor(area.height / area.lane_spacing + 1e-9)) + 1;
  const double lane_step = flip_y ? -1.0 : 1.0;

  CoveragePlan plan;
  plan.entry = entry_pose;
  Pose cur = entry_pose;
  for (int lane = 0; lane < lanes; ++lane) {
    plan.segments.push_back(
        Segment{SegmentKind::Straight, TurnDirection::Left, 0.0, area.width, cur});
    cur = segment_end(plan.segments.back());
    if (lane + 1 == lanes) break;
    // U-turn onto the next lane: quarter arc, cross-lane straight, quarter arc.
    const bool along = std::abs(normalize_angle(cur.theta - area.orientation + kPi) - kPi) <
                       1e-9;  // heading matches the base orientation
    const TurnDirection turn = (along == (lane_step > 0.0)) ? TurnDirection::Left
                                                            : TurnDirection::Right;
    const double quarter = turn_radius * (kPi / 2.0);
    plan.segments.push_back(Segment{SegmentKind::Arc, turn, turn_radius, quarter, cur});
    cur = segment_end(plan.segments.back());
    const double cross = area.lane_spacing - 2.0 * turn_radius;
    if (cross > 0.0) {
      plan.segments.push_back(
          Segment{SegmentKind::Straight, turn, 0.0, cross, cur});
      cur = segment_end(plan.segments.back());
    }
    plan.segments.push_back(Segment{SegmentKind::Arc, turn, turn_radius, quarter, cur});
    cur = segment_end(plan.segments.back());
  }
  plan.length = segments_length(plan.segments);
  plan.exit = cur;
  return plan;
}

}  // namespace

CoveragePlan coverage_plan(const Task& task, const Pose& entry_pose, double turn_radius) {
  CoveragePlan plan;
  plan.entry = entry_pose;
  plan.exit = entry_pose;
  plan.length = 0.0;
  if (std::holds_alternative<PointFreeTask>(task.type) ||
      std::holds_alternative<PointConstrainedTask>(task.type)) {
    return plan;  // flyover
  }
  if (const auto* l = std::get_if<LineTask>(&task.type)) {
    const Vec2 a = task.position;
    const Vec2 b = l->endpoint_b;
    Vec2 target;
    if (distance(entry_pose.position(), a) < kEntryMatchTolerance) {
      target = b;
    } else if (distance(entry_pose.position(), b) < kEntryMatchTolerance) {
      target = a;
    } else {
      throw std::logic_error("coverage_plan: entry pose does not match line endpoints");
    }
    const double len = distance(entry_pose.position(), target);
    plan.segments = {
        Segment{SegmentKind::Straight, TurnDirection::Left, 0.0, len, entry_pose}};
    plan.length = len;
    plan.exit = segment_end(plan.segments.front());
    return plan;
  }
  if (const auto* c = std::get_if<CircleTask>(&task.type)) {
    if (c->radius < turn_radius)
      throw ScenarioError("coverage_plan: circle radius below turn radius");
    const double len = c->sweeps * kTwoPi * c->radius;
    plan.segments = {
        Segment{SegmentKind::Arc, TurnDirection::Left, c->radius, len, entry_pose}};
    plan.length = len;
    plan.exit = entry_pose;  // whole sweeps end where they began
    return plan;
  }
  return area_plan(std::get<AreaTask>(task.type), task, entry_pose, turn_radius);
}

}  // namespace uavplan
