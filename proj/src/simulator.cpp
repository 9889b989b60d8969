#include "uavplan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "uavplan/errors.hpp"
#include "uavplan/rng.hpp"

namespace uavplan {

namespace {

constexpr uint64_t kEmergencyStreamTag = 0x454d4552ull;  // distinct per-run stream
constexpr uint64_t kClusterStreamTag = 0x434c5553ull;
constexpr long kMaxSteps = 4'000'000;

std::string format_cost(double cost) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "cost=%.6f", cost);
  return buf;
}

Task& task_by_id(std::vector<Task>& tasks, int id) {
  for (auto& t : tasks)
    if (t.id == id) return t;
  throw std::logic_error("simulator: unknown task id");
}

bool all_tasks_completed(const std::vector<Task>& tasks) {
  return std::all_of(tasks.begin(), tasks.end(),
                     [](const Task& t) { return t.state == TaskState::Completed; });
}

void accrue(Uav& u, double dist) {
  u.odometer += dist;
  switch (u.current_leg) {
    case LegKind::FirstConnect: u.parts.first_leg += dist; break;
    case LegKind::Connect: u.parts.between_tasks += dist; break;
    case LegKind::Coverage: u.parts.coverage += dist; break;
    case LegKind::Return: u.parts.return_leg += dist; break;
  }
}

// Advance along the active chain; returns true on arrival (with the pose
// snapped to `terminal` so later legs start from the commanded
// configuration).
bool advance_leg(Uav& u, const std::vector<Segment>& segments, double chain_length,
                 const Pose& terminal, double budget, double arrival_tolerance) {
  const double remaining = chain_length - u.path_progress;
  if (remaining <= std::max(arrival_tolerance, budget) + 1e-12) {
    accrue(u, std::max(0.0, remaining));
    u.path_progress = chain_length;
    u.pose = terminal;
    return true;
  }
  accrue(u, budget);
  u.path_progress += budget;
  u.pose = sample_segments(segments, u.path_progress);
  return false;
}

}  // namespace

EventTimeline EventTimeline::stochastic_new_tasks(int cap, double dt, double start,
                                                  double end) {
  EventTimeline t;
  t.window_start = start;
  t.window_end = end;
  t.new_task_cap = cap;
  t.emergence_probability = cap > 0 ? cap * dt / (end - start) : 0.0;
  return t;
}

EventTimeline EventTimeline::damage_only(std::optional<double> time,
                                         std::optional<int> victim) {
  EventTimeline t;
  t.damage_enabled = true;
  t.damage_time = time;  // absent: drawn as 50 + 10*u at run start
  t.damage_victim = victim;
  return t;
}

void SimState::log(const char* kind, int uav_id, int task_id, std::string detail) {
  events.push_back({now, kind, uav_id, task_id, std::move(detail)});
}

SimState init_state(const Scenario& scenario, const SimConfig& cfg) {
  validate_scenario(scenario);
  SimState st;
  st.scenario = scenario;
  st.tasks = scenario.tasks;
  for (auto& t : st.tasks) {
    t.state = TaskState::Unassigned;
    t.assigned_to.reset();
    if (!t.created_at) t.created_at = 0.0;
    t.assigned_at.reset();
    t.completed_at.reset();
  }
  st.next_task_id = 0;
  for (const auto& t : st.tasks) st.next_task_id = std::max(st.next_task_id, t.id + 1);

  st.uavs.resize(scenario.uav_count);
  std::vector<Pose> poses;
  for (int i = 0; i < scenario.uav_count; ++i) {
    st.uavs[i].id = i;
    st.uavs[i].pose = scenario.base;
    st.uavs[i].speed = scenario.uav_speed;
    st.uavs[i].turn_radius = scenario.turn_radius;
    poses.push_back(scenario.base);
  }

  st.clustering_enabled = cfg.preprocess_clustering;
  if (st.clustering_enabled) {
    const uint64_t seed = cfg.cluster_seed != 0 ? cfg.cluster_seed
                                                : scenario.seed ^ kClusterStreamTag;
    st.clusters = build_cluster_model(scenario, poses, seed);
    for (int c = 0; c < static_cast<int>(st.clusters.uav_of_cluster.size()); ++c)
      st.uavs[st.clusters.uav_of_cluster[c]].cluster = c;
  }
  return st;
}

Task& inject_new_task(SimState& st, Vec2 position, const TaskType& type) {
  Task t;
  t.id = st.next_task_id++;
  t.position = position;
  t.type = type;
  t.created_at = st.now;
  int cluster = -1;
  if (st.clustering_enabled) {
    cluster = classify_point(position, st.clusters, /*only_active=*/true);
    st.clusters.membership[t.id] = cluster;
  }
  st.tasks.push_back(std::move(t));
  st.log("new_task", cluster >= 0 ? st.clusters.uav_of_cluster[cluster] : -1,
         st.tasks.back().id,
         cluster >= 0 ? "cluster=" + std::to_string(cluster) : std::string());
  return st.tasks.back();
}

void inject_damage(SimState& st, int victim, double now) {
  Uav& u = st.uavs.at(victim);
  if (u.state == UavState::Damaged) {
    st.log("damage", victim, -1, "warning: already damaged");
    return;
  }
  u.state = UavState::Damaged;
  st.log("damage", victim, -1);

  if (u.current_task) {
    Task& held = task_by_id(st.tasks, *u.current_task);
    if (held.state == TaskState::Assigned) {
      held.release(now);
      st.log("release", victim, held.id);
    }
  }
  u.current_task.reset();
  u.current_path.reset();
  u.current_coverage.reset();
  u.current_entry.reset();

  if (st.clustering_enabled && u.cluster) {
    const int dead_cluster = *u.cluster;
    st.clusters.active[dead_cluster] = false;
    for (auto& t : st.tasks) {
      if (t.state != TaskState::Unassigned) continue;
      const auto it = st.clusters.membership.find(t.id);
      if (it == st.clusters.membership.end() || it->second != dead_cluster) continue;
      const int target = classify_point(t.position, st.clusters, /*only_active=*/true);
      it->second = target;
      st.log("reassign", st.clusters.uav_of_cluster[target], t.id,
             "cluster=" + std::to_string(target));
    }
  }
}

SimResult run(const Scenario& scenario, const SimConfig& cfg, const EventTimeline& timeline) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("run: dt must be > 0");
  if (cfg.arrival_tolerance < 0.0)
    throw std::invalid_argument("run: arrival tolerance must be >= 0");

  SimState st = init_state(scenario, cfg);
  SimResult res;
  res.initial_task_count = static_cast<int>(st.tasks.size());

  Rng em_rng(timeline.rng_seed != 0 ? timeline.rng_seed
                                    : scenario.seed ^ kEmergencyStreamTag);
  std::optional<double> damage_time = timeline.damage_time;
  const bool damage_enabled = timeline.damage_enabled || timeline.damage_time.has_value() ||
                              timeline.damage_victim.has_value();
  if (damage_enabled && !damage_time) damage_time = 50.0 + 10.0 * em_rng.uniform();

  std::vector<ScheduledTask> scheduled = timeline.scheduled;
  std::stable_sort(scheduled.begin(), scheduled.end(),
                   [](const ScheduledTask& a, const ScheduledTask& b) {
                     return a.time < b.time;
                   });
  size_t next_scheduled = 0;
  int stochastic_injected = 0;
  bool damage_done = false;

  const double budget = scenario.uav_speed * cfg.dt;

  for (long step = 0;; ++step) {
    if (step >= kMaxSteps) {
      res.mission_failed = true;
      res.failure_reason = "step limit exceeded";
      break;
    }
    st.now = step * cfg.dt;

    if (step % cfg.trace_every == 0)
      for (const auto& u : st.uavs)
        res.trace.push_back(
            {st.now, u.id, u.pose.x, u.pose.y, u.pose.theta, u.state, u.odometer});

    try {
      // Emergency injections due this step.
      if (damage_enabled && !damage_done && st.now >= *damage_time) {
        int victim;
        if (timeline.damage_victim) {
          victim = *timeline.damage_victim;
        } else {
          std::vector<int> alive;
          for (const auto& u : st.uavs)
            if (u.state != UavState::Damaged) alive.push_back(u.id);
          if (alive.empty()) break;
          victim = alive[em_rng.uniform_int(alive.size())];
        }
        inject_damage(st, victim, st.now);
        damage_done = true;
        ++res.damaged_count;
      }
      while (next_scheduled < scheduled.size() &&
             scheduled[next_scheduled].time <= st.now + 1e-12) {
        inject_new_task(st, scheduled[next_scheduled].position,
                        scheduled[next_scheduled].type);
        ++res.injected_count;
        ++next_scheduled;
      }
      if (timeline.emergence_probability > 0.0 &&
          stochastic_injected < timeline.new_task_cap && st.now >= timeline.window_start &&
          st.now < timeline.window_end) {
        if (em_rng.uniform() < timeline.emergence_probability) {
          const Vec2 pos{scenario.area_side * em_rng.uniform(),
                         scenario.area_side * em_rng.uniform()};
          TaskType type;
          if (em_rng.uniform() < timeline.constrained_fraction)
            type = PointConstrainedTask{kTwoPi * em_rng.uniform()};
          else
            type = PointFreeTask{};
          inject_new_task(st, pos, type);
          ++stochastic_injected;
          ++res.injected_count;
        }
      }
    } catch (const NoAvailableUavError& e) {
      res.mission_failed = true;
      res.failure_reason = e.what();
      break;
    }

    const bool no_survivor = std::all_of(st.uavs.begin(), st.uavs.end(), [](const Uav& u) {
      return u.state == UavState::Damaged;
    });
    if (no_survivor && !all_tasks_completed(st.tasks)) {
      res.mission_failed = true;
      res.failure_reason = "no surviving uav with tasks outstanding";
      break;
    }

    // New work cancels a return in progress.
    const bool any_unassigned = std::any_of(
        st.tasks.begin(), st.tasks.end(),
        [](const Task& t) { return t.state == TaskState::Unassigned; });
    if (any_unassigned) {
      for (auto& u : st.uavs) {
        if (u.returning && u.state == UavState::InTransit) {
          u.returning = false;
          u.state = UavState::Idle;
          u.current_path.reset();
          u.path_progress = 0.0;
        }
      }
    }

    // Allocation round for the idle fleet.
    {
      DecisionContext ctx{st.uavs, st.tasks, st.clustering_enabled ? &st.clusters : nullptr,
                          st.now, scenario.turn_radius, scenario.base};
      const EpochOutcome outcome = decision_epoch(ctx, cfg.strategy);
      if (outcome.ran) {
        PlanningEvent ev;
        ev.time = st.now;
        ev.wall_seconds = outcome.wall_seconds;
        ev.assignments = static_cast<int>(outcome.pairs.size());
        ev.baseline_plan_length = outcome.decoupled_plan_length;
        for (const auto& pair : outcome.pairs) ev.idle_uavs.push_back(pair.uav_id);
        for (int id : outcome.unassigned_uavs) ev.idle_uavs.push_back(id);
        std::sort(ev.idle_uavs.begin(), ev.idle_uavs.end());
        res.planning_events.push_back(std::move(ev));
        for (const auto& pair : outcome.pairs) {
          std::string detail = format_cost(pair.cost);
          detail += std::string(" strategy=") + to_string(cfg.strategy.strategy);
          if (pair.fallback) detail += " fallback=1";
          st.log("assign", pair.uav_id, pair.task_id, std::move(detail));
        }
      }
    }

    // Flight.
    for (auto& u : st.uavs) {
      if (u.state == UavState::Damaged) continue;
      if (u.state != UavState::Idle) u.loiter_circle.reset();
      switch (u.state) {
        case UavState::InTransit: {
          const DubinsPath& path = *u.current_path;
          if (advance_leg(u, path.segments, path.total_length, path.terminal, budget,
                          cfg.arrival_tolerance)) {
            if (u.returning) {
              u.returning = false;
              u.returned = true;
              u.state = UavState::Idle;
              u.current_path.reset();
              u.path_progress = 0.0;
              st.log("arrive", u.id, -1, "base");
            } else {
              u.state = UavState::Busy;
              Task& task = task_by_id(st.tasks, *u.current_task);
              u.current_coverage = coverage_plan(task, u.pose, u.turn_radius);
              u.current_path.reset();
              u.path_progress = 0.0;
              u.current_leg = LegKind::Coverage;
              st.log("arrive", u.id, task.id);
            }
          }
          break;
        }
        case UavState::Busy: {
          const CoveragePlan& plan = *u.current_coverage;
          const bool done =
              plan.length <= 0.0
                  ? true
                  : advance_leg(u, plan.segments, plan.length, plan.exit, budget,
                                cfg.arrival_tolerance);
          if (done) {
            u.pose = plan.exit;
            Task& task = task_by_id(st.tasks, *u.current_task);
            task.complete(st.now);
            st.log("complete", u.id, task.id);
            u.state = UavState::Idle;
            u.current_task.reset();
            u.current_coverage.reset();
            u.current_entry.reset();
            u.path_progress = 0.0;
            u.first_leg_done = true;
          }
          break;
        }
        case UavState::Idle: {
          if (cfg.loiter && !any_unassigned && !u.returned) {
            if (!u.loiter_circle) {
              u.loiter_circle = Segment{SegmentKind::Arc, TurnDirection::Left,
                                        u.turn_radius, kTwoPi * u.turn_radius, u.pose};
              u.loiter_progress = 0.0;
            }
            u.loiter_progress = std::fmod(u.loiter_progress + budget, kTwoPi * u.turn_radius);
            u.pose = sample_segment(*u.loiter_circle, u.loiter_progress);
            u.loiter_distance += budget;
          }
          break;
        }
        default: break;
      }
    }

    // Send the survivors home once the task set is finished. The loop stays
    // open while new tasks can still appear; a pending damage event alone
    // does not hold a finished mission.
    if (all_tasks_completed(st.tasks)) {
      bool all_home = true;
      for (auto& u : st.uavs) {
        if (u.state == UavState::Damaged) continue;
        if (u.returned) continue;
        all_home = false;
        if (!u.returning && u.state == UavState::Idle) {
          u.loiter_circle.reset();
          u.returning = true;
          u.state = UavState::InTransit;
          u.current_leg = LegKind::Return;
          u.current_path = cs_shortest(u.pose, scenario.base.position(), u.turn_radius);
          u.path_progress = 0.0;
        }
      }
      const bool new_tasks_pending =
          next_scheduled < scheduled.size() ||
          (timeline.emergence_probability > 0.0 &&
           stochastic_injected < timeline.new_task_cap && st.now < timeline.window_end);
      if (all_home && !new_tasks_pending) {
        st.now = (step + 1) * cfg.dt;
        break;
      }
    }
  }

  res.completion_time = st.now;
  for (const auto& u : st.uavs)
    res.trace.push_back(
        {st.now, u.id, u.pose.x, u.pose.y, u.pose.theta, u.state, u.odometer});

  for (const auto& u : st.uavs) {
    UavReport r;
    r.id = u.id;
    r.parts = u.parts;
    r.odometer = u.odometer;
    r.loiter_distance = u.loiter_distance;
    r.damaged = u.state == UavState::Damaged;
    r.final_pose = u.pose;
    res.per_uav.push_back(std::move(r));
  }
  for (const auto& t : st.tasks) {
    TaskRecord rec;
    rec.id = t.id;
    rec.created_at = t.created_at;
    rec.assigned_at = t.assigned_at;
    rec.completed_at = t.completed_at;
    if (t.state == TaskState::Completed) rec.executed_by = t.assigned_to;
    if (st.clustering_enabled) {
      const auto it = st.clusters.membership.find(t.id);
      if (it != st.clusters.membership.end()) rec.cluster = it->second;
    }
    res.task_timeline.push_back(std::move(rec));
  }
  // Completion order per UAV, reconstructed from the task records.
  {
    std::vector<const TaskRecord*> done;
    for (const auto& rec : res.task_timeline)
      if (rec.completed_at && rec.executed_by) done.push_back(&rec);
    std::sort(done.begin(), done.end(), [](const TaskRecord* a, const TaskRecord* b) {
      return *a->completed_at < *b->completed_at;
    });
    for (const TaskRecord* rec : done)
      res.per_uav[*rec->executed_by].task_sequence.push_back(rec->id);
  }
  res.events = std::move(st.events);
  return res;
}

}  // namespace uavplan
