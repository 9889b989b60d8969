#include "uavplan/allocation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "uavplan/errors.hpp"

namespace uavplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dubins_entry_cost(const Pose& from, const Task& task, double turn_radius) {
  try {
    const TaskEntry entry = select_entry(task, from, turn_radius);
    return connect(from, entry.point, entry.heading, turn_radius).total_length +
           coverage_length(task, turn_radius);
  } catch (const UnreachableError&) {
    return kInf;
  }
}

double euclid_entry_cost(const Pose& from, const Task& task, double turn_radius) {
  return distance(from.position(), task.position) + coverage_length(task, turn_radius);
}

double entry_cost(const Pose& from, const Task& task, Metric metric, double turn_radius) {
  return metric == Metric::DubinsCsCsc ? dubins_entry_cost(from, task, turn_radius)
                                       : euclid_entry_cost(from, task, turn_radius);
}

double default_auction_epsilon(const CostRows& cost) {
  double sum = 0.0;
  int n = 0;
  for (const auto& row : cost)
    for (double v : row)
      if (std::isfinite(v)) {
        sum += v;
        ++n;
      }
  if (n == 0 || sum <= 0.0) return 1e-3;
  return 1e-3 * (sum / n);
}

struct Pools {
  // candidate task ids per idle uav (same order as the idle list)
  std::vector<std::vector<int>> by_uav;
  std::vector<bool> fallback;
};

std::vector<int> unassigned_in_cluster(const DecisionContext& ctx, int cluster) {
  std::vector<int> out;
  for (const auto& t : ctx.tasks) {
    if (t.state != TaskState::Unassigned) continue;
    const auto it = ctx.clusters->membership.find(t.id);
    if (it != ctx.clusters->membership.end() && it->second == cluster) out.push_back(t.id);
  }
  return out;
}

Pools candidate_pools(const DecisionContext& ctx, const StrategyConfig& cfg,
                      const std::vector<const Uav*>& idle,
                      const std::vector<int>& all_unassigned) {
  Pools pools;
  pools.by_uav.resize(idle.size());
  pools.fallback.assign(idle.size(), false);
  for (size_t i = 0; i < idle.size(); ++i) {
    const Uav& u = *idle[i];
    if (!cfg.cluster_restricted || ctx.clusters == nullptr || !u.cluster) {
      pools.by_uav[i] = all_unassigned;
      continue;
    }
    pools.by_uav[i] = unassigned_in_cluster(ctx, *u.cluster);
    if (pools.by_uav[i].empty() && cfg.cluster_fallback) {
      // Nearest active cluster that still has open tasks.
      int best = -1;
      double best_d = kInf;
      for (int c = 0; c < static_cast<int>(ctx.clusters->centroids.size()); ++c) {
        if (!ctx.clusters->active[c] || c == *u.cluster) continue;
        const double d = distance(u.pose.position(), ctx.clusters->centroids[c]);
        if (d < best_d && !unassigned_in_cluster(ctx, c).empty()) {
          best_d = d;
          best = c;
        }
      }
      if (best >= 0) {
        pools.by_uav[i] = unassigned_in_cluster(ctx, best);
        pools.fallback[i] = true;
      }
    }
  }
  return pools;
}

void commit_pair(DecisionContext& ctx, Uav& uav, Task& task) {
  const TaskEntry entry = select_entry(task, uav.pose, ctx.turn_radius);
  DubinsPath path = connect(uav.pose, entry.point, entry.heading, ctx.turn_radius);
  task.assign_to(uav.id, ctx.now);
  uav.state = UavState::InTransit;
  uav.current_task = task.id;
  uav.current_entry = entry;
  uav.current_path = std::move(path);
  uav.path_progress = 0.0;
  uav.current_leg = uav.first_leg_done ? LegKind::Connect : LegKind::FirstConnect;
  uav.returned = false;  // flying again; owes a fresh return leg
}

Task& task_by_id(std::vector<Task>& tasks, int id) {
  for (auto& t : tasks)
    if (t.id == id) return t;
  throw std::logic_error("decision_epoch: unknown task id");
}

Uav& uav_by_id(std::vector<Uav>& uavs, int id) {
  for (auto& u : uavs)
    if (u.id == id) return u;
  throw std::logic_error("decision_epoch: unknown uav id");
}

// Full-plan regeneration performed by the decoupled Euclidean baselines:
// sequence every open task over the fleet with straight-line costs, then
// smooth each sequence (and the return legs) into flyable paths. Only the
// total length is kept; the real-time loop re-plans at the next event.
double decoupled_plan_workload(const DecisionContext& ctx, const StrategyConfig& cfg) {
  struct VirtualTour {
    const Uav* uav;
    Vec2 end;
    std::vector<const Task*> seq;
  };
  std::vector<VirtualTour> fleet;
  for (const auto& u : ctx.uavs) {
    if (u.state == UavState::Damaged) continue;
    VirtualTour vt{&u, u.pose.position(), {}};
    if (u.current_task) {
      const Task& t = *std::find_if(ctx.tasks.begin(), ctx.tasks.end(),
                                    [&](const Task& x) { return x.id == *u.current_task; });
      vt.seq.push_back(&t);
      vt.end = t.position;
    }
    fleet.push_back(std::move(vt));
  }
  if (fleet.empty()) return 0.0;

  std::vector<const Task*> pool;
  for (const auto& t : ctx.tasks)
    if (t.state == TaskState::Unassigned) pool.push_back(&t);

  if (cfg.strategy == Strategy::Greedy) {
    while (!pool.empty()) {
      for (auto& vt : fleet) {
        if (pool.empty()) break;
        size_t best = 0;
        double best_c = kInf;
        for (size_t j = 0; j < pool.size(); ++j) {
          const double c = distance(vt.end, pool[j]->position) +
                           coverage_length(*pool[j], ctx.turn_radius);
          if (c < best_c) {
            best_c = c;
            best = j;
          }
        }
        vt.seq.push_back(pool[best]);
        vt.end = pool[best]->position;
        pool.erase(pool.begin() + best);
      }
    }
  } else {
    while (!pool.empty()) {
      CostRows round(fleet.size(), std::vector<double>(pool.size(), 0.0));
      for (size_t i = 0; i < fleet.size(); ++i)
        for (size_t j = 0; j < pool.size(); ++j)
          round[i][j] = distance(fleet[i].end, pool[j]->position) +
                        coverage_length(*pool[j], ctx.turn_radius);
      const MatrixAssignment sol =
          cfg.strategy == Strategy::Hungarian
              ? hungarian_solve_matrix(round)
              : auction_solve_matrix(round, cfg.auction_epsilon.value_or(
                                                default_auction_epsilon(round)));
      std::vector<const Task*> taken;
      for (size_t i = 0; i < fleet.size(); ++i) {
        const int j = sol.row_to_col[i];
        if (j < 0) continue;
        fleet[i].seq.push_back(pool[j]);
        fleet[i].end = pool[j]->position;
        taken.push_back(pool[j]);
      }
      if (taken.empty()) break;
      std::erase_if(pool, [&](const Task* t) {
        return std::find(taken.begin(), taken.end(), t) != taken.end();
      });
    }
  }

  // Path-planning phase: chain flyable legs over each planned sequence.
  double total = 0.0;
  for (const auto& vt : fleet) {
    Pose pose = vt.uav->pose;
    for (const Task* t : vt.seq) {
      try {
        const TaskEntry entry = select_entry(*t, pose, ctx.turn_radius);
        const DubinsPath leg = connect(pose, entry.point, entry.heading, ctx.turn_radius);
        total += leg.total_length + coverage_length(*t, ctx.turn_radius);
        pose = coverage_plan(*t, leg.terminal, ctx.turn_radius).exit;
      } catch (const UnreachableError&) {
        continue;
      }
    }
    try {
      total += cs_shortest(pose, ctx.base.position(), ctx.turn_radius).total_length;
    } catch (const UnreachableError&) {
    }
  }
  return total;
}

}  // namespace

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Greedy: return "greedy";
    case Strategy::Hungarian: return "hungarian";
    case Strategy::Auction: return "auction";
  }
  return "?";
}

const char* to_string(Metric m) {
  return m == Metric::DubinsCsCsc ? "dubins" : "euclidean";
}

CostMatrix build_cost_matrix(const std::vector<const Uav*>& idle_uavs,
                             const std::vector<const Task*>& candidate_tasks, Metric metric,
                             double turn_radius) {
  CostMatrix m;
  m.metric = metric;
  for (const Uav* u : idle_uavs) {
    if (u->state != UavState::Idle)
      throw std::invalid_argument("build_cost_matrix: non-idle uav row");
    m.uav_ids.push_back(u->id);
  }
  for (const Task* t : candidate_tasks) {
    if (t->state != TaskState::Unassigned)
      throw std::invalid_argument("build_cost_matrix: non-unassigned task column");
    m.task_ids.push_back(t->id);
  }
  if (m.empty()) return m;
  m.cost.assign(idle_uavs.size(), std::vector<double>(candidate_tasks.size(), 0.0));
  for (size_t i = 0; i < idle_uavs.size(); ++i)
    for (size_t j = 0; j < candidate_tasks.size(); ++j)
      m.cost[i][j] = entry_cost(idle_uavs[i]->pose, *candidate_tasks[j], metric, turn_radius);
  return m;
}

EpochOutcome decision_epoch(DecisionContext ctx, const StrategyConfig& cfg) {
  EpochOutcome out;

  std::vector<const Uav*> idle;
  for (const auto& u : ctx.uavs)
    if (u.state == UavState::Idle && !u.returning) idle.push_back(&u);
  std::vector<int> unassigned_ids;
  for (const auto& t : ctx.tasks)
    if (t.state == TaskState::Unassigned) unassigned_ids.push_back(t.id);
  if (idle.empty() || unassigned_ids.empty()) return out;

  const auto t_start = std::chrono::steady_clock::now();

  const Pools pools = candidate_pools(ctx, cfg, idle, unassigned_ids);
  // After cluster sentinels the reconstructed matrix can be empty: every
  // idle UAV's pool exhausted. That is a no-op epoch, not a planning event.
  if (std::all_of(pools.by_uav.begin(), pools.by_uav.end(),
                  [](const std::vector<int>& p) { return p.empty(); }))
    return out;
  out.ran = true;

  if (cfg.strategy == Strategy::Greedy) {
    std::vector<int> claimed;
    for (size_t i = 0; i < idle.size(); ++i) {
      std::vector<int> open;
      for (int id : pools.by_uav[i])
        if (std::find(claimed.begin(), claimed.end(), id) == claimed.end())
          open.push_back(id);
      if (open.empty()) {
        out.unassigned_uavs.push_back(idle[i]->id);
        continue;
      }
      std::vector<double> row(open.size());
      for (size_t j = 0; j < open.size(); ++j)
        row[j] = entry_cost(idle[i]->pose, task_by_id(ctx.tasks, open[j]), cfg.metric,
                            ctx.turn_radius);
      const auto pick = greedy_select(row);
      if (!pick) {
        out.unassigned_uavs.push_back(idle[i]->id);
        continue;
      }
      claimed.push_back(open[*pick]);
      out.pairs.push_back(
          {idle[i]->id, open[*pick], row[*pick], pools.fallback[i]});
    }
  } else {
    // Joint solve over all idle UAVs; cluster restriction enters as
    // +infinity sentinels, and sentinel-only rows are dropped up front.
    std::vector<int> columns;
    for (size_t i = 0; i < idle.size(); ++i)
      for (int id : pools.by_uav[i])
        if (std::find(columns.begin(), columns.end(), id) == columns.end())
          columns.push_back(id);
    std::sort(columns.begin(), columns.end());

    std::vector<size_t> rows;
    for (size_t i = 0; i < idle.size(); ++i) {
      if (pools.by_uav[i].empty())
        out.unassigned_uavs.push_back(idle[i]->id);
      else
        rows.push_back(i);
    }
    if (!rows.empty() && !columns.empty()) {
      CostRows cost(rows.size(), std::vector<double>(columns.size(), kInf));
      for (size_t r = 0; r < rows.size(); ++r) {
        const size_t i = rows[r];
        for (int id : pools.by_uav[i]) {
          const size_t j =
              std::lower_bound(columns.begin(), columns.end(), id) - columns.begin();
          cost[r][j] = entry_cost(idle[i]->pose, task_by_id(ctx.tasks, id), cfg.metric,
                                  ctx.turn_radius);
        }
      }
      const MatrixAssignment sol =
          cfg.strategy == Strategy::Hungarian
              ? hungarian_solve_matrix(cost)
              : auction_solve_matrix(
                    cost, cfg.auction_epsilon.value_or(default_auction_epsilon(cost)));
      for (size_t r = 0; r < rows.size(); ++r) {
        const size_t i = rows[r];
        const int j = sol.row_to_col[r];
        if (j < 0) {
          out.unassigned_uavs.push_back(idle[i]->id);
          continue;
        }
        out.pairs.push_back({idle[i]->id, columns[j], cost[r][j], pools.fallback[i]});
      }
    }
  }

  for (const auto& pair : out.pairs) {
    commit_pair(ctx, uav_by_id(ctx.uavs, pair.uav_id), task_by_id(ctx.tasks, pair.task_id));
    out.any_fallback = out.any_fallback || pair.fallback;
  }

  if (cfg.metric == Metric::Euclidean)
    out.decoupled_plan_length = decoupled_plan_workload(ctx, cfg);

  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  std::sort(out.unassigned_uavs.begin(), out.unassigned_uavs.end());
  return out;
}

}  // namespace uavplan
