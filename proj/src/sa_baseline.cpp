#include "uavplan/sa_baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "uavplan/errors.hpp"
#include "uavplan/rng.hpp"

namespace uavplan {

namespace {

const Task& task_by_id(const Scenario& s, int id) {
  for (const auto& t : s.tasks)
    if (t.id == id) return t;
  throw std::logic_error("sa: unknown task id");
}

double tour_length(const Scenario& s, const std::vector<int>& tour) {
  if (tour.empty()) return 0.0;
  double len = distance(s.base.position(), task_by_id(s, tour.front()).position);
  for (size_t i = 0; i + 1 < tour.size(); ++i)
    len += distance(task_by_id(s, tour[i]).position, task_by_id(s, tour[i + 1]).position);
  len += distance(task_by_id(s, tour.back()).position, s.base.position());
  for (int id : tour) len += coverage_length(task_by_id(s, id), s.turn_radius);
  return len;
}

double total_energy(const Scenario& s, const std::vector<std::vector<int>>& tours) {
  double sum = 0.0;
  for (const auto& t : tours) sum += tour_length(s, t);
  return sum;
}

std::vector<std::vector<int>> nearest_neighbor_tours(const Scenario& s) {
  std::vector<std::vector<int>> tours(s.uav_count);
  std::vector<Vec2> ends(s.uav_count, s.base.position());
  std::vector<int> open;
  for (const auto& t : s.tasks) open.push_back(t.id);
  int k = 0;
  while (!open.empty()) {
    size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < open.size(); ++j) {
      const double d = distance(ends[k], task_by_id(s, open[j]).position);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    tours[k].push_back(open[best]);
    ends[k] = task_by_id(s, open[best]).position;
    open.erase(open.begin() + best);
    k = (k + 1) % s.uav_count;
  }
  return tours;
}

}  // namespace

SaResult sa_solve(const Scenario& scenario, const SaParams& params) {
  validate_scenario(scenario);
  if (!(params.cooling > 0.0 && params.cooling < 1.0))
    throw std::invalid_argument("sa_solve: cooling must be in (0, 1)");
  if (!(params.t_min < params.t0))
    throw std::invalid_argument("sa_solve: t_min must be below t0");

  const auto t_start = std::chrono::steady_clock::now();
  Rng rng(params.seed);
  const int k = scenario.uav_count;
  const int min_per_tour =
      std::min(params.min_tasks_per_tour, scenario.task_count / scenario.uav_count);

  std::vector<std::vector<int>> tours = nearest_neighbor_tours(scenario);
  std::vector<double> lengths(k);
  for (int i = 0; i < k; ++i) lengths[i] = tour_length(scenario, tours[i]);
  double energy = 0.0;
  for (double l : lengths) energy += l;

  std::vector<std::vector<int>> best_tours = tours;
  double best_energy = energy;

  SaResult res;
  double temperature = params.t0;
  for (int chain = 0; chain < params.max_chains && temperature >= params.t_min; ++chain) {
    for (int step = 0; step < params.chain_length; ++step) {
      const int move = static_cast<int>(rng.uniform_int(3));
      const int a = static_cast<int>(rng.uniform_int(k));
      const int b = static_cast<int>(rng.uniform_int(k));

      std::vector<int> saved_a = tours[a];
      std::vector<int> saved_b = tours[b];

      bool changed = false;
      if (move == 0) {
        // intra-tour 2-opt
        auto& t = tours[a];
        if (t.size() >= 2) {
          int i = static_cast<int>(rng.uniform_int(t.size()));
          int j = static_cast<int>(rng.uniform_int(t.size()));
          if (i != j) {
            if (i > j) std::swap(i, j);
            std::reverse(t.begin() + i, t.begin() + j + 1);
            changed = true;
          }
        }
      } else if (move == 1) {
        // relocate one task from tour a to tour b
        if (!tours[a].empty() &&
            (a == b || static_cast<int>(tours[a].size()) > min_per_tour)) {
          const int i = static_cast<int>(rng.uniform_int(tours[a].size()));
          const int id = tours[a][i];
          tours[a].erase(tours[a].begin() + i);
          auto& dst = tours[b];
          const int j = static_cast<int>(rng.uniform_int(dst.size() + 1));
          dst.insert(dst.begin() + j, id);
          changed = true;
        }
      } else {
        // swap tasks between tours
        if (!tours[a].empty() && !tours[b].empty()) {
          const int i = static_cast<int>(rng.uniform_int(tours[a].size()));
          const int j = static_cast<int>(rng.uniform_int(tours[b].size()));
          if (a != b || i != j) {
            std::swap(tours[a][i], tours[b][j]);
            changed = true;
          }
        }
      }
      if (!changed) continue;

      const double new_a = tour_length(scenario, tours[a]);
      const double new_b = a == b ? new_a : tour_length(scenario, tours[b]);
      const double delta =
          a == b ? new_a - lengths[a] : (new_a - lengths[a]) + (new_b - lengths[b]);

      const bool accept = delta <= 0.0 || rng.uniform() < std::exp(-delta / temperature);
      if (accept) {
        lengths[a] = new_a;
        if (a != b) lengths[b] = new_b;
        energy += delta;
        if (energy < best_energy) {
          best_energy = energy;
          best_tours = tours;
        }
      } else {
        tours[a] = std::move(saved_a);
        if (a != b) tours[b] = std::move(saved_b);
      }
    }
    res.trace.push_back({chain, temperature, best_energy});
    temperature *= params.cooling;
  }

  res.best.tours = std::move(best_tours);
  res.best.total_euclidean = total_energy(scenario, res.best.tours);
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

TourSet smooth_with_dubins(const TourSet& tours, const Scenario& scenario) {
  TourSet out = tours;
  out.per_tour_dubins.assign(tours.tours.size(), 0.0);
  double total = 0.0;
  for (size_t k = 0; k < tours.tours.size(); ++k) {
    double tour_total = 0.0;
    Pose pose = scenario.base;
    for (size_t i = 0; i < tours.tours[k].size(); ++i) {
      const Task& task = task_by_id(scenario, tours.tours[k][i]);
      try {
        const TaskEntry entry = select_entry(task, pose, scenario.turn_radius);
        const DubinsPath leg = connect(pose, entry.point, entry.heading, scenario.turn_radius);
        tour_total += leg.total_length + coverage_length(task, scenario.turn_radius);
        pose = coverage_plan(task, leg.terminal, scenario.turn_radius).exit;
      } catch (const UnreachableError&) {
        throw UnreachableError("smooth_with_dubins: unreachable leg to task " +
                               std::to_string(task.id) + " in tour " + std::to_string(k));
      }
    }
    try {
      tour_total +=
          cs_shortest(pose, scenario.base.position(), scenario.turn_radius).total_length;
    } catch (const UnreachableError&) {
      throw UnreachableError("smooth_with_dubins: unreachable return leg in tour " +
                             std::to_string(k));
    }
    out.per_tour_dubins[k] = tour_total;
    total += tour_total;
  }
  out.total_dubins = total;
  return out;
}

void write_sa_trace_csv(const std::vector<SaChainStat>& trace, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open SA trace file: " + path);
  f << "chain,temperature,best_energy\n";
  char line[128];
  for (const auto& s : trace) {
    std::snprintf(line, sizeof(line), "%d,%.6f,%.6f\n", s.chain, s.temperature, s.best_energy);
    f << line;
  }
}

}  // namespace uavplan
