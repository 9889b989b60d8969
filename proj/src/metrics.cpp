#include "uavplan/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace uavplan {

MetricsReport collect_metrics(const SimResult& result,
                              std::optional<double> baseline_total) {
  MetricsReport m;
  m.mission_failed = result.mission_failed;
  m.completion_time = result.completion_time;
  m.task_count = static_cast<int>(result.task_timeline.size());
  for (const auto& rec : result.task_timeline)
    if (rec.completed_at) ++m.completed_count;

  double min_dist = 0.0;
  double max_dist = 0.0;
  int min_count = 0;
  int max_count = 0;
  for (size_t i = 0; i < result.per_uav.size(); ++i) {
    const auto& u = result.per_uav[i];
    m.per_uav_distance.push_back(u.odometer);
    m.total_distance += u.odometer;
    const int count = static_cast<int>(u.task_sequence.size());
    if (i == 0) {
      min_dist = max_dist = u.odometer;
      min_count = max_count = count;
    } else {
      min_dist = std::min(min_dist, u.odometer);
      max_dist = std::max(max_dist, u.odometer);
      min_count = std::min(min_count, count);
      max_count = std::max(max_count, count);
    }
  }
  m.max_distance_difference = max_dist - min_dist;
  m.max_task_count_difference = max_count - min_count;

  m.planning_event_count = static_cast<int>(result.planning_events.size());
  for (const auto& ev : result.planning_events) m.total_planning_time += ev.wall_seconds;
  if (m.planning_event_count > 0) {
    m.average_planning_time = m.total_planning_time / m.planning_event_count;
    if (m.total_planning_time > 0.0)
      m.first_decision_share =
          result.planning_events.front().wall_seconds / m.total_planning_time;
  }
  if (baseline_total && *baseline_total > 0.0)
    m.gap = (m.total_distance - *baseline_total) / *baseline_total;
  return m;
}

std::string metrics_to_json(const MetricsReport& m) {
  nlohmann::ordered_json j;
  j["total_distance"] = m.total_distance;
  j["per_uav_distance"] = m.per_uav_distance;
  j["max_distance_difference"] = m.max_distance_difference;
  j["max_task_count_difference"] = m.max_task_count_difference;
  j["completion_time"] = m.completion_time;
  if (m.gap)
    j["gap"] = *m.gap;
  else
    j["gap"] = nullptr;
  j["mission_failed"] = m.mission_failed;
  j["task_count"] = m.task_count;
  j["completed_count"] = m.completed_count;
  j["planning_event_count"] = m.planning_event_count;
  j["timing"] = {{"total_planning_time", m.total_planning_time},
                 {"average_planning_time", m.average_planning_time},
                 {"first_decision_share", m.first_decision_share}};
  return j.dump(2) + "\n";
}

void write_trace_csv(const SimResult& result, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open trace file: " + path);
  f << "t,uav_id,x,y,theta,state,odometer\n";
  char line[256];
  for (const auto& row : result.trace) {
    std::snprintf(line, sizeof(line), "%.3f,%d,%.6f,%.6f,%.9f,%s,%.6f\n", row.t, row.uav_id,
                  row.x, row.y, row.theta, to_string(row.state), row.odometer);
    f << line;
  }
}

void write_events_csv(const SimResult& result, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open event file: " + path);
  f << "time,kind,uav_id,task_id,detail\n";
  char line[320];
  for (const auto& ev : result.events) {
    std::snprintf(line, sizeof(line), "%.3f,%s,%d,%d,%s\n", ev.t, ev.kind.c_str(), ev.uav_id,
                  ev.task_id, ev.detail.c_str());
    f << line;
  }
}

void write_metrics_json(const MetricsReport& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open metrics file: " + path);
  f << metrics_to_json(m);
}

}  // namespace uavplan
