#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uavplan/simulator.hpp"

namespace uavplan {

struct MetricsReport {
  double total_distance = 0.0;
  std::vector<double> per_uav_distance;
  double max_distance_difference = 0.0;
  int max_task_count_difference = 0;
  double completion_time = 0.0;
  std::optional<double> gap;  // (total - baseline) / baseline
  bool mission_failed = false;
  int task_count = 0;
  int completed_count = 0;
  int planning_event_count = 0;
  // Wall-clock figures; everything above is deterministic for a fixed seed.
  double total_planning_time = 0.0;
  double average_planning_time = 0.0;
  double first_decision_share = 0.0;
};

MetricsReport collect_metrics(const SimResult& result,
                              std::optional<double> baseline_total);

// Deterministic fields first, wall-clock figures under "timing".
std::string metrics_to_json(const MetricsReport& m);

void write_trace_csv(const SimResult& result, const std::string& path);
void write_events_csv(const SimResult& result, const std::string& path);
void write_metrics_json(const MetricsReport& m, const std::string& path);

}  // namespace uavplan
