#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavplan/metrics.hpp"
#include "uavplan/sa_baseline.hpp"
#include "uavplan/simulator.hpp"

namespace uavplan {

// SA is the offline benchmark; the others run in the real-time loop.
// G/H suffixes pick the greedy or Hungarian strategy, AA the auction;
// RBDD* price with Dubins lengths, PRBDD* add clustering preprocessing,
// GBA/HBA/AA are the decoupled Euclidean baselines.
enum class Method { SA, GBA, HBA, AA, RBDDG, RBDDH, PRBDDG, PRBDDH };

const char* to_string(Method m);
std::optional<Method> parse_method(const std::string& name);

StrategyConfig strategy_for(Method m);  // throws std::invalid_argument for SA
bool uses_clustering(Method m);

struct BenchPlan {
  std::vector<Method> methods;
  int trials = 0;
  int uav_count = 4;
  int task_count = 25;
  double area_side = 2500.0;
  TypeMix mix;
  std::vector<uint64_t> seeds;  // one scenario per seed, shared by all methods
  std::string out_dir;
  double dt = 0.1;
  bool write_runs = true;
};

struct RunSummary {
  Method method = Method::SA;
  uint64_t seed = 0;
  double total_distance = 0.0;
  double max_distance_difference = 0.0;
  int max_task_count_difference = 0;
  double total_planning_time = 0.0;
  std::optional<double> gap;
  bool failed = false;
};

struct MethodRow {
  Method method = Method::SA;
  int runs = 0;
  int failures = 0;
  double avg_total_distance = 0.0;
  std::optional<double> avg_gap;
  double avg_max_distance_difference = 0.0;
  double avg_max_task_count_difference = 0.0;
  double avg_total_planning_time = 0.0;
  double avg_single_planning_time = 0.0;  // per task
  double avg_first_decision_share = 0.0;  // percent
};

struct BenchReport {
  std::vector<MethodRow> rows;        // in plan method order
  std::vector<RunSummary> runs;       // every (method, seed) pair
};

// Runs every method on every seed's scenario (SA solves offline and is
// smoothed; the rest simulate), averages per method, and writes summary.csv
// plus per-run metrics files under the plan's output directory.
BenchReport run_bench(const BenchPlan& plan);

// Stable column set; golden-file tested.
std::string bench_summary_csv(const BenchReport& report);

struct RunOptions {
  double dt = 0.1;
  std::string emergencies = "none";  // none, new-tasks, damage, both
  std::optional<double> damage_time;
  std::optional<int> damage_victim;
  int new_task_cap = 5;
  bool loiter = false;
  std::optional<uint64_t> seed_override;
};

// One run: writes trace.csv, events.csv and metrics.json (plus the SA chain
// trace for the SA method) under out_dir. Returns 0 on mission success and
// 3 on a mission-failed result; input errors throw.
int run_single(const Scenario& scenario, Method method, const RunOptions& options,
               const std::string& out_dir);

struct TimingRow {
  std::string cost_function;
  double mean_seconds = 0.0;
  long calls = 0;
};

// Times the three distance cost functions over shared point pairs (headings
// added per group), repeated 50 times.
std::vector<TimingRow> time_cost_functions(int samples, uint64_t seed);
std::string timing_csv(const std::vector<TimingRow>& rows);

}  // namespace uavplan
