#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavplan/mission.hpp"

namespace uavplan {

struct SaParams {
  double t0 = 50.0;
  double cooling = 0.99;      // exponential, applied after each chain
  int chain_length = 500;     // proposals per temperature level
  double t_min = 10.0;
  int max_chains = 1000;
  uint64_t seed = 0;
  // Minimum tasks per tour, matching the benchmark formulation's lower bound
  // on per-vehicle visits; capped at floor(N/K) so the start stays feasible.
  // Set to 0 to allow empty tours.
  int min_tasks_per_tour = 2;
};

struct TourSet {
  // One ordered task-id list per UAV; each tour implicitly starts and ends at
  // the base. Together the tours partition the task set.
  std::vector<std::vector<int>> tours;
  double total_euclidean = 0.0;
  std::optional<double> total_dubins;
  std::vector<double> per_tour_dubins;  // filled by smooth_with_dubins
};

struct SaChainStat {
  int chain = 0;
  double temperature = 0.0;
  double best_energy = 0.0;
};

struct SaResult {
  TourSet best;
  std::vector<SaChainStat> trace;
  double wall_seconds = 0.0;
};

// Offline simulated-annealing solve of the multi-tour sequencing problem on
// Euclidean leg lengths (plus the fixed coverage lengths). Starts from a
// nearest-neighbor construction; neighborhood moves are intra-tour 2-opt,
// single-task relocate, and task swap, chosen uniformly. Deterministic per
// seed; returns the best tours ever seen.
SaResult sa_solve(const Scenario& scenario, const SaParams& params);

// Replaces straight legs by chained Dubins connections (CS to unconstrained
// points, CSC to constrained entries), accumulating coverage and return legs,
// and fills total_dubins. Throws UnreachableError naming the failing leg if a
// connection cannot be built.
TourSet smooth_with_dubins(const TourSet& tours, const Scenario& scenario);

void write_sa_trace_csv(const std::vector<SaChainStat>& trace, const std::string& path);

}  // namespace uavplan
