#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "uavplan/geometry.hpp"
#include "uavplan/mission.hpp"

namespace uavplan {

struct ClusterModel {
  std::vector<Vec2> centroids;
  std::map<int, int> membership;    // task id -> cluster index
  std::vector<int> uav_of_cluster;  // cluster index -> uav id
  std::vector<bool> active;

  int cluster_of_uav(int uav_id) const;
  bool any_active() const;
};

struct KmeansResult {
  std::vector<Vec2> centroids;
  std::vector<int> assignment;  // per input point
  std::vector<double> objective_trace;
  bool repaired_empty_cluster = false;
  int iterations = 0;
};

// Lloyd iterations from a k-means++ style seeding; deterministic per seed.
// Empty clusters are reseeded from the largest cluster. Throws
// std::invalid_argument when k exceeds the number of points.
KmeansResult kmeans(const std::vector<Vec2>& points, int k, uint64_t seed, int max_iters);

// Bijection cluster -> uav minimizing total CS Dubins cost from each UAV's
// initial pose to each centroid (Hungarian solve on the K x K matrix).
std::vector<int> map_clusters_to_uavs(const std::vector<Vec2>& centroids,
                                      const std::vector<Pose>& uav_poses,
                                      double turn_radius);

// Nearest-centroid classification; with only_active, inactive clusters are
// skipped. Ties resolve to the lowest index. Throws NoAvailableUavError when
// filtering leaves no candidate cluster.
int classify_point(Vec2 p, const ClusterModel& model, bool only_active);

// Cluster the scenario's initial tasks into one cluster per UAV and map the
// clusters onto the UAVs.
ClusterModel build_cluster_model(const Scenario& scenario, const std::vector<Pose>& uav_poses,
                                 uint64_t seed);

}  // namespace uavplan
