#include "uavplan/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uavplan/assignment.hpp"
#include "uavplan/errors.hpp"
#include "uavplan/rng.hpp"

namespace uavplan {

namespace {

double sq_dist(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

int nearest_centroid(Vec2 p, const std::vector<Vec2>& centroids) {
  int best = 0;
  double best_d = sq_dist(p, centroids[0]);
  for (int c = 1; c < static_cast<int>(centroids.size()); ++c) {
    const double d = sq_dist(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

double objective(const std::vector<Vec2>& points, const std::vector<Vec2>& centroids,
                 const std::vector<int>& assignment) {
  double sum = 0.0;
  for (size_t i = 0; i < points.size(); ++i) sum += sq_dist(points[i], centroids[assignment[i]]);
  return sum;
}

}  // namespace

int ClusterModel::cluster_of_uav(int uav_id) const {
  for (int c = 0; c < static_cast<int>(uav_of_cluster.size()); ++c)
    if (uav_of_cluster[c] == uav_id) return c;
  return -1;
}

bool ClusterModel::any_active() const {
  return std::any_of(active.begin(), active.end(), [](bool a) { return a; });
}

KmeansResult kmeans(const std::vector<Vec2>& points, int k, uint64_t seed, int max_iters) {
  const int n = static_cast<int>(points.size());
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= point count");
  if (max_iters < 1) throw std::invalid_argument("kmeans: max_iters must be >= 1");

  Rng rng(seed);
  KmeansResult res;
  res.centroids.reserve(k);
  res.centroids.push_back(points[rng.uniform_int(n)]);
  std::vector<double> d2(n);
  while (static_cast<int>(res.centroids.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : res.centroids) best = std::min(best, sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng.uniform_int(n));
    } else {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    }
    res.centroids.push_back(points[pick]);
  }

  res.assignment.assign(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    ++res.iterations;
    int changed = 0;
    for (int i = 0; i < n; ++i) {
      const int c = nearest_centroid(points[i], res.centroids);
      if (c != res.assignment[i]) ++changed;
      res.assignment[i] = c;
    }
    res.objective_trace.push_back(objective(points, res.centroids, res.assignment));

    // Reseed any emptied cluster with the point of the largest cluster that
    // lies farthest from that cluster's centroid.
    std::vector<int> sizes(k, 0);
    for (int a : res.assignment) ++sizes[a];
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      res.repaired_empty_cluster = true;
      const int donor = static_cast<int>(
          std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
      int far_i = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        if (res.assignment[i] != donor) continue;
        const double d = sq_dist(points[i], res.centroids[donor]);
        if (d > far_d) {
          far_d = d;
          far_i = i;
        }
      }
      res.assignment[far_i] = c;
      --sizes[donor];
      ++sizes[c];
      ++changed;
    }

    std::vector<Vec2> sums(k, Vec2{0.0, 0.0});
    for (int i = 0; i < n; ++i) {
      sums[res.assignment[i]].x += points[i].x;
      sums[res.assignment[i]].y += points[i].y;
    }
    for (int c = 0; c < k; ++c)
      res.centroids[c] = {sums[c].x / sizes[c], sums[c].y / sizes[c]};

    if (changed == 0) break;
  }
  return res;
}

std::vector<int> map_clusters_to_uavs(const std::vector<Vec2>& centroids,
                                      const std::vector<Pose>& uav_poses,
                                      double turn_radius) {
  if (centroids.size() != uav_poses.size())
    throw std::invalid_argument("map_clusters_to_uavs: size mismatch");
  const int k = static_cast<int>(centroids.size());
  CostRows cost(k, std::vector<double>(k, 0.0));
  for (int c = 0; c < k; ++c)
    for (int u = 0; u < k; ++u) {
      try {
        cost[c][u] = cs_shortest(uav_poses[u], centroids[c], turn_radius).total_length;
      } catch (const UnreachableError&) {
        cost[c][u] = std::numeric_limits<double>::infinity();
      }
    }
  const MatrixAssignment sol = hungarian_solve_matrix(cost);
  std::vector<int> uav_of_cluster(k, -1);
  for (int c = 0; c < k; ++c) uav_of_cluster[c] = sol.row_to_col[c];
  return uav_of_cluster;
}

int classify_point(Vec2 p, const ClusterModel& model, bool only_active) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < static_cast<int>(model.centroids.size()); ++c) {
    if (only_active && !model.active[c]) continue;
    const double d = sq_dist(p, model.centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best < 0) throw NoAvailableUavError("classify_point: no active cluster available");
  return best;
}

ClusterModel build_cluster_model(const Scenario& scenario, const std::vector<Pose>& uav_poses,
                                 uint64_t seed) {
  std::vector<Vec2> points;
  points.reserve(scenario.tasks.size());
  for (const auto& t : scenario.tasks) points.push_back(t.position);
  const KmeansResult km = kmeans(points, scenario.uav_count, seed, 100);

  ClusterModel model;
  model.centroids = km.centroids;
  for (size_t i = 0; i < scenario.tasks.size(); ++i)
    model.membership[scenario.tasks[i].id] = km.assignment[i];
  model.uav_of_cluster = map_clusters_to_uavs(model.centroids, uav_poses, scenario.turn_radius);
  model.active.assign(model.centroids.size(), true);
  return model;
}

}  // namespace uavplan
