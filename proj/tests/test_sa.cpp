#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support/oracles.hpp"
#include "uavplan/rng.hpp"
#include "uavplan/sa_baseline.hpp"

using namespace uavplan;

namespace {

Scenario small_scenario(uint64_t seed, int k, int n, double area) {
  TypeMix mix;
  return random_scenario(seed, k, n, area, mix);
}

bool is_partition(const TourSet& tours, const Scenario& s) {
  std::vector<int> seen;
  for (const auto& tour : tours.tours)
    for (int id : tour) seen.push_back(id);
  std::sort(seen.begin(), seen.end());
  if (static_cast<int>(seen.size()) != s.task_count) return false;
  for (int i = 0; i < s.task_count; ++i)
    if (seen[i] != i) return false;
  return true;
}

}  // namespace

TEST_CASE("sa_solve finds the exhaustive optimum on 1-UAV 5-task instances") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario s = small_scenario(seed, 1, 5, 1500.0);
    SaParams params;
    params.seed = seed;
    const SaResult res = sa_solve(s, params);
    CHECK(is_partition(res.best, s));

    std::vector<Vec2> pts;
    for (const auto& t : s.tasks) pts.push_back(t.position);
    const double optimum = oracles::brute_force_single_tour(s.base.position(), pts);
    CHECK(res.best.total_euclidean == doctest::Approx(optimum).epsilon(1e-9));
  }
}

TEST_CASE("sa_solve: degenerate geometry with co-located tasks") {
  Scenario s;
  s.uav_count = 2;
  s.task_count = 6;
  s.area_side = 1000.0;
  s.base = {0, 0, 0};
  for (int i = 0; i < 6; ++i) {
    Task t;
    t.id = i;
    t.position = {500, 500};
    t.type = PointFreeTask{};
    t.created_at = 0.0;
    s.tasks.push_back(t);
  }
  SaParams params;
  params.seed = 3;
  params.min_tasks_per_tour = 0;  // allow the degenerate single-tour optimum
  const SaResult res = sa_solve(s, params);
  // The optimum sends one round trip through the stacked point.
  const double round_trip = 2.0 * std::hypot(500.0, 500.0);
  CHECK(res.best.total_euclidean == doctest::Approx(round_trip).epsilon(1e-9));

  // With the per-tour floor in force both vehicles stay engaged.
  SaParams floored = params;
  floored.min_tasks_per_tour = 2;
  const SaResult res2 = sa_solve(s, floored);
  for (const auto& tour : res2.best.tours) CHECK(tour.size() >= 2);
  CHECK(res2.best.total_euclidean == doctest::Approx(2.0 * round_trip).epsilon(1e-9));
}

TEST_CASE("sa_solve is deterministic per seed and best energy never increases") {
  const Scenario s = small_scenario(9, 3, 15, 2500.0);
  SaParams params;
  params.seed = 41;
  const SaResult a = sa_solve(s, params);
  const SaResult b = sa_solve(s, params);
  CHECK(a.best.tours == b.best.tours);
  CHECK(a.best.total_euclidean == b.best.total_euclidean);
  REQUIRE(!a.trace.empty());
  for (size_t i = 1; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].best_energy <= a.trace[i - 1].best_energy + 1e-9);
    CHECK(a.trace[i].temperature < a.trace[i - 1].temperature);
  }
  CHECK(a.trace.front().temperature == doctest::Approx(50.0));
  CHECK(a.trace.back().temperature >= 10.0);
  // 0.99 cooling from 50 to 10 takes about 160 chains.
  CHECK(a.trace.size() == 161);
  CHECK(is_partition(a.best, s));
}

TEST_CASE("smooth_with_dubins: lower bound and outbound equality on straight tours") {
  // Collinear tasks ahead of the base: every outbound leg is a pure straight,
  // so the smoothed outbound length equals the Euclidean outbound length. The
  // closed tour still pays for turning around before the return leg.
  Scenario s;
  s.uav_count = 1;
  s.task_count = 3;
  s.area_side = 1000.0;
  s.base = {0, 0, 0};
  for (int i = 0; i < 3; ++i) {
    Task t;
    t.id = i;
    t.position = {100.0 * (i + 1), 0.0};
    t.type = PointFreeTask{};
    t.created_at = 0.0;
    s.tasks.push_back(t);
  }
  TourSet tours;
  tours.tours = {{0, 1, 2}};
  const TourSet smoothed = smooth_with_dubins(tours, s);
  REQUIRE(smoothed.total_dubins.has_value());
  const double outbound_euclid = 300.0;
  const double return_dubins =
      cs_shortest({300, 0, 0}, {0, 0}, s.turn_radius).total_length;
  CHECK(*smoothed.total_dubins == doctest::Approx(outbound_euclid + return_dubins));
  CHECK(return_dubins > 300.0);  // turning around costs arc length

  // Lower bound holds on random tours.
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const Scenario rs = small_scenario(100 + trial, 2, 8, 2000.0);
    SaParams params;
    params.seed = trial;
    const SaResult res = sa_solve(rs, params);
    const TourSet sm = smooth_with_dubins(res.best, rs);
    CHECK(*sm.total_dubins >= res.best.total_euclidean - 1e-6);
    CHECK(sm.per_tour_dubins.size() == sm.tours.size());
    double per_tour_sum = 0.0;
    for (double v : sm.per_tour_dubins) per_tour_sum += v;
    CHECK(per_tour_sum == doctest::Approx(*sm.total_dubins));
  }
}

TEST_CASE("smooth_with_dubins: four-task square tour against leg-by-leg geometry") {
  Scenario s;
  s.uav_count = 1;
  s.task_count = 4;
  s.area_side = 1000.0;
  s.base = {0, 0, 0};
  const Vec2 corners[4] = {{400, 0}, {400, 400}, {0, 400}, {10, 10}};
  for (int i = 0; i < 4; ++i) {
    Task t;
    t.id = i;
    t.position = corners[i];
    t.type = PointFreeTask{};
    t.created_at = 0.0;
    s.tasks.push_back(t);
  }
  TourSet tours;
  tours.tours = {{0, 1, 2, 3}};
  const TourSet smoothed = smooth_with_dubins(tours, s);

  double expect = 0.0;
  Pose pose = s.base;
  for (int i = 0; i < 4; ++i) {
    const DubinsPath leg = cs_shortest(pose, corners[i], s.turn_radius);
    expect += leg.total_length;
    pose = leg.terminal;
  }
  expect += cs_shortest(pose, s.base.position(), s.turn_radius).total_length;
  CHECK(*smoothed.total_dubins == doctest::Approx(expect));
}
