#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "support/oracles.hpp"
#include "uavplan/errors.hpp"
#include "uavplan/mission.hpp"
#include "uavplan/rng.hpp"
#include "uavplan/scenario_io.hpp"

using namespace uavplan;

namespace {

Task make_task(int id, Vec2 pos, TaskType type) {
  Task t;
  t.id = id;
  t.position = pos;
  t.type = std::move(type);
  t.created_at = 0.0;
  return t;
}

Pose replay_chain(const std::vector<Segment>& segments) {
  Pose pose = segments.front().start;
  for (const auto& seg : segments) {
    if (seg.kind == SegmentKind::Straight) {
      pose.x += seg.length * std::cos(pose.theta);
      pose.y += seg.length * std::sin(pose.theta);
    } else {
      pose = oracles::arc_pose(pose, seg.radius, seg.turn == TurnDirection::Left ? 1.0 : -1.0,
                               seg.length / seg.radius);
    }
  }
  pose.theta = normalize_angle(pose.theta);
  return pose;
}

}  // namespace

TEST_CASE("task state machine admits only the enumerated edges") {
  Task t = make_task(0, {5, 5}, PointFreeTask{});
  CHECK(t.state == TaskState::Unassigned);
  CHECK_FALSE(t.assigned_to.has_value());
  CHECK_THROWS_AS(t.complete(1.0), std::logic_error);
  CHECK_THROWS_AS(t.release(1.0), std::logic_error);

  t.assign_to(2, 1.0);
  CHECK(t.state == TaskState::Assigned);
  CHECK(t.assigned_to == 2);
  CHECK(t.assigned_at == 1.0);
  CHECK_THROWS_AS(t.assign_to(3, 2.0), std::logic_error);

  t.release(2.0);
  CHECK(t.state == TaskState::Unassigned);
  CHECK_FALSE(t.assigned_to.has_value());
  CHECK_FALSE(t.assigned_at.has_value());

  t.assign_to(1, 3.0);
  t.complete(4.0);
  CHECK(t.state == TaskState::Completed);
  CHECK(t.completed_at == 4.0);
  CHECK_THROWS_AS(t.assign_to(0, 5.0), std::logic_error);
  CHECK_THROWS_AS(t.release(5.0), std::logic_error);

  // Fuzz: random transition requests never reach an inconsistent record.
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    Task f = make_task(trial, {1, 1}, PointFreeTask{});
    double now = 0.0;
    for (int step = 0; step < 20; ++step) {
      now += 1.0;
      const int op = static_cast<int>(rng.uniform_int(3));
      try {
        if (op == 0)
          f.assign_to(static_cast<int>(rng.uniform_int(4)), now);
        else if (op == 1)
          f.complete(now);
        else
          f.release(now);
      } catch (const std::logic_error&) {
      }
      const bool unassigned_consistent =
          f.state != TaskState::Unassigned ||
          (!f.assigned_to.has_value() && !f.completed_at.has_value());
      CHECK(unassigned_consistent);
      if (f.assigned_at && f.created_at) CHECK(*f.assigned_at >= *f.created_at);
      if (f.completed_at && f.assigned_at) CHECK(*f.completed_at >= *f.assigned_at);
    }
  }
}

TEST_CASE("task_entry: points, lines and the canonical candidates") {
  const Task free_pt = make_task(0, {5, 5}, PointFreeTask{});
  const TaskEntry e0 = task_entry(free_pt);
  CHECK(e0.point.x == 5.0);
  CHECK(e0.point.y == 5.0);
  CHECK_FALSE(e0.heading.has_value());

  const Task con_pt = make_task(1, {5, 5}, PointConstrainedTask{kPi / 2.0});
  const TaskEntry e1 = task_entry(con_pt);
  REQUIRE(e1.heading.has_value());
  CHECK(*e1.heading == doctest::Approx(kPi / 2.0));

  const Task line = make_task(2, {0, 0}, LineTask{{100, 0}});
  const TaskEntry e2 = task_entry(line);
  CHECK(e2.point.x == 0.0);
  REQUIRE(e2.heading.has_value());
  CHECK(*e2.heading == doctest::Approx(0.0));
  CHECK(entry_candidate_count(line) == 2);
  const TaskEntry e2b = entry_candidate(line, 1);
  CHECK(e2b.point.x == 100.0);
  CHECK(*e2b.heading == doctest::Approx(kPi));

  const Task circle = make_task(3, {500, 500}, CircleTask{100.0, 1});
  CHECK(entry_candidate_count(circle) == 32);
  for (int i = 0; i < 32; ++i) {
    const TaskEntry e = entry_candidate(circle, i);
    CHECK(std::hypot(e.point.x - 500.0, e.point.y - 500.0) == doctest::Approx(100.0));
    REQUIRE(e.heading.has_value());
  }

  const Task area = make_task(4, {0, 0}, AreaTask{300.0, 160.0, 0.0, 160.0});
  CHECK(entry_candidate_count(area) == 4);
}

TEST_CASE("select_entry picks the cheapest candidate deterministically") {
  const Task line = make_task(0, {200, 0}, LineTask{{400, 0}});
  // From the origin the near endpoint wins.
  const TaskEntry near = select_entry(line, {0, 0, 0}, 80.0);
  CHECK(near.candidate == 0);
  // From beyond the far endpoint the other one wins.
  const TaskEntry far = select_entry(line, {600, 0, kPi}, 80.0);
  CHECK(far.candidate == 1);
}

TEST_CASE("coverage: flyover is zero length with exit at entry") {
  const Task t = make_task(0, {5, 5}, PointFreeTask{});
  const Pose entry{5, 5, 1.0};
  const CoveragePlan plan = coverage_plan(t, entry, 80.0);
  CHECK(plan.length == 0.0);
  CHECK(plan.exit.x == entry.x);
  CHECK(plan.exit.theta == entry.theta);
  CHECK(coverage_length(t, 80.0) == 0.0);
}

TEST_CASE("coverage: line traverse runs to the far endpoint") {
  const Task t = make_task(0, {0, 0}, LineTask{{100, 0}});
  const CoveragePlan plan = coverage_plan(t, {0, 0, 0}, 80.0);
  CHECK(plan.length == doctest::Approx(100.0));
  CHECK(plan.exit.x == doctest::Approx(100.0));
  CHECK(plan.exit.y == doctest::Approx(0.0));
  CHECK(plan.exit.theta == doctest::Approx(0.0));
  CHECK(coverage_length(t, 80.0) == doctest::Approx(100.0));

  // Entering from endpoint B covers the same length the other way.
  const CoveragePlan back = coverage_plan(t, {100, 0, kPi}, 80.0);
  CHECK(back.length == doctest::Approx(100.0));
  CHECK(back.exit.x == doctest::Approx(0.0));
}

TEST_CASE("coverage: circle sweeps end at the entry configuration") {
  const Task t = make_task(0, {500, 500}, CircleTask{120.0, 2});
  const TaskEntry e = entry_candidate(t, 4);
  const Pose entry{e.point.x, e.point.y, *e.heading};
  const CoveragePlan plan = coverage_plan(t, entry, 80.0);
  CHECK(plan.length == doctest::Approx(2.0 * kTwoPi * 120.0));
  const Pose end = replay_chain(plan.segments);
  CHECK(std::hypot(end.x - entry.x, end.y - entry.y) < 1e-6);
  CHECK(coverage_length(t, 80.0) == doctest::Approx(2.0 * kTwoPi * 120.0));

  const Task tight = make_task(1, {0, 0}, CircleTask{50.0, 1});
  CHECK_THROWS_AS((void)coverage_plan(tight, entry, 80.0), ScenarioError);
}

TEST_CASE("coverage: boustrophedon lanes with U-turns") {
  const Task t = make_task(0, {0, 0}, AreaTask{300.0, 160.0, 0.0, 160.0});
  const CoveragePlan plan = coverage_plan(t, {0, 0, 0}, 80.0);
  CHECK(plan.length == doctest::Approx(600.0 + 80.0 * kPi));
  CHECK(plan.exit.theta == doctest::Approx(kPi));
  CHECK(plan.exit.x == doctest::Approx(0.0));
  CHECK(plan.exit.y == doctest::Approx(160.0));
  CHECK(coverage_length(t, 80.0) == doctest::Approx(600.0 + 80.0 * kPi));

  // Segment replay agrees with the stated exit.
  const Pose end = replay_chain(plan.segments);
  CHECK(std::hypot(end.x - plan.exit.x, end.y - plan.exit.y) < 1e-6);
  CHECK(std::abs(oracles::wrap_signed(end.theta - plan.exit.theta)) < 1e-9);

  // Every candidate entry covers the same length.
  for (int i = 0; i < 4; ++i) {
    const TaskEntry e = entry_candidate(t, i);
    const CoveragePlan p = coverage_plan(t, {e.point.x, e.point.y, *e.heading}, 80.0);
    CHECK(p.length == doctest::Approx(plan.length));
  }
}

TEST_CASE("coverage length is independent of the approaching side") {
  const Task line = make_task(0, {10, 20}, LineTask{{200, 120}});
  CHECK(coverage_length(line, 80.0) ==
        doctest::Approx(std::hypot(190.0, 100.0)));
  const Task circle = make_task(1, {0, 0}, CircleTask{90.0, 1});
  for (int i = 0; i < 32; ++i) {
    const TaskEntry e = entry_candidate(circle, i);
    const CoveragePlan p = coverage_plan(circle, {e.point.x, e.point.y, *e.heading}, 80.0);
    CHECK(p.length == doctest::Approx(coverage_length(circle, 80.0)));
  }
}

TEST_CASE("random_scenario: determinism, ranges and validation") {
  TypeMix mix;
  const Scenario a = random_scenario(7, 4, 20, 2500.0, mix);
  const Scenario b = random_scenario(7, 4, 20, 2500.0, mix);
  REQUIRE(a.tasks.size() == 20);
  for (size_t i = 0; i < a.tasks.size(); ++i) {
    CHECK(a.tasks[i].position.x == b.tasks[i].position.x);
    CHECK(a.tasks[i].position.y == b.tasks[i].position.y);
    CHECK(a.tasks[i].position.x >= 0.0);
    CHECK(a.tasks[i].position.x <= 2500.0);
    CHECK(a.tasks[i].position.y >= 0.0);
    CHECK(a.tasks[i].position.y <= 2500.0);
  }

  const Scenario c = random_scenario(8, 4, 20, 2500.0, mix);
  bool any_diff = false;
  for (size_t i = 0; i < a.tasks.size(); ++i)
    any_diff = any_diff || a.tasks[i].position.x != c.tasks[i].position.x;
  CHECK(any_diff);

  CHECK_THROWS_AS((void)random_scenario(1, 20, 4, 2500.0, mix), std::invalid_argument);
  TypeMix bad;
  bad.point_free = 0.5;
  CHECK_THROWS_AS((void)random_scenario(1, 4, 20, 2500.0, bad), std::invalid_argument);
}

TEST_CASE("scenario json round-trips bit-exactly") {
  TypeMix mix;
  mix.point_free = 0.4;
  mix.point_constrained = 0.2;
  mix.line = 0.2;
  mix.circle = 0.1;
  mix.area = 0.1;
  const Scenario a = random_scenario(42, 3, 18, 2200.0, mix);
  const std::string text = scenario_to_json(a);
  const Scenario b = scenario_from_json(text);
  REQUIRE(b.tasks.size() == a.tasks.size());
  CHECK(scenario_to_json(b) == text);  // fixed point after one round trip
  for (size_t i = 0; i < a.tasks.size(); ++i) {
    CHECK(std::memcmp(&a.tasks[i].position.x, &b.tasks[i].position.x, sizeof(double)) == 0);
    CHECK(std::memcmp(&a.tasks[i].position.y, &b.tasks[i].position.y, sizeof(double)) == 0);
    CHECK(a.tasks[i].type.index() == b.tasks[i].type.index());
  }
}

TEST_CASE("scenario json rejects malformed documents with field names") {
  CHECK_THROWS_AS((void)scenario_from_json("{"), ScenarioError);
  CHECK_THROWS_WITH_AS((void)scenario_from_json("{\"k\":4}"),
                       doctest::Contains("missing field 'n'"), ScenarioError);
  // K >= N violates the scenario invariant.
  TypeMix mix;
  Scenario s = random_scenario(7, 4, 20, 2500.0, mix);
  s.uav_count = 25;
  CHECK_THROWS_AS((void)scenario_from_json(scenario_to_json(s)), ScenarioError);
}
