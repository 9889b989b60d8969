#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "uavplan/errors.hpp"
#include "uavplan/geometry.hpp"
#include "uavplan/rng.hpp"

using namespace uavplan;

namespace {

Pose random_pose(Rng& rng, double span) {
  return {span * rng.uniform(), span * rng.uniform(), kTwoPi * rng.uniform()};
}

double position_error(const Pose& a, const Pose& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double heading_error(double a, double b) {
  return std::abs(oracles::wrap_signed(a - b));
}

// Exact arc length between two sampled poses inside one segment, recovered
// from the chord and the heading change alone.
double pose_pair_arc_length(const Pose& a, const Pose& b) {
  const double chord = position_error(a, b);
  const double dtheta = std::abs(oracles::wrap_signed(b.theta - a.theta));
  if (dtheta < 1e-12) return chord;
  return chord * dtheta / (2.0 * std::sin(dtheta / 2.0));
}

}  // namespace

TEST_CASE("normalize_angle wraps into [0, 2pi)") {
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(-kPi / 2.0) == doctest::Approx(3.0 * kPi / 2.0));
  CHECK(normalize_angle(5.0 * kPi) == doctest::Approx(kPi));
  CHECK(normalize_angle(kTwoPi) == 0.0);
  for (double t : {-123.456, 1e9, -1e9, 7.0}) {
    const double r = normalize_angle(t);
    CHECK(r >= 0.0);
    CHECK(r < kTwoPi);
  }
  CHECK_THROWS_AS(normalize_angle(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(normalize_angle(INFINITY), std::invalid_argument);
}

TEST_CASE("cs_candidate: goal dead ahead is a pure straight") {
  CsRecord rec;
  const auto path = cs_candidate({0, 0, 0}, {100, 0}, 80.0, TurnDirection::Left, &rec);
  REQUIRE(path.has_value());
  CHECK(path->word == PathWord::LS);
  CHECK(path->segments.size() == 2);
  CHECK(path->segments[0].length == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(path->segments[1].length == doctest::Approx(100.0));
  CHECK(path->total_length == doctest::Approx(100.0));
  CHECK(rec.feasible);
  CHECK(rec.len_spf == doctest::Approx(std::sqrt(100.0 * 100.0 + 80.0 * 80.0)));
}

TEST_CASE("cs_candidate: antipodal goal is a semicircle with tangency") {
  const auto path = cs_candidate({0, 0, 0}, {0, 160}, 80.0, TurnDirection::Left);
  REQUIRE(path.has_value());
  CHECK(path->segments[0].length == doctest::Approx(80.0 * kPi));
  CHECK(path->segments[1].length == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(path->total_length == doctest::Approx(80.0 * kPi));
}

TEST_CASE("cs_candidate: goal inside the circle is infeasible") {
  CsRecord rec;
  const auto path = cs_candidate({0, 0, 0}, {0, 80}, 80.0, TurnDirection::Left, &rec);
  CHECK_FALSE(path.has_value());
  CHECK_FALSE(rec.feasible);
  CHECK(rec.len_spf == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)cs_candidate({0, 0, 0}, {10, 0}, -1.0, TurnDirection::Left),
                  std::invalid_argument);
}

TEST_CASE("cs_candidate matches the dense sweep-search oracle") {
  // (50, 50) sits inside the right turning circle centered at (80, 0):
  // construction and oracle agree the word is infeasible there.
  const Pose start{0, 0, kPi / 2.0};
  CHECK_FALSE(cs_candidate(start, {50, 50}, 80.0, TurnDirection::Right).has_value());
  CHECK_FALSE(
      oracles::cs_length_numeric(start, {50, 50}, 80.0, TurnDirection::Right).has_value());

  const auto path = cs_candidate(start, {150, 150}, 80.0, TurnDirection::Right);
  REQUIRE(path.has_value());
  const auto oracle =
      oracles::cs_length_numeric(start, {150, 150}, 80.0, TurnDirection::Right);
  REQUIRE(oracle.has_value());
  CHECK(std::abs(path->total_length - *oracle) < 1e-4);

  // The left word reaches the original goal; check it against the oracle too.
  const auto left = cs_candidate(start, {50, 50}, 80.0, TurnDirection::Left);
  const auto left_oracle =
      oracles::cs_length_numeric(start, {50, 50}, 80.0, TurnDirection::Left);
  REQUIRE(left.has_value());
  REQUIRE(left_oracle.has_value());
  CHECK(std::abs(left->total_length - *left_oracle) < 1e-4);
}

TEST_CASE("cs_shortest: ties break to LS and feasibility falls back") {
  const auto tie = cs_shortest({0, 0, 0}, {100, 0}, 80.0);
  CHECK(tie.word == PathWord::LS);
  CHECK(tie.total_length == doctest::Approx(100.0));

  // Antipode of the left circle: LS takes a clean semicircle, RS must wrap.
  const auto semi = cs_shortest({0, 0, 0}, {0, 160}, 80.0);
  CHECK(semi.word == PathWord::LS);
  CHECK(semi.total_length == doctest::Approx(80.0 * kPi));

  // Inside the left circle only: RS is the only word available.
  const auto rs = cs_shortest({0, 0, 0}, {20, 70}, 80.0);
  CHECK(rs.word == PathWord::RS);
}

TEST_CASE("cs_shortest equals the elementwise candidate minimum on random instances") {
  Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const Pose start = random_pose(rng, 1000.0);
    const Vec2 goal{1000.0 * rng.uniform(), 1000.0 * rng.uniform()};
    const double radius = 20.0 + 180.0 * rng.uniform();
    const auto ls = cs_candidate(start, goal, radius, TurnDirection::Left);
    const auto rs = cs_candidate(start, goal, radius, TurnDirection::Right);
    if (!ls && !rs) {
      CHECK_THROWS_AS((void)cs_shortest(start, goal, radius), UnreachableError);
      continue;
    }
    const auto best = cs_shortest(start, goal, radius);
    double expect = std::numeric_limits<double>::infinity();
    if (ls) expect = std::min(expect, ls->total_length);
    if (rs) expect = std::min(expect, rs->total_length);
    CHECK(best.total_length == expect);
  }
}

TEST_CASE("csc_shortest: collinear aligned poses give a straight LSL") {
  const auto path = csc_shortest({0, 0, 0}, {200, 0, 0}, 80.0);
  CHECK(path.word == PathWord::LSL);
  REQUIRE(path.segments.size() == 3);
  CHECK(path.segments[0].length == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(path.segments[1].length == doctest::Approx(200.0));
  CHECK(path.segments[2].length == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(path.total_length == doctest::Approx(200.0));
}

TEST_CASE("csc_shortest: semicircle onto the goal pose") {
  const auto path = csc_shortest({0, 0, 0}, {0, 160, kPi}, 80.0);
  CHECK(path.word == PathWord::LSL);
  CHECK(path.segments[0].length == doctest::Approx(80.0 * kPi));
  CHECK(path.segments[1].length == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(path.segments[2].length == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(path.total_length == doctest::Approx(80.0 * kPi));
}

TEST_CASE("csc_shortest matches the per-word bisection oracle on spread poses") {
  Rng rng(77);
  const double radius = 80.0;
  int checked = 0;
  while (checked < 2000) {
    const Pose start = random_pose(rng, 2500.0);
    const Pose goal = random_pose(rng, 2500.0);
    if (position_error(start, goal) <= 4.0 * radius) continue;
    ++checked;
    const auto oracle = oracles::csc_shortest_numeric(start, goal, radius);
    REQUIRE(oracle.has_value());
    const auto path = csc_shortest(start, goal, radius);
    CHECK(std::abs(path.total_length - *oracle) < 1e-6);
  }
}

TEST_CASE("csc terminal pose reconstructs the commanded goal") {
  Rng rng(31);
  for (int i = 0; i < 10000; ++i) {
    const Pose start = random_pose(rng, 2500.0);
    const Pose goal = random_pose(rng, 2500.0);
    const double radius = 40.0 + 120.0 * rng.uniform();
    const auto path = csc_shortest(start, goal, radius);
    const Pose replay = oracles::replay_terminal(path);
    CHECK(position_error(replay, path.terminal) < 1e-6 * radius);
    CHECK(heading_error(replay.theta, goal.theta) < 1e-9);
  }
}

TEST_CASE("cs terminal pose reconstructs the commanded goal point") {
  Rng rng(32);
  for (int i = 0; i < 10000; ++i) {
    const Pose start = random_pose(rng, 2500.0);
    const Vec2 goal{2500.0 * rng.uniform(), 2500.0 * rng.uniform()};
    const double radius = 40.0 + 120.0 * rng.uniform();
    try {
      const auto path = cs_shortest(start, goal, radius);
      const Pose replay = oracles::replay_terminal(path);
      CHECK(position_error(replay, path.terminal) < 1e-6 * radius);
    } catch (const UnreachableError&) {
      // goal inside both circles; nothing to check
    }
  }
}

TEST_CASE("connect selects CS for free headings and CSC otherwise") {
  const auto cs = connect({0, 0, 0}, {100, 0}, std::nullopt, 80.0);
  CHECK(cs.word == PathWord::LS);
  CHECK(cs.total_length == doctest::Approx(100.0));

  const auto csc = connect({0, 0, 0}, {0, 160}, kPi, 80.0);
  CHECK(csc.word == PathWord::LSL);
  CHECK(csc.total_length == doctest::Approx(80.0 * kPi));

  // A free heading can never lose to an imposed one.
  const auto free_path = connect({0, 0, 0}, {0, 160}, std::nullopt, 80.0);
  CHECK(free_path.total_length == doctest::Approx(80.0 * kPi));
  for (int i = 0; i < 64; ++i) {
    const double heading = kTwoPi * i / 64.0;
    const auto imposed = connect({0, 0, 0}, {0, 160}, heading, 80.0);
    CHECK(free_path.total_length <= imposed.total_length + 1e-9);
  }
}

TEST_CASE("lower bound: path length dominates the Euclidean distance") {
  Rng rng(5150);
  for (int i = 0; i < 5000; ++i) {
    const Pose start = random_pose(rng, 1500.0);
    const Pose goal = random_pose(rng, 1500.0);
    const double radius = 30.0 + 100.0 * rng.uniform();
    const double euclid = position_error(start, goal);
    const auto csc = csc_shortest(start, goal, radius);
    CHECK(csc.total_length >= euclid - 1e-9);
    try {
      const auto cs = cs_shortest(start, goal.position(), radius);
      CHECK(cs.total_length >= euclid - 1e-9);
    } catch (const UnreachableError&) {
    }
  }
}

TEST_CASE("scale covariance: power-of-two scaling is exact") {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const Pose start = random_pose(rng, 1000.0);
    const Pose goal = random_pose(rng, 1000.0);
    const double radius = 25.0 + 50.0 * rng.uniform();
    for (double lambda : {0.5, 2.0, 1024.0}) {
      const Pose s2{start.x * lambda, start.y * lambda, start.theta};
      const Pose g2{goal.x * lambda, goal.y * lambda, goal.theta};
      const auto base = csc_shortest(start, goal, radius);
      const auto scaled = csc_shortest(s2, g2, radius * lambda);
      REQUIRE(base.segments.size() == scaled.segments.size());
      for (size_t k = 0; k < base.segments.size(); ++k)
        CHECK(scaled.segments[k].length == base.segments[k].length * lambda);
    }
    // Non-dyadic factors agree to rounding.
    const double lambda = 1.7;
    const auto base = csc_shortest(start, goal, radius);
    const auto scaled = csc_shortest({start.x * lambda, start.y * lambda, start.theta},
                                     {goal.x * lambda, goal.y * lambda, goal.theta},
                                     radius * lambda);
    CHECK(scaled.total_length ==
          doctest::Approx(base.total_length * lambda).epsilon(1e-9));
  }
}

TEST_CASE("sample_pose: endpoints, straights and monotone arc length") {
  DubinsPath straight;
  straight.word = PathWord::LS;
  straight.turn_radius = 80.0;
  straight.segments = {Segment{SegmentKind::Arc, TurnDirection::Left, 80.0, 0.0, {0, 0, 0}},
                       Segment{SegmentKind::Straight, TurnDirection::Left, 0.0, 100.0,
                               {0, 0, 0}}};
  straight.total_length = 100.0;
  straight.terminal = {100, 0, 0};
  const Pose mid = sample_pose(straight, 40.0);
  CHECK(mid.x == doctest::Approx(40.0));
  CHECK(mid.y == doctest::Approx(0.0));
  CHECK(mid.theta == doctest::Approx(0.0));

  // Quarter of the semicircle example: on the left circle centered (0, 80),
  // a quarter sweep from the bottom lands at (80, 80) heading up.
  const auto semi = cs_shortest({0, 0, 0}, {0, 160}, 80.0);
  const Pose quarter = sample_pose(semi, 40.0 * kPi);
  CHECK(quarter.x == doctest::Approx(80.0));
  CHECK(quarter.y == doctest::Approx(80.0));
  CHECK(quarter.theta == doctest::Approx(kPi / 2.0));

  CHECK_THROWS_AS((void)sample_pose(semi, -1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)sample_pose(semi, semi.total_length + 1.0), std::invalid_argument);

  // Endpoint identity and segment-local traveled length.
  Rng rng(404);
  for (int i = 0; i < 300; ++i) {
    const Pose start = random_pose(rng, 800.0);
    const Pose goal = random_pose(rng, 800.0);
    const double radius = 40.0 + 60.0 * rng.uniform();
    const auto path = csc_shortest(start, goal, radius);
    const Pose end = sample_pose(path, path.total_length);
    CHECK(position_error(end, path.terminal) < 1e-6 * radius);

    // Pick two points within one segment; the traveled arc length recovered
    // from the sampled poses must equal the parameter difference.
    double offset = 0.0;
    for (const auto& seg : path.segments) {
      if (seg.length > 1e-6) {
        const double s1 = offset + seg.length * 0.25;
        const double s2 = offset + seg.length * 0.75;
        const Pose p1 = sample_pose(path, s1);
        const Pose p2 = sample_pose(path, s2);
        CHECK(pose_pair_arc_length(p1, p2) == doctest::Approx(s2 - s1).epsilon(1e-9));
      }
      offset += seg.length;
    }
  }
}

TEST_CASE("diagnostic record mirrors the tangent construction") {
  CsRecord rec;
  const auto path = cs_candidate({0, 0, 0}, {0, 160}, 80.0, TurnDirection::Left, &rec);
  REQUIRE(path.has_value());
  CHECK(rec.theta_sf == doctest::Approx(kPi / 2.0));
  CHECK(rec.theta_mf == doctest::Approx(kPi / 2.0));
  CHECK(rec.theta_m == doctest::Approx(kPi / 2.0));
  CHECK(rec.len_spf == doctest::Approx(80.0));
}
