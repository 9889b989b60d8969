#include "uavplan/geometry.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "uavplan/errors.hpp"

namespace uavplan {

namespace {

// Relative slack for the goal-inside-circle test, so tangency does not flap
// under floating-point noise.
constexpr double kFeasibilitySlack = 1e-9;

// A sweep this close to 2*pi is a rounded zero crossing, not a full loop.
constexpr double kSweepSnap = 1e-9;

double canonical_sweep(double raw) {
  double s = normalize_angle(raw);
  if (s > kTwoPi - kSweepSnap) s = 0.0;
  return s;
}

std::pair<TurnDirection, TurnDirection> word_turns(PathWord word) {
  switch (word) {
    case PathWord::LSL: return {TurnDirection::Left, TurnDirection::Left};
    case PathWord::LSR: return {TurnDirection::Left, TurnDirection::Right};
    case PathWord::RSL: return {TurnDirection::Right, TurnDirection::Left};
    case PathWord::RSR: return {TurnDirection::Right, TurnDirection::Right};
    default: throw std::invalid_argument("word_turns: CS word has no second arc");
  }
}

void require_positive_radius(double r, const char* who) {
  if (!(r > 0.0)) throw std::invalid_argument(std::string(who) + ": turn radius must be > 0");
}

}  // namespace

double normalize_angle(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("normalize_angle: non-finite angle");
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Vec2 turn_center(const Pose& p, double radius, TurnDirection dir) {
  const double a = p.theta + turn_sign(dir) * (kPi / 2.0);
  return {p.x + radius * std::cos(a), p.y + radius * std::sin(a)};
}

const char* to_string(PathWord word) {
  switch (word) {
    case PathWord::LS: return "LS";
    case PathWord::RS: return "RS";
    case PathWord::LSL: return "LSL";
    case PathWord::LSR: return "LSR";
    case PathWord::RSL: return "RSL";
    case PathWord::RSR: return "RSR";
  }
  return "?";
}

Pose sample_segment(const Segment& seg, double s) {
  if (s < -1e-9 || s > seg.length + 1e-9)
    throw std::invalid_argument("sample_segment: arc length out of range");
  s = std::clamp(s, 0.0, seg.length);
  if (seg.kind == SegmentKind::Straight) {
    const Vec2 d = heading_vector(seg.start.theta);
    return {seg.start.x + s * d.x, seg.start.y + s * d.y, seg.start.theta};
  }
  const double sign = turn_sign(seg.turn);
  const Vec2 c = turn_center(seg.start, seg.radius, seg.turn);
  const double a0 = seg.start.theta - sign * (kPi / 2.0);
  const double a = a0 + sign * (s / seg.radius);
  return {c.x + seg.radius * std::cos(a), c.y + seg.radius * std::sin(a),
          normalize_angle(seg.start.theta + sign * (s / seg.radius))};
}

Pose sample_segments(const std::vector<Segment>& segments, double s) {
  if (segments.empty()) throw std::invalid_argument("sample_segments: empty chain");
  double rem = s;
  for (size_t i = 0; i < segments.size(); ++i) {
    const bool last = i + 1 == segments.size();
    if (rem <= segments[i].length || last) return sample_segment(segments[i], rem);
    rem -= segments[i].length;
  }
  return sample_segment(segments.back(), segments.back().length);
}

double segments_length(const std::vector<Segment>& segments) {
  double total = 0.0;
  for (const auto& seg : segments) total += seg.length;
  return total;
}

std::optional<DubinsPath> cs_candidate(const Pose& start, Vec2 goal, double turn_radius,
                                       TurnDirection dir, CsRecord* record) {
  require_positive_radius(turn_radius, "cs_candidate");
  const double sign = turn_sign(dir);
  const Vec2 center = turn_center(start, turn_radius, dir);
  const Vec2 rel = goal - center;
  const double len_spf = norm(rel);
  const double theta_sf = std::atan2(rel.y, rel.x);

  if (record) {
    record->theta_sf = theta_sf;
    record->len_spf = len_spf;
    record->theta_mf = 0.0;
    record->theta_m = 0.0;
    record->feasible = false;
  }
  if (len_spf < turn_radius * (1.0 - kFeasibilitySlack)) return std::nullopt;

  const double theta_mf = std::asin(std::min(1.0, turn_radius / len_spf));
  const double theta_m = normalize_angle(theta_sf + sign * (theta_mf - kPi / 2.0));
  if (record) {
    record->theta_mf = theta_mf;
    record->theta_m = theta_m;
    record->feasible = true;
  }

  const Vec2 tangent = center + turn_radius * heading_vector(theta_m);
  const double straight_len =
      std::sqrt(std::max(0.0, len_spf * len_spf - turn_radius * turn_radius));
  // Sweep from the start point's angle on the circle to the tangent point,
  // measured in the steering direction.
  const double start_angle = start.theta - sign * (kPi / 2.0);
  const double sweep = canonical_sweep(sign * (theta_m - start_angle));
  const double out_heading = normalize_angle(start.theta + sign * sweep);

  DubinsPath path;
  path.word = dir == TurnDirection::Left ? PathWord::LS : PathWord::RS;
  path.turn_radius = turn_radius;
  path.segments = {
      Segment{SegmentKind::Arc, dir, turn_radius, turn_radius * sweep, start},
      Segment{SegmentKind::Straight, dir, 0.0, straight_len,
              Pose{tangent.x, tangent.y, out_heading}},
  };
  path.total_length = turn_radius * sweep + straight_len;
  path.terminal = {goal.x, goal.y, out_heading};
  return path;
}

DubinsPath cs_shortest(const Pose& start, Vec2 goal, double turn_radius) {
  const auto ls = cs_candidate(start, goal, turn_radius, TurnDirection::Left);
  const auto rs = cs_candidate(start, goal, turn_radius, TurnDirection::Right);
  if (!ls && !rs) throw UnreachableError("cs_shortest: goal inside both turning circles");
  if (ls && rs) return ls->total_length <= rs->total_length ? *ls : *rs;
  return ls ? *ls : *rs;
}

std::optional<DubinsPath> csc_candidate(const Pose& start, const Pose& goal,
                                        double turn_radius, PathWord word) {
  require_positive_radius(turn_radius, "csc_candidate");
  const auto [first, second] = word_turns(word);
  const double s1 = turn_sign(first);
  const double s2 = turn_sign(second);
  const Vec2 c1 = turn_center(start, turn_radius, first);
  const Vec2 c2 = turn_center(goal, turn_radius, second);
  const Vec2 delta = c2 - c1;
  const double d = norm(delta);
  const double start_angle = start.theta - s1 * (kPi / 2.0);
  const double goal_angle = goal.theta - s2 * (kPi / 2.0);

  DubinsPath path;
  path.word = word;
  path.turn_radius = turn_radius;
  path.terminal = goal;

  if (first == second && d < kFeasibilitySlack * turn_radius) {
    // Coinciding circles: a single arc realizes the goal configuration.
    const double sweep = canonical_sweep(s1 * (goal_angle - start_angle));
    const Pose mid{goal.x, goal.y, goal.theta};
    path.segments = {
        Segment{SegmentKind::Arc, first, turn_radius, turn_radius * sweep, start},
        Segment{SegmentKind::Straight, first, 0.0, 0.0, mid},
        Segment{SegmentKind::Arc, second, turn_radius, 0.0, mid},
    };
    path.total_length = turn_radius * sweep;
    return path;
  }

  const double phi = std::atan2(delta.y, delta.x);
  double psi1;
  double psi2;
  double straight_len;
  if (first == second) {
    // Outer tangent, parallel to the center line.
    psi1 = phi - s1 * (kPi / 2.0);
    psi2 = psi1;
    straight_len = d;
  } else {
    // Inner tangent, crossing between the circles.
    if (d < 2.0 * turn_radius * (1.0 - kFeasibilitySlack)) return std::nullopt;
    const double alpha = std::acos(std::min(1.0, 2.0 * turn_radius / d));
    psi1 = phi - s1 * alpha;
    psi2 = psi1 + kPi;
    straight_len = std::sqrt(std::max(0.0, d * d - 4.0 * turn_radius * turn_radius));
  }

  const double sweep1 = canonical_sweep(s1 * (psi1 - start_angle));
  const double sweep2 = canonical_sweep(s2 * (goal_angle - psi2));
  const double mid_heading = normalize_angle(start.theta + s1 * sweep1);
  const Vec2 m1 = c1 + turn_radius * heading_vector(psi1);
  const Vec2 m2 = c2 + turn_radius * heading_vector(psi2);

  path.segments = {
      Segment{SegmentKind::Arc, first, turn_radius, turn_radius * sweep1, start},
      Segment{SegmentKind::Straight, first, 0.0, straight_len,
              Pose{m1.x, m1.y, mid_heading}},
      Segment{SegmentKind::Arc, second, turn_radius, turn_radius * sweep2,
              Pose{m2.x, m2.y, mid_heading}},
  };
  path.total_length = turn_radius * sweep1 + straight_len + turn_radius * sweep2;
  return path;
}

DubinsPath csc_shortest(const Pose& start, const Pose& goal, double turn_radius) {
  static constexpr std::array<PathWord, 4> kWords = {PathWord::LSL, PathWord::LSR,
                                                     PathWord::RSL, PathWord::RSR};
  std::optional<DubinsPath> best;
  for (PathWord word : kWords) {
    auto cand = csc_candidate(start, goal, turn_radius, word);
    if (cand && (!best || cand->total_length < best->total_length)) best = std::move(cand);
  }
  if (!best) throw UnreachableError("csc_shortest: no feasible word");
  return *best;
}

DubinsPath connect(const Pose& start, Vec2 point, std::optional<double> heading,
                   double turn_radius) {
  if (!heading) return cs_shortest(start, point, turn_radius);
  return csc_shortest(start, Pose{point.x, point.y, normalize_angle(*heading)}, turn_radius);
}

Pose sample_pose(const DubinsPath& path, double s) {
  if (s < -1e-9 || s > path.total_length + 1e-9)
    throw std::invalid_argument("sample_pose: arc length out of range");
  return sample_segments(path.segments, std::clamp(s, 0.0, path.total_length));
}

}  // namespace uavplan
