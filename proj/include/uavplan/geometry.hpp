#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace uavplan {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Wraps an angle into [0, 2*pi). Throws std::invalid_argument on non-finite input.
double normalize_angle(double theta);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 heading_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Planar configuration: position plus heading in [0, 2*pi).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  Vec2 position() const { return {x, y}; }
};

enum class TurnDirection { Left, Right };

// Left turns are counterclockwise (+), right turns clockwise (-).
inline double turn_sign(TurnDirection d) { return d == TurnDirection::Left ? 1.0 : -1.0; }

// Center of the turning circle tangent to `p` for the given steering direction.
Vec2 turn_center(const Pose& p, double radius, TurnDirection dir);

enum class PathWord { LS, RS, LSL, LSR, RSL, RSR };

const char* to_string(PathWord word);

enum class SegmentKind { Arc, Straight };

struct Segment {
  SegmentKind kind = SegmentKind::Straight;
  TurnDirection turn = TurnDirection::Left;  // arcs only
  double radius = 0.0;                       // arcs only
  double length = 0.0;
  Pose start;
};

// Pose after traveling arc length s along the segment, 0 <= s <= length.
Pose sample_segment(const Segment& seg, double s);
inline Pose segment_end(const Segment& seg) { return sample_segment(seg, seg.length); }

// Pose after traveling arc length s along a segment chain.
Pose sample_segments(const std::vector<Segment>& segments, double s);
double segments_length(const std::vector<Segment>& segments);

struct DubinsPath {
  PathWord word = PathWord::LS;
  std::vector<Segment> segments;
  double turn_radius = 0.0;
  double total_length = 0.0;
  // Commanded end configuration; replaying the segments lands here within
  // 1e-6 * turn_radius in position (and 1e-9 rad in heading for CSC words).
  Pose terminal;
};

// Construction intermediates of the CS solver, surfaced for test harnesses.
struct CsRecord {
  double theta_sf = 0.0;   // angle of the circle-center-to-goal line
  double theta_mf = 0.0;   // angle between that line and the tangent segment
  double theta_m = 0.0;    // angle of the tangent point on the turning circle
  double len_spf = 0.0;    // center-to-goal distance
  bool feasible = false;
};

// Arc-then-straight path from `start` to the goal point using one steering
// direction. Returns nullopt when the goal lies strictly inside the turning
// circle (tangency yields a zero-length straight segment).
std::optional<DubinsPath> cs_candidate(const Pose& start, Vec2 goal, double turn_radius,
                                       TurnDirection dir, CsRecord* record = nullptr);

// Shorter feasible candidate of {LS, RS}; ties go to LS.
// Throws UnreachableError when the goal is inside both turning circles.
DubinsPath cs_shortest(const Pose& start, Vec2 goal, double turn_radius);

// One of the four arc-straight-arc words between two full configurations.
std::optional<DubinsPath> csc_candidate(const Pose& start, const Pose& goal,
                                        double turn_radius, PathWord word);

// Minimum-length feasible word among {LSL, LSR, RSL, RSR}; ties resolve in
// that order. Throws UnreachableError when no word is feasible.
DubinsPath csc_shortest(const Pose& start, const Pose& goal, double turn_radius);

// CS path when no entry heading is required, CSC path otherwise.
DubinsPath connect(const Pose& start, Vec2 point, std::optional<double> heading,
                   double turn_radius);

// Pose at arc length s along the path, 0 <= s <= total_length.
Pose sample_pose(const DubinsPath& path, double s);

}  // namespace uavplan
