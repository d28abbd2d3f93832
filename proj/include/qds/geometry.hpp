#pragma once
// 2-D primitives for the maze world: vectors, line segments, ray casting and
// distance queries. Coordinates are world units, angles are radians.

#include <algorithm>
#include <cmath>
#include <limits>

namespace qds {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }

// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

struct Segment {
  Vec2 a;
  Vec2 b;
};

struct Box {
  double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

  bool contains(Vec2 p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

inline Vec2 closest_point_on_segment(Vec2 p, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double len2 = dot(e, e);
  if (len2 <= 0.0) return s.a;
  const double t = std::clamp(dot(p - s.a, e) / len2, 0.0, 1.0);
  return s.a + t * e;
}

inline double point_segment_distance(Vec2 p, const Segment& s) {
  return norm(p - closest_point_on_segment(p, s));
}

// Distance along the ray (origin o, unit direction d) to the segment, or
// +inf when the ray misses. Rays parallel to a segment count as a miss.
inline double ray_segment_hit(Vec2 o, Vec2 d, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double denom = cross(d, e);
  if (std::abs(denom) < 1e-15) return kInf;
  const Vec2 ao = s.a - o;
  const double t = cross(ao, e) / denom;
  const double u = cross(ao, d) / denom;
  if (t >= 0.0 && u >= 0.0 && u <= 1.0) return t;
  return kInf;
}

inline int orientation_sign(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

// Proper or touching intersection of two segments.
inline bool segments_intersect(const Segment& s, const Segment& t) {
  const int o1 = orientation_sign(s.a, s.b, t.a);
  const int o2 = orientation_sign(s.a, s.b, t.b);
  const int o3 = orientation_sign(t.a, t.b, s.a);
  const int o4 = orientation_sign(t.a, t.b, s.b);
  if (o1 != o2 && o3 != o4) return true;
  auto on_segment = [](Vec2 p, const Segment& q) {
    return std::min(q.a.x, q.b.x) <= p.x && p.x <= std::max(q.a.x, q.b.x) &&
           std::min(q.a.y, q.b.y) <= p.y && p.y <= std::max(q.a.y, q.b.y);
  };
  if (o1 == 0 && on_segment(t.a, s)) return true;
  if (o2 == 0 && on_segment(t.b, s)) return true;
  if (o3 == 0 && on_segment(s.a, t)) return true;
  if (o4 == 0 && on_segment(s.b, t)) return true;
  return false;
}

inline double segment_segment_distance(const Segment& s, const Segment& t) {
  if (segments_intersect(s, t)) return 0.0;
  double d = point_segment_distance(s.a, t);
  d = std::min(d, point_segment_distance(s.b, t));
  d = std::min(d, point_segment_distance(t.a, s));
  d = std::min(d, point_segment_distance(t.b, s));
  return d;
}

}  // namespace qds
