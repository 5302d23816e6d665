/*
 * Copyright 2026 The LMD Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LMD_CORE_GEOMETRY_HPP
#define LMD_CORE_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace lmd {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

inline double Norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double SquaredNorm(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double Distance(Point2 a, Point2 b) { return Norm(a - b); }

// Rotates p counter-clockwise by `angle` radians about the origin.
inline Point2 Rotate(Point2 p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

// Rigid 2D pose. Maps points from the pose's local frame into the parent
// frame: world = R(heading) * local + (x, y).
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Point2 position() const { return {x, y}; }
  Point2 ToParent(Point2 local) const { return Rotate(local, heading) + position(); }
  Point2 ToLocal(Point2 parent) const { return Rotate(parent - position(), -heading); }
  Pose2 Inverse() const {
    const Point2 t = Rotate({-x, -y}, -heading);
    return {t.x, t.y, -heading};
  }
  // this * other: expresses `other` (given in this pose's local frame) in the
  // parent frame.
  Pose2 Compose(const Pose2& other) const {
    const Point2 t = ToParent(other.position());
    return {t.x, t.y, NormalizeAngle(heading + other.heading)};
  }

  static double NormalizeAngle(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    return a;
  }

  friend bool operator==(const Pose2&, const Pose2&) = default;
};

// Folds an angle into [0, pi/2), the period of a Manhattan frame.
inline double FoldQuarter(double angle) {
  constexpr double kQuarter = std::numbers::pi / 2.0;
  double f = std::fmod(angle, kQuarter);
  if (f < 0.0) f += kQuarter;
  if (f >= kQuarter) f = 0.0;
  return f;
}

// A wall primitive; `parent_room` indexes ParseResult::rooms.
struct WallSegment {
  Point2 a;
  Point2 b;
  std::size_t parent_room = 0;

  double Length() const { return Distance(a, b); }
};

// Euclidean distance from p to the closed segment [a, b].
inline double PointSegmentDistance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = SquaredNorm(ab);
  if (len2 == 0.0) return Distance(p, a);
  const double t = std::clamp(((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2, 0.0, 1.0);
  return Distance(p, a + t * ab);
}

}  // namespace lmd

#endif  // LMD_CORE_GEOMETRY_HPP
