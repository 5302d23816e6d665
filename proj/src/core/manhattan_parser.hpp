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

#ifndef LMD_CORE_MANHATTAN_PARSER_HPP
#define LMD_CORE_MANHATTAN_PARSER_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "core/map_model.hpp"
#include "core/random.hpp"

namespace lmd {

// Replacement rules of the Manhattan world grammar. The start symbol is the
// whole pointset; ManhattanWorld and Room are the non-terminals and Wall is
// the only terminal.
enum class Rule : std::uint8_t {
  kInitWorld = 1,         // R1: O -> M(theta)
  kWorldToRooms = 2,      // R2: M(theta) -> R(xs, ys, xe, ye)
  kSplitVertical = 3,     // R3: R -> R(xs, ys, xm, ye) R(xm, ys, xe, ye)
  kSplitHorizontal = 4,   // R4: R -> R(xs, ys, xe, ym) R(xs, ym, xe, ye)
  kRoomToWalls = 5,       // R5: R -> four orthogonal walls
};

std::string_view RuleName(Rule rule);

// Axis-aligned rectangle in the theta-rotated frame (u = R(-theta) p).
struct Room {
  double x_start = 0.0;
  double y_start = 0.0;
  double x_end = 0.0;
  double y_end = 0.0;
  double theta = 0.0;

  double width() const { return x_end - x_start; }
  double height() const { return y_end - y_start; }
  double area() const { return width() * height(); }
};

struct RuleApplication {
  Rule rule;
  std::size_t room = 0;    // room the rule rewrites (or creates, for R2)
  double position = 0.0;   // split coordinate for R3/R4, in the rotated frame
};

struct ParsePolicy {
  std::vector<RuleApplication> rules;
};

struct ParseResult {
  double theta = 0.0;  // in [0, pi/2)
  std::vector<Room> rooms;
  std::vector<WallSegment> walls;  // map frame, four per room
  double score = 0.0;              // |explained| / |points|
  std::vector<std::size_t> explained;
  ParsePolicy policy;
};

struct ParseConfig {
  int hypotheses = 100;       // K
  int rule_steps = 16;        // N
  int split_hypotheses = 20;  // H
  double epsilon = 0.1;       // meters
  std::uint64_t seed = 0;
};

// Dominant Manhattan orientation in [0, pi/2): peak of a 1-degree histogram
// of directions between points closer than 0.5 m, folded modulo 90 degrees
// and refined by the circular mean of the peak bin and its two neighbours.
// Throws Error(kDegenerateMap) for fewer than two points.
double DominantOrientation(const PointsetMap& map);

struct WallScore {
  std::size_t count = 0;
  std::vector<std::size_t> explained;
};

// Points within perpendicular distance `epsilon` of the wall whose projection
// falls inside the wall extended by `epsilon` at both ends.
WallScore ScoreWall(const WallSegment& wall, const PointsetMap& map, double epsilon);

// Pre-rotated, sorted view of a map used to score axis-aligned walls in the
// theta frame without scanning every point.
class ParseContext {
 public:
  ParseContext(const PointsetMap& map, double theta, double epsilon);

  double theta() const { return theta_; }
  double epsilon() const { return epsilon_; }
  std::size_t point_count() const { return rotated_.size(); }

  // Theta-aligned bounding box of all points.
  Room Bounds() const;

  // Number of points explained by the wall u.x = x, y in [y0, y1].
  std::size_t CountVertical(double x, double y0, double y1) const;
  // Number of points explained by the wall u.y = y, x in [x0, x1].
  std::size_t CountHorizontal(double y, double x0, double x1) const;

  void MarkVertical(double x, double y0, double y1, std::vector<char>& mark) const;
  void MarkHorizontal(double y, double x0, double x1, std::vector<char>& mark) const;

  Point2 ToMap(Point2 rotated) const { return Rotate(rotated, theta_); }

 private:
  template <typename Fn>
  void ForEachInBand(const std::vector<std::pair<double, std::uint32_t>>& sorted, double center,
                     Fn&& fn) const;

  double theta_;
  double epsilon_;
  std::vector<Point2> rotated_;
  std::vector<std::pair<double, std::uint32_t>> by_x_;
  std::vector<std::pair<double, std::uint32_t>> by_y_;
};

struct PolicyHypothesis {
  ParsePolicy policy;
  ParseResult result;
};

// One random policy: root room = theta-aligned bounding box, `rule_steps`
// split steps (each picks a room and direction uniformly and keeps the best
// of `split_hypotheses` split lines by wall score), then R5 on every room.
PolicyHypothesis HypothesizePolicy(const ParseContext& context, int rule_steps, int split_hypotheses,
                                   Rng& rng);
PolicyHypothesis HypothesizePolicy(const PointsetMap& map, double theta, int rule_steps,
                                   int split_hypotheses, double epsilon, Rng& rng);

// Best of `hypotheses` policies. Hypothesis k draws from Rng(MixSeed(seed, k)),
// so the first k hypotheses are shared by every run with the same seed; ties
// keep the lowest k.
ParseResult ParseMap(const PointsetMap& map, const ParseConfig& config);

}  // namespace lmd

#endif  // LMD_CORE_MANHATTAN_PARSER_HPP
