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

#include "core/manhattan_parser.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "core/error.hpp"

namespace lmd {

std::string_view RuleName(Rule rule) {
  switch (rule) {
    case Rule::kInitWorld: return "R1";
    case Rule::kWorldToRooms: return "R2";
    case Rule::kSplitVertical: return "R3";
    case Rule::kSplitHorizontal: return "R4";
    case Rule::kRoomToWalls: return "R5";
  }
  return "?";
}

namespace {

constexpr double kNeighborRadius = 0.5;
constexpr int kOrientationBins = 90;
constexpr int kSplitAttempts = 10;
constexpr std::size_t kAllPairsFallbackLimit = 2000;

double FoldedDegrees(Point2 d) {
  double deg = std::atan2(d.y, d.x) * 180.0 / std::numbers::pi;
  deg = std::fmod(deg, 90.0);
  if (deg < 0.0) deg += 90.0;
  if (deg >= 90.0) deg = 0.0;
  return deg;
}

}  // namespace

double DominantOrientation(const PointsetMap& map) {
  const auto& pts = map.points;
  if (pts.size() < 2) throw Error(ErrorCode::kDegenerateMap, "need at least two points for an orientation");

  std::vector<double> folded;
  const auto add_pair = [&](Point2 d) {
    if (d.x == 0.0 && d.y == 0.0) return;
    folded.push_back(FoldedDegrees(d));
  };

  struct Key {
    long x, y;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return std::hash<long>()(k.x * 73856093L ^ k.y * 19349663L); }
  };
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> buckets;
  const auto key_of = [](Point2 p) {
    return Key{static_cast<long>(std::floor(p.x / kNeighborRadius)), static_cast<long>(std::floor(p.y / kNeighborRadius))};
  };
  for (std::size_t i = 0; i < pts.size(); ++i) buckets[key_of(pts[i])].push_back(i);

  constexpr double kR2 = kNeighborRadius * kNeighborRadius;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Key k = key_of(pts[i]);
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        const auto it = buckets.find({k.x + dx, k.y + dy});
        if (it == buckets.end()) continue;
        for (std::size_t j : it->second) {
          if (j <= i) continue;
          const Point2 d = pts[j] - pts[i];
          if (SquaredNorm(d) <= kR2) add_pair(d);
        }
      }
    }
  }
  if (folded.empty()) {
    if (pts.size() > kAllPairsFallbackLimit) return 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) add_pair(pts[j] - pts[i]);
    }
    if (folded.empty()) throw Error(ErrorCode::kDegenerateMap, "all points coincide");
  }

  // Bin b collects folded directions in [b - 0.5, b + 0.5) degrees.
  const auto bin_of = [](double deg) {
    return static_cast<int>(std::floor(deg + 0.5)) % kOrientationBins;
  };
  std::array<std::size_t, kOrientationBins> hist{};
  for (double f : folded) ++hist[static_cast<std::size_t>(bin_of(f))];
  const int peak = static_cast<int>(std::max_element(hist.begin(), hist.end()) - hist.begin());

  double c = 0.0;
  double s = 0.0;
  for (double f : folded) {
    const int b = bin_of(f);
    const int delta = std::min((b - peak + kOrientationBins) % kOrientationBins,
                               (peak - b + kOrientationBins) % kOrientationBins);
    if (delta > 1) continue;
    const double a = 4.0 * f * std::numbers::pi / 180.0;
    c += std::cos(a);
    s += std::sin(a);
  }
  return FoldQuarter(std::atan2(s, c) / 4.0);
}

WallScore ScoreWall(const WallSegment& wall, const PointsetMap& map, double epsilon) {
  Require(epsilon > 0.0, "epsilon must be positive");
  WallScore score;
  const Point2 ab = wall.b - wall.a;
  const double len = Norm(ab);
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    const Point2 ap = map.points[i] - wall.a;
    bool hit = false;
    if (len == 0.0) {
      hit = Norm(ap) <= epsilon;
    } else {
      const double along = (ap.x * ab.x + ap.y * ab.y) / len;
      const double across = std::abs(ap.x * ab.y - ap.y * ab.x) / len;
      hit = across <= epsilon && along >= -epsilon && along <= len + epsilon;
    }
    if (hit) score.explained.push_back(i);
  }
  score.count = score.explained.size();
  return score;
}

ParseContext::ParseContext(const PointsetMap& map, double theta, double epsilon)
    : theta_(theta), epsilon_(epsilon) {
  Require(epsilon > 0.0, "epsilon must be positive");
  rotated_.reserve(map.points.size());
  for (const Point2& p : map.points) rotated_.push_back(Rotate(p, -theta));
  by_x_.reserve(rotated_.size());
  by_y_.reserve(rotated_.size());
  for (std::uint32_t i = 0; i < rotated_.size(); ++i) {
    by_x_.emplace_back(rotated_[i].x, i);
    by_y_.emplace_back(rotated_[i].y, i);
  }
  std::sort(by_x_.begin(), by_x_.end());
  std::sort(by_y_.begin(), by_y_.end());
}

Room ParseContext::Bounds() const {
  Room room;
  room.theta = theta_;
  if (rotated_.empty()) return room;
  room.x_start = by_x_.front().first;
  room.x_end = by_x_.back().first;
  room.y_start = by_y_.front().first;
  room.y_end = by_y_.back().first;
  return room;
}

template <typename Fn>
void ParseContext::ForEachInBand(const std::vector<std::pair<double, std::uint32_t>>& sorted, double center,
                                 Fn&& fn) const {
  // Widen the search window by a hair; the exact test happens in `fn`.
  const double slack = 1e-9 * (1.0 + std::abs(center));
  auto it = std::lower_bound(sorted.begin(), sorted.end(), center - epsilon_ - slack,
                             [](const auto& e, double v) { return e.first < v; });
  for (; it != sorted.end() && it->first <= center + epsilon_ + slack; ++it) fn(it->second);
}

std::size_t ParseContext::CountVertical(double x, double y0, double y1) const {
  std::size_t n = 0;
  ForEachInBand(by_x_, x, [&](std::uint32_t i) {
    const Point2& u = rotated_[i];
    if (std::abs(u.x - x) <= epsilon_ && u.y >= y0 - epsilon_ && u.y <= y1 + epsilon_) ++n;
  });
  return n;
}

std::size_t ParseContext::CountHorizontal(double y, double x0, double x1) const {
  std::size_t n = 0;
  ForEachInBand(by_y_, y, [&](std::uint32_t i) {
    const Point2& u = rotated_[i];
    if (std::abs(u.y - y) <= epsilon_ && u.x >= x0 - epsilon_ && u.x <= x1 + epsilon_) ++n;
  });
  return n;
}

void ParseContext::MarkVertical(double x, double y0, double y1, std::vector<char>& mark) const {
  ForEachInBand(by_x_, x, [&](std::uint32_t i) {
    const Point2& u = rotated_[i];
    if (std::abs(u.x - x) <= epsilon_ && u.y >= y0 - epsilon_ && u.y <= y1 + epsilon_) mark[i] = 1;
  });
}

void ParseContext::MarkHorizontal(double y, double x0, double x1, std::vector<char>& mark) const {
  ForEachInBand(by_y_, y, [&](std::uint32_t i) {
    const Point2& u = rotated_[i];
    if (std::abs(u.y - y) <= epsilon_ && u.x >= x0 - epsilon_ && u.x <= x1 + epsilon_) mark[i] = 1;
  });
}

namespace {

// R5 expansion of every room plus the explained-point union.
void Terminate(const ParseContext& context, ParsePolicy& policy, ParseResult& result) {
  std::vector<char> mark(context.point_count(), 0);
  for (std::size_t r = 0; r < result.rooms.size(); ++r) {
    const Room& room = result.rooms[r];
    policy.rules.push_back({Rule::kRoomToWalls, r, 0.0});
    const Point2 c00{room.x_start, room.y_start};
    const Point2 c10{room.x_end, room.y_start};
    const Point2 c11{room.x_end, room.y_end};
    const Point2 c01{room.x_start, room.y_end};
    // Bottom, right, top, left: the four walls of rule R5.
    const std::array<std::pair<Point2, Point2>, 4> sides{{{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}}};
    for (const auto& [u0, u1] : sides) {
      if (u0 == u1) continue;  // collapsed side of a zero-area room
      result.walls.push_back({context.ToMap(u0), context.ToMap(u1), r});
    }
    context.MarkHorizontal(room.y_start, room.x_start, room.x_end, mark);
    context.MarkHorizontal(room.y_end, room.x_start, room.x_end, mark);
    context.MarkVertical(room.x_start, room.y_start, room.y_end, mark);
    context.MarkVertical(room.x_end, room.y_start, room.y_end, mark);
  }
  for (std::size_t i = 0; i < mark.size(); ++i) {
    if (mark[i]) result.explained.push_back(i);
  }
  result.score = context.point_count() == 0
                     ? 0.0
                     : static_cast<double>(result.explained.size()) / static_cast<double>(context.point_count());
}

}  // namespace

PolicyHypothesis HypothesizePolicy(const ParseContext& context, int rule_steps, int split_hypotheses,
                                   Rng& rng) {
  Require(rule_steps >= 0, "rule step count must be non-negative");
  Require(split_hypotheses >= 1, "split hypothesis count must be positive");
  const double eps = context.epsilon();
  const double margin = 2.0 * eps;

  PolicyHypothesis hyp;
  ParsePolicy& policy = hyp.policy;
  ParseResult& result = hyp.result;
  result.theta = context.theta();
  policy.rules.push_back({Rule::kInitWorld, 0, 0.0});
  policy.rules.push_back({Rule::kWorldToRooms, 0, 0.0});
  result.rooms.push_back(context.Bounds());

  for (int step = 0; step < rule_steps; ++step) {
    std::size_t target = 0;
    bool vertical = false;
    bool found = false;
    for (int attempt = 0; attempt < kSplitAttempts && !found; ++attempt) {
      target = rng.Index(result.rooms.size());
      vertical = rng.Bernoulli(0.5);
      const Room& room = result.rooms[target];
      // The split line keeps 2*epsilon clear of both parallel walls.
      found = (vertical ? room.width() : room.height()) > 2.0 * margin;
    }
    if (!found) continue;

    Room room = result.rooms[target];
    const double lo = (vertical ? room.x_start : room.y_start) + margin;
    const double hi = (vertical ? room.x_end : room.y_end) - margin;
    double best_pos = lo;
    long best_score = -1;
    for (int h = 0; h < split_hypotheses; ++h) {
      const double pos = rng.Uniform(lo, hi);
      const auto s = static_cast<long>(vertical ? context.CountVertical(pos, room.y_start, room.y_end)
                                                : context.CountHorizontal(pos, room.x_start, room.x_end));
      if (s > best_score) {
        best_score = s;
        best_pos = pos;
      }
    }

    Room child = room;
    if (vertical) {
      room.x_end = best_pos;
      child.x_start = best_pos;
    } else {
      room.y_end = best_pos;
      child.y_start = best_pos;
    }
    result.rooms[target] = room;
    result.rooms.push_back(child);
    policy.rules.push_back({vertical ? Rule::kSplitVertical : Rule::kSplitHorizontal, target, best_pos});
  }

  Terminate(context, policy, result);
  result.policy = policy;
  return hyp;
}

PolicyHypothesis HypothesizePolicy(const PointsetMap& map, double theta, int rule_steps,
                                   int split_hypotheses, double epsilon, Rng& rng) {
  const ParseContext context(map, theta, epsilon);
  return HypothesizePolicy(context, rule_steps, split_hypotheses, rng);
}

ParseResult ParseMap(const PointsetMap& map, const ParseConfig& config) {
  Require(config.hypotheses >= 1, "policy hypothesis count must be positive");
  const double theta = DominantOrientation(map);
  const ParseContext context(map, theta, config.epsilon);
  ParseResult best;
  bool have_best = false;
  for (int k = 0; k < config.hypotheses; ++k) {
    Rng rng(MixSeed(config.seed, static_cast<std::uint64_t>(k)));
    PolicyHypothesis hyp = HypothesizePolicy(context, config.rule_steps, config.split_hypotheses, rng);
    if (!have_best || hyp.result.explained.size() > best.explained.size()) {
      best = std::move(hyp.result);
      have_best = true;
    }
  }
  return best;
}

}  // namespace lmd
