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


#include "core/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "core/error.hpp"
#include "core/random.hpp"

namespace lmd {
namespace {

constexpr double kDoorWidth = 1.0;

// One side of the outer corridor wall: points p(s) = start + s * dir for
// s in [0, length]; rooms extend along `outward`.
struct Side {
  Point2 start;
  Point2 dir;
  Point2 outward;
  double length;
};

struct Interval {
  double lo;
  double hi;
};

void AddWallWithGaps(const Side& side, std::vector<Interval> gaps, std::vector<WallSegment>& walls) {
  std::sort(gaps.begin(), gaps.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double s = 0.0;
  for (const Interval& g : gaps) {
    if (g.lo > s) walls.push_back({side.start + s * side.dir, side.start + g.lo * side.dir});
    s = std::max(s, g.hi);
  }
  if (s < side.length) walls.push_back({side.start + s * side.dir, side.start + side.length * side.dir});
}

void AddBox(Point2 lo, Point2 hi, std::vector<WallSegment>& out) {
  const Point2 a{lo.x, lo.y};
  const Point2 b{hi.x, lo.y};
  const Point2 c{hi.x, hi.y};
  const Point2 d{lo.x, hi.y};
  out.push_back({a, b});
  out.push_back({b, c});
  out.push_back({c, d});
  out.push_back({d, a});
}

}  // namespace

double CastRay(Point2 origin, double angle, const std::vector<WallSegment>& segments, double max_range) {
  const Point2 d{std::cos(angle), std::sin(angle)};
  double best = -1.0;
  for (const WallSegment& seg : segments) {
    const Point2 e = seg.b - seg.a;
    const double denom = d.x * e.y - d.y * e.x;
    if (std::abs(denom) < 1e-12) continue;
    const Point2 w = seg.a - origin;
    const double t = (w.x * e.y - w.y * e.x) / denom;
    const double s = (w.x * d.y - w.y * d.x) / denom;
    if (t <= 1e-9 || t > max_range || s < 0.0 || s > 1.0) continue;
    if (best < 0.0 || t < best) best = t;
  }
  return best;
}

SynthWorld SynthesizeWorld(const SynthConfig& config) {
  Require(config.rooms >= 1, "synthetic world needs at least one room");
  Require(config.clutter >= 0.0 && config.clutter < 1.0, "clutter must be in [0, 1)");
  Require(config.drop >= 0.0 && config.drop < 1.0, "drop must be in [0, 1)");
  Require(config.laps >= 1 && config.beams >= 1 && config.scan_spacing > 0.0, "bad synthetic trajectory");

  Rng layout(MixSeed(config.seed, 0));
  const double width = layout.Uniform(12.0, 18.0);
  const double height = layout.Uniform(8.0, 12.0);
  const double corridor = layout.Uniform(1.8, 2.6);

  const std::array<Side, 4> sides{{
      {{0.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}, width},
      {{width, 0.0}, {0.0, 1.0}, {1.0, 0.0}, height},
      {{width, height}, {-1.0, 0.0}, {0.0, 1.0}, width},
      {{0.0, height}, {0.0, -1.0}, {-1.0, 0.0}, height},
  }};

  SynthWorld world;
  world.name = config.name;

  // Rooms along the outside of the corridor; a side's rooms never overlap.
  std::array<std::vector<Interval>, 4> room_spans;
  std::array<std::vector<Interval>, 4> doors;
  for (int r = 0; r < config.rooms; ++r) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      const std::size_t k = layout.Index(4);
      const Side& side = sides[k];
      const double w = layout.Uniform(3.0, 5.0);
      const double depth = layout.Uniform(3.0, 5.0);
      if (w > side.length) continue;
      const double a = layout.Uniform(0.0, side.length - w);
      const bool clash = std::any_of(room_spans[k].begin(), room_spans[k].end(), [&](const Interval& iv) {
        return a < iv.hi + 0.5 && a + w > iv.lo - 0.5;
      });
      if (clash) continue;
      const double door = layout.Uniform(a + 0.3, a + w - 0.3 - kDoorWidth);
      room_spans[k].push_back({a, a + w});
      doors[k].push_back({door, door + kDoorWidth});
      const Point2 p0 = side.start + a * side.dir;
      const Point2 p1 = side.start + (a + w) * side.dir;
      const Point2 q0 = p0 + depth * side.outward;
      const Point2 q1 = p1 + depth * side.outward;
      world.walls.push_back({p0, q0});
      world.walls.push_back({q0, q1});
      world.walls.push_back({q1, p1});
      break;
    }
  }
  for (std::size_t k = 0; k < 4; ++k) AddWallWithGaps(sides[k], doors[k], world.walls);
  AddBox({corridor, corridor}, {width - corridor, height - corridor}, world.walls);

  // Loop corners for a given inset from the outer wall, counter-clockwise.
  const auto corners = [&](double inset) {
    return std::array<Point2, 4>{{{inset, inset},
                                  {width - inset, inset},
                                  {width - inset, height - inset},
                                  {inset, height - inset}}};
  };
  const std::size_t start_corner = layout.Index(4);
  world.loop_length = 2.0 * (width - corridor) + 2.0 * (height - corridor);

  Rng scan_rng(MixSeed(config.seed, 1));
  double odom = 0.0;
  Point2 last{};
  bool have_last = false;
  for (int lap = 0; lap < config.laps; ++lap) {
    Rng lap_rng(MixSeed(config.seed, 100 + static_cast<std::uint64_t>(lap)));
    const double offset = lap == 0 ? 0.0 : lap_rng.Uniform(-config.lap_offset, config.lap_offset);
    const double inset = corridor / 2.0 + offset;
    const bool clockwise = lap % 2 == 1;

    // Boxes against the corridor walls, clear of doors and corners.
    std::vector<WallSegment> boxes;
    const auto count = static_cast<int>(std::lround(config.clutter * world.loop_length / 2.0));
    for (int b = 0; b < count; ++b) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        const std::size_t k = lap_rng.Index(4);
        const bool inner = lap_rng.Bernoulli(0.5);
        const double sx = lap_rng.Uniform(0.2, 0.45);
        const double sy = lap_rng.Uniform(0.2, 0.45);
        const double gap = lap_rng.Uniform(0.02, 0.08);
        const Side& side = sides[k];
        const double s = lap_rng.Uniform(corridor + 0.5, side.length - corridor - 0.5);
        const bool blocks_door = std::any_of(doors[k].begin(), doors[k].end(), [&](const Interval& iv) {
          return s + 0.5 > iv.lo && s - 0.5 < iv.hi;
        });
        if (blocks_door && !inner) continue;
        // Wall line the box leans against, and the direction into the corridor.
        const Point2 into = -1.0 * side.outward;
        const Point2 base = inner ? side.start + s * side.dir + corridor * into : side.start + s * side.dir;
        const Point2 facing = inner ? side.outward : into;
        const Point2 c0 = base + gap * facing;
        const Point2 c1 = c0 + sx * side.dir + sy * facing;
        AddBox({std::min(c0.x, c1.x), std::min(c0.y, c1.y)}, {std::max(c0.x, c1.x), std::max(c0.y, c1.y)}, boxes);
        break;
      }
    }
    world.clutter.insert(world.clutter.end(), boxes.begin(), boxes.end());
    std::vector<WallSegment> scene = world.walls;
    scene.insert(scene.end(), boxes.begin(), boxes.end());

    std::array<Point2, 4> loop = corners(inset);
    std::rotate(loop.begin(), loop.begin() + static_cast<std::ptrdiff_t>(start_corner), loop.end());
    if (clockwise) std::reverse(loop.begin() + 1, loop.end());
    const double perimeter = 2.0 * (width - 2.0 * inset) + 2.0 * (height - 2.0 * inset);
    const auto scans = static_cast<std::size_t>(std::floor(perimeter / config.scan_spacing + 1e-9));
    for (std::size_t i = 0; i < scans; ++i) {
      double s = static_cast<double>(i) * config.scan_spacing;
      std::size_t edge = 0;
      while (edge < 3 && s >= Distance(loop[edge], loop[edge + 1])) {
        s -= Distance(loop[edge], loop[edge + 1]);
        ++edge;
      }
      const Point2 from = loop[edge];
      const Point2 to = loop[(edge + 1) % 4];
      const Point2 dir = (1.0 / Distance(from, to)) * (to - from);
      const Point2 pos = from + s * dir;
      const double heading = std::atan2(dir.y, dir.x);
      if (have_last) odom += Distance(last, pos);
      last = pos;
      have_last = true;

      ScanLogEntry entry;
      entry.pose = {pos.x, pos.y, heading};
      entry.odom_distance = odom;
      for (int k = 0; k < config.beams; ++k) {
        const double rel = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(config.beams);
        double range = CastRay(pos, heading + rel, scene, config.max_range);
        const double noise = scan_rng.Normal(config.range_noise);
        const bool dropped = scan_rng.Bernoulli(config.drop);
        if (range < 0.0 || dropped) continue;
        range += noise;
        entry.points.push_back({range * std::cos(rel), range * std::sin(rel)});
      }
      world.log.push_back(std::move(entry));
    }
  }
  world.maps = WindowLog(world.log, config.window, config.stride, config.name);
  return world;
}

}  // namespace lmd
