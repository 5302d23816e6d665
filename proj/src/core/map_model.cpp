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

#include "core/map_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "core/error.hpp"

namespace lmd {

namespace {

constexpr double kOdomSlack = 1e-9;

std::string MapId(std::string_view source, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "-%04zu", index);
  return std::string(source) + buf;
}

}  // namespace

OccupancyGrid::OccupancyGrid(double resolution, Point2 origin, std::size_t rows,
                             std::size_t cols)
    : resolution_(resolution),
      origin_(origin),
      rows_(rows),
      cols_(cols),
      labels_(rows * cols, CellLabel::kUnknown) {
  Require(resolution > 0.0, "grid resolution must be positive");
}

Point2 OccupancyGrid::CellCenter(std::size_t index) const {
  return {origin_.x + (static_cast<double>(Col(index)) + 0.5) * resolution_,
          origin_.y + (static_cast<double>(Row(index)) + 0.5) * resolution_};
}

std::optional<std::size_t> OccupancyGrid::CellAt(Point2 p) const {
  const double cx = std::floor((p.x - origin_.x) / resolution_);
  const double cy = std::floor((p.y - origin_.y) / resolution_);
  if (!(cx >= 0.0 && cy >= 0.0)) return std::nullopt;
  if (cx >= static_cast<double>(cols_) || cy >= static_cast<double>(rows_)) return std::nullopt;
  return Index(static_cast<std::size_t>(cy), static_cast<std::size_t>(cx));
}

std::vector<PointsetMap> WindowLog(std::span<const ScanLogEntry> log, double window_m,
                                   double stride_m, std::string_view source) {
  if (log.empty()) throw Error(ErrorCode::kEmptyLog, "scan log has no entries");
  Require(window_m > 0.0 && stride_m > 0.0, "window and stride must be positive");
  for (std::size_t i = 1; i < log.size(); ++i) {
    Require(log[i].odom_distance >= log[i - 1].odom_distance, "odometry distance must not decrease");
  }

  const double start = log.front().odom_distance;
  const double span = log.back().odom_distance - start;
  const bool whole_log = span < window_m;
  const std::size_t count =
      whole_log ? 1 : static_cast<std::size_t>(std::floor((span - window_m) / stride_m + kOdomSlack)) + 1;

  std::vector<PointsetMap> maps;
  maps.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double lo = start + static_cast<double>(i) * stride_m;
    const double hi = whole_log ? std::numeric_limits<double>::infinity() : lo + window_m;

    const ScanLogEntry* first = nullptr;
    PointsetMap map;
    for (const ScanLogEntry& entry : log) {
      if (entry.odom_distance < lo - kOdomSlack || entry.odom_distance > hi + kOdomSlack) continue;
      if (first == nullptr) {
        first = &entry;
        map.origin = entry.pose;
      }
      const Pose2 local = map.origin.Inverse().Compose(entry.pose);
      map.viewpoints.push_back(local);
      for (const Point2& p : entry.points) map.points.push_back(local.ToParent(p));
    }
    if (first == nullptr) continue;  // odometry gap: nothing recorded here
    map.id = MapId(source, i);
    map.source = std::string(source);
    map.path_position = lo;
    maps.push_back(std::move(map));
  }
  return maps;
}

namespace {

struct CellCoord {
  long col;
  long row;
};

CellCoord CoordOf(const OccupancyGrid& grid, Point2 p) {
  return {static_cast<long>(std::floor((p.x - grid.origin().x) / grid.resolution())),
          static_cast<long>(std::floor((p.y - grid.origin().y) / grid.resolution()))};
}

bool InGrid(const OccupancyGrid& grid, CellCoord c) {
  return c.col >= 0 && c.row >= 0 && c.col < static_cast<long>(grid.cols()) &&
         c.row < static_cast<long>(grid.rows());
}

// Amanatides-Woo traversal from `from` towards `to`.
void CarveRay(OccupancyGrid& grid, Point2 from, Point2 to) {
  CellCoord cell = CoordOf(grid, from);
  const CellCoord end = CoordOf(grid, to);
  const double res = grid.resolution();
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const long step_x = dx > 0.0 ? 1 : -1;
  const long step_y = dy > 0.0 ? 1 : -1;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  const auto boundary = [&](long c, long step, double o) {
    return o + static_cast<double>(c + (step > 0 ? 1 : 0)) * res;
  };
  double t_max_x = dx != 0.0 ? (boundary(cell.col, step_x, grid.origin().x) - from.x) / dx : kInf;
  double t_max_y = dy != 0.0 ? (boundary(cell.row, step_y, grid.origin().y) - from.y) / dy : kInf;
  const double t_delta_x = dx != 0.0 ? res / std::abs(dx) : kInf;
  const double t_delta_y = dy != 0.0 ? res / std::abs(dy) : kInf;

  long budget = std::abs(end.col - cell.col) + std::abs(end.row - cell.row);
  bool first = true;
  while (budget-- >= 0) {
    if (cell.col == end.col && cell.row == end.row) break;
    if (!InGrid(grid, cell)) break;
    const std::size_t index = grid.Index(static_cast<std::size_t>(cell.row), static_cast<std::size_t>(cell.col));
    if (grid.At(index) == CellLabel::kOccupied) {
      if (!first) break;
    } else {
      grid.Set(index, CellLabel::kFree);
    }
    first = false;
    if (t_max_x < t_max_y) {
      cell.col += step_x;
      t_max_x += t_delta_x;
    } else {
      cell.row += step_y;
      t_max_y += t_delta_y;
    }
  }
}

}  // namespace

OccupancyGrid Rasterize(const PointsetMap& map, std::span<const Pose2> viewpoints,
                        double resolution) {
  Require(resolution > 0.0, "resolution must be positive");
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  const auto extend = [&](Point2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  };
  for (const Point2& p : map.points) extend(p);
  for (const Pose2& v : viewpoints) extend(v.position());

  if (map.points.empty() && viewpoints.empty()) {
    OccupancyGrid grid(resolution, {0.0, 0.0}, 1, 1);
    return grid;
  }

  // One cell of padding on every side.
  const double c0 = std::floor(min_x / resolution) - 1.0;
  const double r0 = std::floor(min_y / resolution) - 1.0;
  const auto cols = static_cast<std::size_t>(std::floor(max_x / resolution) - c0 + 2.0);
  const auto rows = static_cast<std::size_t>(std::floor(max_y / resolution) - r0 + 2.0);
  OccupancyGrid grid(resolution, {c0 * resolution, r0 * resolution}, rows, cols);

  for (const Point2& p : map.points) {
    if (const auto cell = grid.CellAt(p)) grid.Set(*cell, CellLabel::kOccupied);
  }
  for (const Pose2& v : viewpoints) {
    for (const Point2& p : map.points) CarveRay(grid, v.position(), p);
  }
  grid.set_free_space_carved(!viewpoints.empty());
  return grid;
}

CellSet CellsWithLabel(const OccupancyGrid& grid, CellLabel label) {
  CellSet cells;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.At(i) == label) cells.push_back(i);
  }
  return cells;
}

CellSet WallCells(const OccupancyGrid& grid, std::span<const WallSegment> walls) {
  const double res = grid.resolution();
  const double reach = 0.5 * res + 1e-9;
  std::vector<char> mark(grid.size(), 0);
  for (const WallSegment& w : walls) {
    const auto clamp_col = [&](double x) {
      return std::clamp(std::floor((x - grid.origin().x) / res), 0.0, static_cast<double>(grid.cols()) - 1.0);
    };
    const auto clamp_row = [&](double y) {
      return std::clamp(std::floor((y - grid.origin().y) / res), 0.0, static_cast<double>(grid.rows()) - 1.0);
    };
    const auto c_lo = static_cast<std::size_t>(clamp_col(std::min(w.a.x, w.b.x) - res));
    const auto c_hi = static_cast<std::size_t>(clamp_col(std::max(w.a.x, w.b.x) + res));
    const auto r_lo = static_cast<std::size_t>(clamp_row(std::min(w.a.y, w.b.y) - res));
    const auto r_hi = static_cast<std::size_t>(clamp_row(std::max(w.a.y, w.b.y) + res));
    for (std::size_t r = r_lo; r <= r_hi; ++r) {
      for (std::size_t c = c_lo; c <= c_hi; ++c) {
        const std::size_t index = grid.Index(r, c);
        if (!mark[index] && PointSegmentDistance(grid.CellCenter(index), w.a, w.b) <= reach) mark[index] = 1;
      }
    }
  }
  CellSet cells;
  for (std::size_t i = 0; i < mark.size(); ++i) {
    if (mark[i]) cells.push_back(i);
  }
  return cells;
}

CellSets DeriveCellSets(const OccupancyGrid& grid, std::span<const WallSegment> walls) {
  CellSets sets;
  sets.wall = WallCells(grid, walls);
  const CellSet occupied = CellsWithLabel(grid, CellLabel::kOccupied);
  const CellSet free = CellsWithLabel(grid, CellLabel::kFree);
  std::set_intersection(occupied.begin(), occupied.end(), sets.wall.begin(), sets.wall.end(),
                        std::back_inserter(sets.structure));
  std::set_difference(free.begin(), free.end(), sets.structure.begin(), sets.structure.end(),
                      std::back_inserter(sets.unoccupied));
  return sets;
}

}  // namespace lmd
