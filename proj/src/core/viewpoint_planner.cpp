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

#include "core/viewpoint_planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

#include "core/error.hpp"

namespace lmd {

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kS1: return "s1";
    case Strategy::kS2: return "s2";
    case Strategy::kS3: return "s3";
    case Strategy::kS4: return "s4";
    case Strategy::kS5: return "s5";
  }
  return "?";
}

std::optional<Strategy> ParseStrategy(std::string_view name) {
  for (Strategy s : {Strategy::kS1, Strategy::kS2, Strategy::kS3, Strategy::kS4, Strategy::kS5}) {
    if (name == StrategyName(s)) return s;
  }
  if (name.size() == 2 && (name[0] == 'S') && name[1] >= '1' && name[1] <= '5') {
    return static_cast<Strategy>(name[1] - '0');
  }
  return std::nullopt;
}

namespace {

// Integer cell coordinates; all distance comparisons are done exactly on
// squared integer offsets.
struct Cell {
  std::int64_t col;
  std::int64_t row;
};

Cell CellOf(const OccupancyGrid& grid, std::size_t index) {
  return {static_cast<std::int64_t>(grid.Col(index)), static_cast<std::int64_t>(grid.Row(index))};
}

std::int64_t Sq(std::int64_t v) { return v * v; }

void CheckSets(const CellSets& cells) {
  if (cells.structure.empty()) throw Error(ErrorCode::kNoStructure, "no structure cells to plan from");
  if (cells.unoccupied.empty()) throw Error(ErrorCode::kNoFreeSpace, "no unoccupied cells to place a viewpoint");
}

Viewpoint AtCell(const OccupancyGrid& grid, std::size_t index, double theta, Strategy s) {
  return {grid.CellCenter(index), FoldQuarter(theta), s};
}

std::int64_t Cross(Cell o, Cell a, Cell b) {
  return (a.col - o.col) * (b.row - o.row) - (a.row - o.row) * (b.col - o.col);
}

// Andrew's monotone chain; collinear points dropped.
std::vector<Cell> ConvexHull(std::vector<Cell> pts) {
  std::sort(pts.begin(), pts.end(), [](Cell a, Cell b) { return a.col != b.col ? a.col < b.col : a.row < b.row; });
  if (pts.size() < 3) return pts;
  std::vector<Cell> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && Cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && Cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

// Exact squared Euclidean distance transform (Felzenszwalb-Huttenlocher) to
// the nearest seed cell, in cell units.
std::vector<std::int64_t> SquaredDistanceTransform(const OccupancyGrid& grid, const CellSet& seeds) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  const auto rows = static_cast<std::int64_t>(grid.rows());
  const auto cols = static_cast<std::int64_t>(grid.cols());
  std::vector<std::int64_t> col_dist(grid.size(), kInf);
  std::vector<char> seed(grid.size(), 0);
  for (std::size_t s : seeds) seed[s] = 1;

  // Pass 1: nearest seed within each column.
  for (std::int64_t c = 0; c < cols; ++c) {
    std::int64_t last = -1;
    for (std::int64_t r = 0; r < rows; ++r) {
      const auto i = static_cast<std::size_t>(r * cols + c);
      if (seed[i]) last = r;
      if (last >= 0) col_dist[i] = r - last;
    }
    last = -1;
    for (std::int64_t r = rows - 1; r >= 0; --r) {
      const auto i = static_cast<std::size_t>(r * cols + c);
      if (seed[i]) last = r;
      if (last >= 0) col_dist[i] = std::min(col_dist[i], last - r);
    }
  }

  // Pass 2: lower envelope of parabolas along each row.
  std::vector<std::int64_t> out(grid.size(), kInf);
  std::vector<std::int64_t> v(static_cast<std::size_t>(cols));
  std::vector<double> z(static_cast<std::size_t>(cols) + 1);
  std::vector<std::int64_t> f(static_cast<std::size_t>(cols));
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t c = 0; c < cols; ++c) {
      const std::int64_t d = col_dist[static_cast<std::size_t>(r * cols + c)];
      f[static_cast<std::size_t>(c)] = d >= kInf ? kInf : d * d;
    }
    std::int64_t k = -1;
    for (std::int64_t q = 0; q < cols; ++q) {
      if (f[static_cast<std::size_t>(q)] >= kInf) continue;
      if (k < 0) {
        k = 0;
        v[0] = q;
        z[0] = -std::numeric_limits<double>::infinity();
        z[1] = std::numeric_limits<double>::infinity();
        continue;
      }
      double s = 0.0;
      while (true) {
        const std::int64_t p = v[static_cast<std::size_t>(k)];
        s = static_cast<double>((f[static_cast<std::size_t>(q)] + q * q) - (f[static_cast<std::size_t>(p)] + p * p)) /
            static_cast<double>(2 * (q - p));
        if (s > z[static_cast<std::size_t>(k)]) break;
        --k;  // z[0] is -inf, so k never drops below zero
      }
      ++k;
      v[static_cast<std::size_t>(k)] = q;
      z[static_cast<std::size_t>(k)] = s;
      z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
    }
    if (k < 0) continue;
    std::int64_t j = 0;
    for (std::int64_t q = 0; q < cols; ++q) {
      while (z[static_cast<std::size_t>(j) + 1] < static_cast<double>(q)) ++j;
      const std::int64_t p = v[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(r * cols + q)] = Sq(q - p) + f[static_cast<std::size_t>(p)];
    }
  }
  return out;
}

}  // namespace

Viewpoint PlanS1(const CellSets& cells, const OccupancyGrid& grid, double theta) {
  CheckSets(cells);
  const auto n = static_cast<std::int64_t>(cells.structure.size());
  std::int64_t sum_c = 0;
  std::int64_t sum_r = 0;
  for (std::size_t s : cells.structure) {
    const Cell c = CellOf(grid, s);
    sum_c += c.col;
    sum_r += c.row;
  }
  // |v - cog|^2 scaled by n^2 stays integral.
  std::size_t best = cells.unoccupied.front();
  std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
  for (std::size_t u : cells.unoccupied) {
    const Cell c = CellOf(grid, u);
    const std::int64_t d = Sq(n * c.col - sum_c) + Sq(n * c.row - sum_r);
    if (d < best_d) {
      best_d = d;
      best = u;
    }
  }
  return AtCell(grid, best, theta, Strategy::kS1);
}

Viewpoint PlanS2(const CellSets& cells, const OccupancyGrid& grid, double theta) {
  CheckSets(cells);
  std::vector<Cell> structure;
  structure.reserve(cells.structure.size());
  for (std::size_t s : cells.structure) structure.push_back(CellOf(grid, s));
  // The farthest point of a set is always one of its hull vertices.
  const std::vector<Cell> hull = ConvexHull(std::move(structure));
  std::size_t best = cells.unoccupied.front();
  std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
  for (std::size_t u : cells.unoccupied) {
    const Cell c = CellOf(grid, u);
    std::int64_t far = 0;
    for (const Cell& h : hull) far = std::max(far, Sq(c.col - h.col) + Sq(c.row - h.row));
    if (far < best_d) {
      best_d = far;
      best = u;
    }
  }
  return AtCell(grid, best, theta, Strategy::kS2);
}

Viewpoint PlanS3(const CellSets& cells, const OccupancyGrid& grid, double theta) {
  CheckSets(cells);
  const std::vector<std::int64_t> dist = SquaredDistanceTransform(grid, cells.structure);
  std::size_t best = cells.unoccupied.front();
  std::int64_t best_d = -1;
  for (std::size_t u : cells.unoccupied) {
    if (dist[u] > best_d) {
      best_d = dist[u];
      best = u;
    }
  }
  return AtCell(grid, best, theta, Strategy::kS3);
}

std::vector<WallSegment> LongestWalls(std::span<const WallSegment> walls, std::size_t count) {
  std::vector<WallSegment> distinct;
  for (const WallSegment& w : walls) {
    const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const WallSegment& d) {
      return (d.a == w.a && d.b == w.b) || (d.a == w.b && d.b == w.a);
    });
    if (!seen) distinct.push_back(w);
  }
  std::stable_sort(distinct.begin(), distinct.end(),
                   [](const WallSegment& x, const WallSegment& y) { return x.Length() > y.Length(); });
  if (distinct.size() > count) distinct.resize(count);
  return distinct;
}

Viewpoint PlanS4(const CellSets& cells, const OccupancyGrid& grid, std::span<const WallSegment> walls,
                 double theta) {
  if (walls.empty()) throw Error(ErrorCode::kNoWalls, "S4 needs at least one wall");
  (void)cells;  // structure is rebuilt from the dominant walls
  const std::vector<WallSegment> dominant = LongestWalls(walls, 10);
  const CellSets reduced = DeriveCellSets(grid, dominant);
  Viewpoint vp = PlanS1(reduced, grid, theta);
  vp.strategy = Strategy::kS4;
  return vp;
}

UnoccupiedBox PlanS5Box(const CellSets& cells, const OccupancyGrid& grid, double theta) {
  if (cells.unoccupied.empty()) throw Error(ErrorCode::kNoFreeSpace, "no unoccupied cells to place a viewpoint");
  const double res = grid.resolution();
  // Bins are anchored at the grid origin so that an axis-aligned grid puts
  // every cell center in the middle of its own bin.
  const Point2 anchor = grid.origin();
  std::map<std::int64_t, std::int64_t> fx;
  std::map<std::int64_t, std::int64_t> fy;
  for (std::size_t u : cells.unoccupied) {
    const Point2 r = Rotate(grid.CellCenter(u) - anchor, -theta);
    ++fx[static_cast<std::int64_t>(std::floor(r.x / res))];
    ++fy[static_cast<std::int64_t>(std::floor(r.y / res))];
  }
  // Contiguous run around the (lowest) peak with 10 f >= 9 f(peak).
  const auto run = [](const std::map<std::int64_t, std::int64_t>& h) {
    auto peak = h.begin();
    for (auto it = h.begin(); it != h.end(); ++it) {
      if (it->second > peak->second) peak = it;
    }
    const std::int64_t need = peak->second * 9;
    std::int64_t lo = peak->first;
    std::int64_t hi = peak->first;
    while (true) {
      const auto it = h.find(lo - 1);
      if (it == h.end() || it->second * 10 < need) break;
      --lo;
    }
    while (true) {
      const auto it = h.find(hi + 1);
      if (it == h.end() || it->second * 10 < need) break;
      ++hi;
    }
    return std::pair{lo, hi};
  };
  const auto [x_lo, x_hi] = run(fx);
  const auto [y_lo, y_hi] = run(fy);
  const double x0 = static_cast<double>(x_lo) * res;
  const double x1 = static_cast<double>(x_hi + 1) * res;
  const double y0 = static_cast<double>(y_lo) * res;
  const double y1 = static_cast<double>(y_hi + 1) * res;

  UnoccupiedBox box;
  box.corners = {anchor + Rotate({x0, y0}, theta), anchor + Rotate({x1, y0}, theta),
                 anchor + Rotate({x1, y1}, theta), anchor + Rotate({x0, y1}, theta)};
  box.viewpoint = {anchor + Rotate({0.5 * (x0 + x1), 0.5 * (y0 + y1)}, theta), FoldQuarter(theta),
                   Strategy::kS5};
  return box;
}

Viewpoint PlanS5(const CellSets& cells, const OccupancyGrid& grid, double theta) {
  return PlanS5Box(cells, grid, theta).viewpoint;
}

Viewpoint PlanViewpoint(Strategy strategy, const CellSets& cells, const OccupancyGrid& grid,
                        const ParseResult& parse) {
  switch (strategy) {
    case Strategy::kS1: return PlanS1(cells, grid, parse.theta);
    case Strategy::kS2: return PlanS2(cells, grid, parse.theta);
    case Strategy::kS3: return PlanS3(cells, grid, parse.theta);
    case Strategy::kS4: return PlanS4(cells, grid, parse.walls, parse.theta);
    case Strategy::kS5: return PlanS5(cells, grid, parse.theta);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown strategy");
}

}  // namespace lmd
