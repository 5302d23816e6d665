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

#ifndef LMD_CORE_VIEWPOINT_PLANNER_HPP
#define LMD_CORE_VIEWPOINT_PLANNER_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "core/manhattan_parser.hpp"
#include "core/map_model.hpp"

namespace lmd {

enum class Strategy { kS1 = 1, kS2 = 2, kS3 = 3, kS4 = 4, kS5 = 5 };

std::string_view StrategyName(Strategy s);  // "s1".."s5"
std::optional<Strategy> ParseStrategy(std::string_view name);

// The planned "unique viewpoint" of a map: a position and the Manhattan
// orientation of its parse folded into [0, pi/2).
struct Viewpoint {
  Point2 position;
  double orientation = 0.0;
  Strategy strategy = Strategy::kS1;
};

// Distances below are Euclidean between cell centers. Ties in every arg-min
// and arg-max go to the lowest (row, col). S1-S4 throw Error(kNoStructure)
// when there is no structure cell and Error(kNoFreeSpace) when there is no
// unoccupied cell.

// Unoccupied cell nearest the centroid of the structure cells.
Viewpoint PlanS1(const CellSets& cells, const OccupancyGrid& grid, double theta = 0.0);
// Unoccupied cell minimizing the distance to its farthest structure cell.
Viewpoint PlanS2(const CellSets& cells, const OccupancyGrid& grid, double theta = 0.0);
// Unoccupied cell maximizing the distance to its nearest structure cell.
Viewpoint PlanS3(const CellSets& cells, const OccupancyGrid& grid, double theta = 0.0);
// S1 with structure rebuilt from the ten longest distinct walls.
// Throws Error(kNoWalls) on an empty wall list.
Viewpoint PlanS4(const CellSets& cells, const OccupancyGrid& grid, std::span<const WallSegment> walls,
                 double theta = 0.0);

struct UnoccupiedBox {
  Viewpoint viewpoint;
  std::array<Point2, 4> corners;  // map frame, counter-clockwise
};

// Center of the box spanned by the contiguous runs of theta-frame rows and
// columns around the peaks of the unoccupied-cell histograms whose counts
// reach 90% of the peak. Throws Error(kNoFreeSpace) without unoccupied cells.
UnoccupiedBox PlanS5Box(const CellSets& cells, const OccupancyGrid& grid, double theta);
Viewpoint PlanS5(const CellSets& cells, const OccupancyGrid& grid, double theta);

// The ten longest walls, identical segments counted once.
std::vector<WallSegment> LongestWalls(std::span<const WallSegment> walls, std::size_t count = 10);

Viewpoint PlanViewpoint(Strategy strategy, const CellSets& cells, const OccupancyGrid& grid,
                        const ParseResult& parse);

}  // namespace lmd

#endif  // LMD_CORE_VIEWPOINT_PLANNER_HPP
