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


#ifndef LMD_CORE_SVG_HPP
#define LMD_CORE_SVG_HPP

#include <iosfwd>
#include <optional>
#include <span>

#include "core/lmd_index.hpp"
#include "core/manhattan_parser.hpp"
#include "core/map_model.hpp"
#include "core/viewpoint_planner.hpp"

namespace lmd {

// Map points in gray, parsed walls in red.
void RenderParseSvg(std::ostream& out, const PointsetMap& map, const ParseResult& parse);

// Map points, unoccupied cells in light blue, structure cells in black, one
// marker per viewpoint and the S5 box outline in red when given.
void RenderPlanSvg(std::ostream& out, const PointsetMap& map, const OccupancyGrid& grid, const CellSets& cells,
                   std::span<const Viewpoint> viewpoints, const std::optional<UnoccupiedBox>& box);

// Both maps in the common frame: query points purple, database points green
// and a red line between the keypoints of every matched word pair.
void RenderMatchesSvg(std::ostream& out, const PointsetMap& query, const PointsetMap& database,
                      const LocalMapDescriptor& query_desc, const LocalMapDescriptor& database_desc,
                      std::span<const WordMatch> matches);

}  // namespace lmd

#endif  // LMD_CORE_SVG_HPP
