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


#ifndef LMD_CORE_PIPELINE_HPP
#define LMD_CORE_PIPELINE_HPP

#include <optional>
#include <vector>

#include "core/lmd_index.hpp"
#include "core/manhattan_parser.hpp"
#include "core/map_model.hpp"
#include "core/polestar.hpp"
#include "core/viewpoint_planner.hpp"

namespace lmd {

struct PipelineConfig {
  ParseConfig parse;
  double resolution = kDefaultResolution;
  PolestarConfig features;
  IndexConfig index;
};

// Everything the planners need from one map.
struct MapAnalysis {
  ParseResult parse;
  OccupancyGrid grid{kDefaultResolution, {}, 1, 1};
  CellSets cells;
};

// Parses the map, rasterizes it from its own sensor poses and derives the
// cell sets from the parsed walls.
MapAnalysis AnalyzeMap(const PointsetMap& map, const PipelineConfig& config);

struct PlannedViewpoint {
  Viewpoint viewpoint;
  // True when the strategy had nothing to work with and the centroid of the
  // map points was used instead.
  bool fallback = false;
};

PlannedViewpoint PlanWithFallback(Strategy strategy, const PointsetMap& map, const MapAnalysis& analysis);

// Per-map work shared by every retrieval method.
struct MapDescriptors {
  std::vector<Feature> features;
  MapAnalysis analysis;
};

// Maps with fewer than two points keep an empty analysis.
MapDescriptors PrepareMap(const PointsetMap& map, const PipelineConfig& config);

// Descriptor of `map` for one retrieval method: a planning strategy, or
// bag-of-words when `strategy` is empty.
LocalMapDescriptor DescribeForStrategy(const PointsetMap& map, const MapDescriptors& prepared,
                                       std::optional<Strategy> strategy, const PipelineConfig& config,
                                       bool* fallback = nullptr);

}  // namespace lmd

#endif  // LMD_CORE_PIPELINE_HPP
