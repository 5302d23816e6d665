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


#include "core/pipeline.hpp"

#include "core/error.hpp"

namespace lmd {

MapAnalysis AnalyzeMap(const PointsetMap& map, const PipelineConfig& config) {
  MapAnalysis analysis;
  analysis.parse = ParseMap(map, config.parse);
  analysis.grid = Rasterize(map, map.viewpoints, config.resolution);
  analysis.cells = DeriveCellSets(analysis.grid, analysis.parse.walls);
  return analysis;
}

PlannedViewpoint PlanWithFallback(Strategy strategy, const PointsetMap& map, const MapAnalysis& analysis) {
  try {
    return {PlanViewpoint(strategy, analysis.cells, analysis.grid, analysis.parse), false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoStructure && e.code() != ErrorCode::kNoFreeSpace &&
        e.code() != ErrorCode::kNoWalls) {
      throw;
    }
  }
  Point2 sum;
  for (const Point2& p : map.points) sum = sum + p;
  const double n = map.points.empty() ? 1.0 : static_cast<double>(map.points.size());
  return {{(1.0 / n) * sum, FoldQuarter(analysis.parse.theta), strategy}, true};
}

MapDescriptors PrepareMap(const PointsetMap& map, const PipelineConfig& config) {
  MapDescriptors prepared;
  prepared.features = ExtractFeatures(map, config.features);
  if (map.points.size() >= 2) prepared.analysis = AnalyzeMap(map, config);
  return prepared;
}

LocalMapDescriptor DescribeForStrategy(const PointsetMap& map, const MapDescriptors& prepared,
                                       std::optional<Strategy> strategy, const PipelineConfig& config,
                                       bool* fallback) {
  if (fallback != nullptr) *fallback = false;
  if (!strategy) {
    return DescribeFeatures(map.id, prepared.features, Viewpoint{}, DescriptorMode::kBow, config.index.quantum);
  }
  const PlannedViewpoint planned = PlanWithFallback(*strategy, map, prepared.analysis);
  if (fallback != nullptr) *fallback = planned.fallback;
  return DescribeFeatures(map.id, prepared.features, planned.viewpoint, DescriptorMode::kLmd,
                          config.index.quantum);
}

}  // namespace lmd
