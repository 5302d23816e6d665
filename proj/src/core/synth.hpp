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


#ifndef LMD_CORE_SYNTH_HPP
#define LMD_CORE_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/map_model.hpp"

namespace lmd {

// Synthetic office floor: a rectangular ring corridor around a solid block
// with rooms hanging off its outer wall, each reached through a 1 m door.
// A robot drives `laps` loops along the corridor (odd laps clockwise and
// shifted sideways) taking 360-degree scans.
struct SynthConfig {
  std::uint64_t seed = 0;
  int rooms = 4;
  // Clutter boxes per lap per meter of loop, scaled by 1/2, so 0.2 puts a
  // box every 10 m. Boxes differ between laps.
  double clutter = 0.0;
  // Probability that a scan return is discarded.
  double drop = 0.0;
  int laps = 2;
  double scan_spacing = 0.5;
  int beams = 360;
  double max_range = 8.0;
  double range_noise = 0.01;
  double lap_offset = 0.3;
  double window = kDefaultWindow;
  double stride = kDefaultStride;
  std::string name = "synth";
};

struct SynthWorld {
  std::string name;
  std::vector<WallSegment> walls;         // static structure, world frame
  std::vector<WallSegment> clutter;       // every lap's boxes, world frame
  std::vector<ScanLogEntry> log;          // ground-truth poses
  std::vector<PointsetMap> maps;
  double loop_length = 0.0;
};

SynthWorld SynthesizeWorld(const SynthConfig& config);

// Nearest intersection of the ray origin + t * (cos a, sin a), t in (0, max],
// with any segment; returns a negative value when nothing is hit.
double CastRay(Point2 origin, double angle, const std::vector<WallSegment>& segments, double max_range);

}  // namespace lmd

#endif  // LMD_CORE_SYNTH_HPP
