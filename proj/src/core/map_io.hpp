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

#ifndef LMD_CORE_MAP_IO_HPP
#define LMD_CORE_MAP_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/map_model.hpp"

namespace lmd {

// Shortest decimal representation that round-trips to the same double.
std::string FormatDouble(double value);

// Pointset map text format:
//
//   # lmd-map v1 id=<id> path_pos=<m>
//   # source <name>                 (optional)
//   # origin <x> <y> <heading>      (optional, map pose in the log frame)
//   # viewpoint <x> <y> <heading>   (optional, repeated; map frame)
//   <x> <y>
//   ...
//
// Readers that only understand the header and the point lines can skip all
// other '#' lines.
void WriteMap(std::ostream& out, const PointsetMap& map);
PointsetMap ReadMap(std::istream& in);
void SaveMapFile(const std::filesystem::path& path, const PointsetMap& map);
PointsetMap LoadMapFile(const std::filesystem::path& path);

// Loads every *.map file of a directory, sorted by file name.
std::vector<PointsetMap> LoadMapDirectory(const std::filesystem::path& dir);

struct CarmenOptions {
  // Field of view of FLASER scans, centered on the laser heading.
  double field_of_view = 3.14159265358979323846;
  // Ranges at or above this value are treated as no-return.
  double max_range = 50.0;
};

// Reads FLASER lines (laser pose + ranges) from a carmen log. ODOM lines are
// validated but not needed for map building; every other line is ignored.
// Odometry distance is accumulated from the odometry pose carried by FLASER.
std::vector<ScanLogEntry> ReadCarmenLog(std::istream& in, const CarmenOptions& options = {});

// Neutral scan log: one line per scan,
//   SCAN <odom_distance> <x> <y> <heading> <n> <x1> <y1> ... <xn> <yn>
// with points in the sensor frame. '#' lines and blank lines are skipped.
void WriteScanLog(std::ostream& out, const std::vector<ScanLogEntry>& log);
std::vector<ScanLogEntry> ReadScanLog(std::istream& in);

// Binary PGM (P5): 0 occupied, 127 unknown, 255 free. The first image row is
// the grid's top (highest y) row. A sidecar "<path>.info" text file carries
// resolution, origin and size.
void WritePgm(const std::filesystem::path& path, const OccupancyGrid& grid);

}  // namespace lmd

#endif  // LMD_CORE_MAP_IO_HPP
