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

#ifndef LMD_CORE_MAP_MODEL_HPP
#define LMD_CORE_MAP_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/geometry.hpp"

namespace lmd {

// One registered laser scan: the sensor pose in the log's world frame, the
// returns in the sensor frame, and the cumulative odometry distance.
struct ScanLogEntry {
  Pose2 pose;
  std::vector<Point2> points;
  double odom_distance = 0.0;
};

// A local pointset map. Points live in the frame of the first sensor pose of
// the window the map was built from; `origin` is that pose in the log frame
// and `viewpoints` are the sensor poses expressed in the map frame.
struct PointsetMap {
  std::string id;
  std::vector<Point2> points;
  double path_position = 0.0;
  std::string source;
  Pose2 origin;
  std::vector<Pose2> viewpoints;
};

enum class CellLabel : std::uint8_t { kUnknown = 0, kFree = 1, kOccupied = 2 };

// Dense occupancy grid. Cell (row, col) covers
// [origin.x + col*res, origin.x + (col+1)*res) x [origin.y + row*res, ...).
// Linear indices are row-major, so ascending index order is lexicographic
// (row, col) order.
class OccupancyGrid {
 public:
  OccupancyGrid(double resolution, Point2 origin, std::size_t rows, std::size_t cols);

  double resolution() const { return resolution_; }
  Point2 origin() const { return origin_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return labels_.size(); }

  std::size_t Index(std::size_t row, std::size_t col) const { return row * cols_ + col; }
  std::size_t Row(std::size_t index) const { return index / cols_; }
  std::size_t Col(std::size_t index) const { return index % cols_; }

  CellLabel At(std::size_t index) const { return labels_[index]; }
  CellLabel At(std::size_t row, std::size_t col) const { return labels_[Index(row, col)]; }
  void Set(std::size_t index, CellLabel label) { labels_[index] = label; }
  std::span<const CellLabel> labels() const { return labels_; }

  Point2 CellCenter(std::size_t index) const;
  std::optional<std::size_t> CellAt(Point2 p) const;

  // False when the grid was built without sensor poses, in which case no
  // cell is labelled free.
  bool free_space_carved() const { return free_space_carved_; }
  void set_free_space_carved(bool carved) { free_space_carved_ = carved; }

  bool operator==(const OccupancyGrid&) const = default;

 private:
  double resolution_;
  Point2 origin_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<CellLabel> labels_;
  bool free_space_carved_ = false;
};

// Sorted, duplicate-free linear cell indices.
using CellSet = std::vector<std::size_t>;

struct CellSets {
  CellSet wall;
  CellSet structure;   // occupied ∩ wall
  CellSet unoccupied;  // free \ structure
};

inline constexpr double kDefaultWindow = 5.0;
inline constexpr double kDefaultStride = 1.0;
inline constexpr double kDefaultResolution = 0.1;

// Cuts a scan log into overlapping local maps, one every `stride_m` of
// odometry, each covering `window_m` of path. A log shorter than the window
// yields a single map. Throws Error(kEmptyLog) on an empty log.
std::vector<PointsetMap> WindowLog(std::span<const ScanLogEntry> log, double window_m,
                                   double stride_m, std::string_view source = "log");

// Occupied cells are those hit by a map point. Each viewpoint->point ray
// marks the cells it crosses as free, excluding the endpoint cell, and stops
// at the first occupied cell it meets.
OccupancyGrid Rasterize(const PointsetMap& map, std::span<const Pose2> viewpoints,
                        double resolution = kDefaultResolution);

CellSet CellsWithLabel(const OccupancyGrid& grid, CellLabel label);

// Wall cells are cells whose center lies within half a resolution of a wall
// segment (1e-9 m slack so walls on cell borders claim both neighbours).
CellSet WallCells(const OccupancyGrid& grid, std::span<const WallSegment> walls);

CellSets DeriveCellSets(const OccupancyGrid& grid, std::span<const WallSegment> walls);

}  // namespace lmd

#endif  // LMD_CORE_MAP_MODEL_HPP
