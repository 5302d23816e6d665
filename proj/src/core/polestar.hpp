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

#ifndef LMD_CORE_POLESTAR_HPP
#define LMD_CORE_POLESTAR_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "core/map_model.hpp"

namespace lmd {

/// Ring-count descriptor around a keypoint. counts[i] is the number of map
/// points p with radii[i-1] < |p - keypoint| <= radii[i], radii[-1] = 0.
struct PolestarDescriptor {
  Point2 keypoint;
  std::vector<std::uint32_t> counts;

  std::size_t rings() const { return counts.size(); }
};

/// Binarized polestar code in [0, 2^D).
struct AppearanceWord {
  std::uint32_t code = 0;

  friend bool operator==(AppearanceWord, AppearanceWord) = default;
};

struct PolestarConfig {
  /// Strictly increasing outer radii of the D annuli (meters).
  std::vector<double> radii = DefaultRadii();
  /// Minimum distance between sampled keypoints (meters).
  double min_spacing = 0.3;

  /// Ten equal-width 0.5 m annuli, outer radius 5 m.
  static std::vector<double> DefaultRadii();
};

inline constexpr std::size_t kDefaultRings = 10;

/// Greedy spacing suppression in input order: a point is kept when no
/// previously kept point is closer than `min_spacing`.
std::vector<Point2> SampleKeypoints(const PointsetMap& map, double min_spacing);

/// Single-keypoint descriptor by direct scan over all map points.
PolestarDescriptor Polestar(const PointsetMap& map, Point2 keypoint, std::span<const double> radii);

/// Descriptors for many keypoints of one map; bucketed so each keypoint only
/// visits points inside its outer radius. Equal to calling Polestar per
/// keypoint.
std::vector<PolestarDescriptor> PolestarAll(const PointsetMap& map, std::span<const Point2> keypoints,
                                            std::span<const double> radii);

/// L1-normalize, set bit i iff v_i is strictly above the mean of v, pack as
/// sum 2^i b_i. Throws Error(kEmptyDescriptor) when all counts are zero.
AppearanceWord QuantizeAppearance(const PolestarDescriptor& desc);

/// Debug dump: map_id,kx,ky,c0..c{D-1},code. Descriptors with no points in
/// range get an empty code field.
void WriteDescriptorCsv(std::ostream& out, std::string_view map_id,
                        std::span<const PolestarDescriptor> descriptors, bool header = true);

}  // namespace lmd

#endif  // LMD_CORE_POLESTAR_HPP
