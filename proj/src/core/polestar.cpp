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

#include "core/polestar.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "core/error.hpp"
#include "core/map_io.hpp"

namespace lmd {

std::vector<double> PolestarConfig::DefaultRadii() {
  std::vector<double> radii(kDefaultRings);
  for (std::size_t i = 0; i < radii.size(); ++i) radii[i] = 0.5 * static_cast<double>(i + 1);
  return radii;
}

namespace {

void CheckRadii(std::span<const double> radii) {
  Require(!radii.empty() && radii.size() <= 31, "polestar needs between 1 and 31 radii");
  double prev = 0.0;
  for (double r : radii) {
    Require(r > prev, "polestar radii must be positive and strictly increasing");
    prev = r;
  }
}

// Ring index of a squared distance, or -1 when outside the outer radius or
// at the keypoint itself.
int RingOf(double d2, std::span<const double> radii2) {
  if (d2 <= 0.0 || d2 > radii2.back()) return -1;
  const auto it = std::lower_bound(radii2.begin(), radii2.end(), d2);
  return static_cast<int>(it - radii2.begin());
}

std::vector<double> Squared(std::span<const double> radii) {
  std::vector<double> out(radii.size());
  std::transform(radii.begin(), radii.end(), out.begin(), [](double r) { return r * r; });
  return out;
}

struct BucketKey {
  long x;
  long y;
  bool operator==(const BucketKey&) const = default;
};

struct BucketHash {
  std::size_t operator()(const BucketKey& k) const {
    return std::hash<long>()(k.x * 73856093L ^ k.y * 19349663L);
  }
};

class PointBuckets {
 public:
  PointBuckets(std::span<const Point2> points, double cell) : cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i) buckets_[KeyOf(points[i])].push_back(i);
  }

  BucketKey KeyOf(Point2 p) const {
    return {static_cast<long>(std::floor(p.x / cell_)), static_cast<long>(std::floor(p.y / cell_))};
  }

  template <typename Fn>
  void ForEachNear(Point2 center, double radius, Fn&& fn) const {
    const BucketKey lo = KeyOf({center.x - radius, center.y - radius});
    const BucketKey hi = KeyOf({center.x + radius, center.y + radius});
    for (long bx = lo.x; bx <= hi.x; ++bx) {
      for (long by = lo.y; by <= hi.y; ++by) {
        const auto it = buckets_.find({bx, by});
        if (it == buckets_.end()) continue;
        for (std::size_t i : it->second) fn(i);
      }
    }
  }

 private:
  double cell_;
  std::unordered_map<BucketKey, std::vector<std::size_t>, BucketHash> buckets_;
};

}  // namespace

std::vector<Point2> SampleKeypoints(const PointsetMap& map, double min_spacing) {
  Require(min_spacing >= 0.0, "min_spacing must be non-negative");
  if (min_spacing == 0.0) return map.points;
  std::vector<Point2> kept;
  const double limit2 = min_spacing * min_spacing;
  std::unordered_map<BucketKey, std::vector<std::size_t>, BucketHash> grid;
  const auto key_of = [&](Point2 p) {
    return BucketKey{static_cast<long>(std::floor(p.x / min_spacing)),
                     static_cast<long>(std::floor(p.y / min_spacing))};
  };
  for (const Point2& p : map.points) {
    const BucketKey k = key_of(p);
    bool clear = true;
    for (long dx = -1; dx <= 1 && clear; ++dx) {
      for (long dy = -1; dy <= 1 && clear; ++dy) {
        const auto it = grid.find({k.x + dx, k.y + dy});
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          if (SquaredNorm(kept[j] - p) < limit2) {
            clear = false;
            break;
          }
        }
      }
    }
    if (!clear) continue;
    grid[k].push_back(kept.size());
    kept.push_back(p);
  }
  return kept;
}

PolestarDescriptor Polestar(const PointsetMap& map, Point2 keypoint, std::span<const double> radii) {
  CheckRadii(radii);
  const auto radii2 = Squared(radii);
  PolestarDescriptor desc{keypoint, std::vector<std::uint32_t>(radii.size(), 0)};
  for (const Point2& p : map.points) {
    const int ring = RingOf(SquaredNorm(p - keypoint), radii2);
    if (ring >= 0) ++desc.counts[static_cast<std::size_t>(ring)];
  }
  return desc;
}

std::vector<PolestarDescriptor> PolestarAll(const PointsetMap& map, std::span<const Point2> keypoints,
                                            std::span<const double> radii) {
  CheckRadii(radii);
  const auto radii2 = Squared(radii);
  const double outer = radii.back();
  const PointBuckets buckets(map.points, std::max(outer / 4.0, 1e-3));
  std::vector<PolestarDescriptor> out;
  out.reserve(keypoints.size());
  for (const Point2& k : keypoints) {
    PolestarDescriptor desc{k, std::vector<std::uint32_t>(radii.size(), 0)};
    buckets.ForEachNear(k, outer, [&](std::size_t i) {
      const int ring = RingOf(SquaredNorm(map.points[i] - k), radii2);
      if (ring >= 0) ++desc.counts[static_cast<std::size_t>(ring)];
    });
    out.push_back(std::move(desc));
  }
  return out;
}

AppearanceWord QuantizeAppearance(const PolestarDescriptor& desc) {
  Require(!desc.counts.empty() && desc.counts.size() <= 31, "descriptor must have 1..31 rings");
  std::uint64_t l1 = 0;
  for (std::uint32_t c : desc.counts) l1 += c;
  if (l1 == 0) throw Error(ErrorCode::kEmptyDescriptor, "no map points within the polestar support");
  // v_i = c_i / L1 and mean(v) = 1 / D, so v_i > mean(v) <=> D * c_i > L1.
  // Integer comparison keeps the code exactly invariant to count scaling.
  const std::uint64_t rings = desc.counts.size();
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < desc.counts.size(); ++i) {
    if (rings * desc.counts[i] > l1) code |= (1U << i);
  }
  return {code};
}

void WriteDescriptorCsv(std::ostream& out, std::string_view map_id,
                        std::span<const PolestarDescriptor> descriptors, bool header) {
  const std::size_t rings = descriptors.empty() ? kDefaultRings : descriptors.front().rings();
  if (header) {
    out << "map_id,kx,ky";
    for (std::size_t i = 0; i < rings; ++i) out << ",c" << i;
    out << ",code\n";
  }
  for (const PolestarDescriptor& d : descriptors) {
    out << map_id << ',' << FormatDouble(d.keypoint.x) << ',' << FormatDouble(d.keypoint.y);
    std::uint64_t total = 0;
    for (std::uint32_t c : d.counts) {
      out << ',' << c;
      total += c;
    }
    out << ',';
    if (total > 0) out << QuantizeAppearance(d).code;
    out << '\n';
  }
}

}  // namespace lmd
