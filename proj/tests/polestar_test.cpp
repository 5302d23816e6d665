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

#include <cmath>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/random.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace lmd {
namespace {

TEST(SampleKeypointsTest, CloseNeighboursCollapse) {
  PointsetMap map;
  map.points = {{0.0, 0.0}, {0.05, 0.0}};
  const auto keys = SampleKeypoints(map, 0.2);
  ASSERT_EQ(keys.size(), 1u);
  EXPECT_EQ(keys[0], (Point2{0.0, 0.0}));
}

TEST(SampleKeypointsTest, ZeroSpacingKeepsEverything) {
  Rng rng(1);
  const PointsetMap map = testing::RandomCloud(rng, 50, 2.0);
  const auto keys = SampleKeypoints(map, 0.0);
  ASSERT_EQ(keys.size(), map.points.size());
  for (std::size_t i = 0; i < keys.size(); ++i) EXPECT_EQ(keys[i], map.points[i]);
  EXPECT_TRUE(SampleKeypoints(PointsetMap{}, 0.3).empty());
}

TEST(SampleKeypointsTest, PairwiseDistanceAudit) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    PointsetMap map;
    for (int i = 0; i < 100; ++i) map.points.push_back({rng.Uniform(0.0, 5.0), rng.Uniform(0.0, 5.0)});
    const double spacing = trial == 0 ? 0.5 : rng.Uniform(0.05, 1.5);
    const auto keys = SampleKeypoints(map, spacing);
    // Kept points are pairwise at least `spacing` apart.
    for (std::size_t i = 0; i < keys.size(); ++i) {
      for (std::size_t j = i + 1; j < keys.size(); ++j) EXPECT_GE(Distance(keys[i], keys[j]), spacing);
    }
    // Greedy replay in input order decides every point the same way.
    std::vector<Point2> replay;
    for (const Point2& p : map.points) {
      bool ok = true;
      for (const Point2& k : replay) ok = ok && Distance(p, k) >= spacing;
      if (ok) replay.push_back(p);
    }
    EXPECT_EQ(keys, replay);
  }
}

TEST(PolestarTest, SinglePointLandsInSecondRing) {
  PointsetMap map;
  map.points = {{0.15, 0.0}};
  std::vector<double> radii;
  for (int i = 1; i <= 10; ++i) radii.push_back(0.1 * i);
  const auto d = Polestar(map, {0.0, 0.0}, radii);
  const std::vector<std::uint32_t> want{0, 1, 0, 0, 0, 0, 0, 0, 0, 0};
  EXPECT_EQ(d.counts, want);
}

TEST(PolestarTest, KeypointAndOuterPointsExcluded) {
  PointsetMap map;
  map.points = {{0.0, 0.0}, {0.5, 0.0}, {5.0, 0.0}, {5.0001, 0.0}};
  const auto d = Polestar(map, {0.0, 0.0}, PolestarConfig::DefaultRadii());
  // 0.5 sits on the outer edge of ring 0; 5.0 on the outer edge of ring 9.
  EXPECT_EQ(d.counts[0], 1u);
  EXPECT_EQ(d.counts[9], 1u);
  std::uint32_t total = 0;
  for (auto c : d.counts) total += c;
  EXPECT_EQ(total, 2u);
}

std::vector<std::uint32_t> BinByHand(const PointsetMap& map, Point2 k, const std::vector<double>& radii) {
  std::vector<std::uint32_t> counts(radii.size(), 0);
  for (const Point2& p : map.points) {
    const double d = std::sqrt((p.x - k.x) * (p.x - k.x) + (p.y - k.y) * (p.y - k.y));
    if (d == 0.0) continue;
    double lo = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (d > lo && d <= radii[i]) {
        ++counts[i];
        break;
      }
      lo = radii[i];
    }
  }
  return counts;
}

TEST(PolestarTest, MatchesPerPointAnnulusClassifier) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const PointsetMap map = testing::RandomCloud(rng, 50, 5.0);
    const Point2 k{rng.Uniform(-2.0, 2.0), rng.Uniform(-2.0, 2.0)};
    const auto radii = PolestarConfig::DefaultRadii();
    EXPECT_EQ(Polestar(map, k, radii).counts, BinByHand(map, k, radii));
  }
}

TEST(PolestarTest, BucketedEqualsDirect) {
  Rng rng(22);
  const PointsetMap map = testing::RandomCloud(rng, 2000, 8.0);
  const auto keys = SampleKeypoints(map, 0.3);
  const auto radii = PolestarConfig::DefaultRadii();
  const auto all = PolestarAll(map, keys, radii);
  ASSERT_EQ(all.size(), keys.size());
  for (std::size_t i = 0; i < keys.size(); i += 7) {
    EXPECT_EQ(all[i].counts, Polestar(map, keys[i], radii).counts);
    EXPECT_EQ(all[i].keypoint, keys[i]);
  }
}

TEST(QuantizeTest, WorkedExamples) {
  PolestarDescriptor d;
  d.counts.assign(10, 1);
  EXPECT_EQ(QuantizeAppearance(d).code, 0u);
  d.counts.assign(10, 0);
  d.counts[0] = 2;
  EXPECT_EQ(QuantizeAppearance(d).code, 1u);
  d.counts.assign(10, 0);
  d.counts[9] = 3;
  EXPECT_EQ(QuantizeAppearance(d).code, 512u);
  d.counts = {5, 0, 1, 0, 0, 0, 0, 0, 0, 4};
  // mean 1/10; v = (.5, 0, .1, 0, ..., .4); .1 is not strictly above the mean.
  EXPECT_EQ(QuantizeAppearance(d).code, 1u + 512u);
}

TEST(QuantizeTest, EmptyDescriptorThrows) {
  PolestarDescriptor d;
  d.counts.assign(10, 0);
  try {
    QuantizeAppearance(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDescriptor);
  }
}

std::uint32_t FloatingCode(const std::vector<std::uint32_t>& counts) {
  double l1 = 0.0;
  for (auto c : counts) l1 += c;
  double mean = 0.0;
  for (auto c : counts) mean += c / l1;
  mean /= static_cast<double>(counts.size());
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] / l1 > mean + 1e-12) code |= 1u << i;
  }
  return code;
}

TEST(QuantizeTest, RangeScaleInvarianceAndFormula) {
  Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    PolestarDescriptor d;
    for (int i = 0; i < 10; ++i) d.counts.push_back(static_cast<std::uint32_t>(rng.Index(trial % 3 == 0 ? 3 : 40)));
    if (std::all_of(d.counts.begin(), d.counts.end(), [](auto c) { return c == 0; })) d.counts[0] = 1;
    const std::uint32_t code = QuantizeAppearance(d).code;
    EXPECT_LT(code, 1024u);
    // Exact ties (v_i == mean) are resolved by the integer form D*c_i > L1.
    std::uint32_t l1 = 0;
    for (auto c : d.counts) l1 += c;
    std::uint32_t exact = 0;
    for (int i = 0; i < 10; ++i) exact |= (10 * d.counts[i] > l1 ? 1u : 0u) << i;
    EXPECT_EQ(code, exact);
    EXPECT_EQ(code, FloatingCode(d.counts));
    PolestarDescriptor scaled = d;
    const std::uint32_t s = 1 + static_cast<std::uint32_t>(rng.Index(50));
    for (auto& c : scaled.counts) c *= s;
    EXPECT_EQ(QuantizeAppearance(scaled).code, code);
  }
}

TEST(PolestarInvarianceTest, RotationAndTranslation) {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    // Points away from ring edges so rotation round-off cannot move them.
    const Point2 k{rng.Uniform(-3.0, 3.0), rng.Uniform(-3.0, 3.0)};
    PointsetMap map;
    for (int i = 0; i < 200; ++i) {
      const double r = 0.5 * static_cast<double>(rng.Index(11)) + rng.Uniform(0.05, 0.45);
      const double a = rng.Uniform(0.0, 2.0 * std::numbers::pi);
      map.points.push_back(k + Point2{r * std::cos(a), r * std::sin(a)});
    }
    const auto radii = PolestarConfig::DefaultRadii();
    const PolestarDescriptor base = Polestar(map, k, radii);

    const double angle = rng.Uniform(-std::numbers::pi, std::numbers::pi);
    PointsetMap rotated;
    for (const Point2& p : map.points) rotated.points.push_back(k + Rotate(p - k, angle));
    EXPECT_EQ(Polestar(rotated, k, radii).counts, base.counts);

    const Point2 t{rng.Uniform(-50.0, 50.0), rng.Uniform(-50.0, 50.0)};
    PointsetMap moved;
    for (const Point2& p : map.points) moved.points.push_back(p + t);
    EXPECT_EQ(Polestar(moved, k + t, radii).counts, base.counts);
    EXPECT_EQ(QuantizeAppearance(Polestar(moved, k + t, radii)), QuantizeAppearance(base));
  }
}

TEST(DescriptorCsvTest, HeaderAndRows) {
  PointsetMap map;
  map.points = {{0.0, 0.0}, {1.0, 0.0}};
  const std::vector<Point2> keys{{0.0, 0.0}, {20.0, 0.0}};
  const auto descs = PolestarAll(map, keys, PolestarConfig::DefaultRadii());
  std::ostringstream out;
  WriteDescriptorCsv(out, "m", descs);
  EXPECT_EQ(out.str(),
            "map_id,kx,ky,c0,c1,c2,c3,c4,c5,c6,c7,c8,c9,code\n"
            "m,0,0,0,1,0,0,0,0,0,0,0,0,2\n"
            "m,20,0,0,0,0,0,0,0,0,0,0,0,\n");
}

}  // namespace
}  // namespace lmd
