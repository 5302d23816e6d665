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

#ifndef LMD_CORE_LMD_INDEX_HPP
#define LMD_CORE_LMD_INDEX_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "core/polestar.hpp"
#include "core/viewpoint_planner.hpp"

namespace lmd {

inline constexpr double kPoseQuantum = 0.1;
inline constexpr double kDefaultPoseThreshold = 3.0;

enum class DescriptorMode { kLmd, kBow };

std::string_view ModeName(DescriptorMode mode);

struct PoseWord {
  std::int32_t wx = 0;
  std::int32_t wy = 0;

  friend bool operator==(PoseWord, PoseWord) = default;
};

struct VisualWord {
  std::int32_t wx = 0;
  std::int32_t wy = 0;
  std::uint32_t wa = 0;

  friend bool operator==(const VisualWord&, const VisualWord&) = default;
};

// Keypoint plus its appearance word; independent of the viewpoint, so it can
// be computed once per map and reused for every strategy.
struct Feature {
  Point2 keypoint;
  AppearanceWord word;
};

struct LocalMapDescriptor {
  std::string map_id;
  Viewpoint viewpoint;
  DescriptorMode mode = DescriptorMode::kLmd;
  std::vector<VisualWord> words;
  // keypoints[i] is the map-frame keypoint of words[i].
  std::vector<Point2> keypoints;
};

// Expresses `point` in the viewpoint frame (translate by -position, rotate by
// -orientation) and floors each coordinate in units of `quantum`. A nudge of
// 1e-9 quanta keeps points that sit exactly on a cell border in the upper
// cell despite rotation round-off.
PoseWord QuantizePose(Point2 point, const Viewpoint& viewpoint, double quantum = kPoseQuantum);

// Keypoints in sampling order; descriptors with no neighbours are dropped.
std::vector<Feature> ExtractFeatures(const PointsetMap& map, const PolestarConfig& config);

LocalMapDescriptor DescribeFeatures(std::string map_id, std::span<const Feature> features,
                                    const Viewpoint& viewpoint, DescriptorMode mode,
                                    double quantum = kPoseQuantum);

LocalMapDescriptor Describe(const PointsetMap& map, const Viewpoint& viewpoint, const PolestarConfig& config,
                            DescriptorMode mode, double quantum = kPoseQuantum);

// Pose word rotated by quarter turns about the viewpoint: the cell
// [wx, wx+1) x [wy, wy+1) rotated by 90 degrees becomes [-wy-1, -wy) x [wx, wx+1).
PoseWord RotatePoseWord(PoseWord w, int quarter_turns);

struct IndexConfig {
  std::uint32_t rings = kDefaultRings;  // D; vocabulary size is 2^D
  double quantum = kPoseQuantum;        // q, meters per pose-word step
  double pose_threshold = kDefaultPoseThreshold;  // D_xy in meters; +inf disables
  DescriptorMode mode = DescriptorMode::kLmd;
  bool manhattan_rotations = true;  // score LMD queries under 4 quarter turns

  // Largest |wx - wx'| that passes the pose filter.
  std::int64_t PoseThresholdSteps() const;
};

struct Posting {
  std::uint32_t doc = 0;  // insertion ordinal
  std::int32_t wx = 0;
  std::int32_t wy = 0;

  friend bool operator==(const Posting&, const Posting&) = default;
};

struct RankedMap {
  std::string map_id;
  std::uint32_t score = 0;

  friend bool operator==(const RankedMap&, const RankedMap&) = default;
};

struct RetrievalResult {
  std::string query_id;
  std::vector<RankedMap> ranking;  // score descending, then map_id ascending
};

// Correspondence between query word `query` and database word `database`.
struct WordMatch {
  std::size_t query = 0;
  std::size_t database = 0;
};

// Inverted file keyed by appearance word. Single writer; concurrent const
// queries are safe once insertion has finished.
class InvertedIndex {
 public:
  explicit InvertedIndex(IndexConfig config = {});

  const IndexConfig& config() const { return config_; }
  std::size_t doc_count() const { return doc_ids_.size(); }
  std::size_t posting_count() const;
  std::span<const Posting> postings(std::uint32_t code) const { return postings_.at(code); }
  std::span<const std::string> doc_ids() const { return doc_ids_; }
  std::uint32_t vocabulary_size() const { return static_cast<std::uint32_t>(postings_.size()); }

  // Throws Error(kDuplicateMap) when the map id is already indexed.
  void Insert(const LocalMapDescriptor& descriptor);

  // Scores every indexed map: the number of query words that find at least
  // one posting of the same appearance word in that map passing the pose
  // filter, maximised over quarter-turn rotations of the query pose words
  // when enabled. `top_k == 0` returns every indexed map. `mode` overrides
  // the index mode (BoW skips the pose filter). Throws Error(kEmptyIndex).
  RetrievalResult Query(const LocalMapDescriptor& query, std::size_t top_k = 0,
                        std::optional<DescriptorMode> mode = std::nullopt) const;

  // K-dimensional appearance-word histogram of one indexed map.
  std::vector<std::uint32_t> Histogram(std::string_view map_id) const;

  // "LMDX1", u32 little-endian header length, JSON header, then for every
  // appearance code in order a u32 posting count followed by that many
  // (u32 doc, i32 wx, i32 wy) records. `extra` is stored under "meta".
  void Save(std::ostream& out, const nlohmann::json& extra = nlohmann::json::object()) const;
  static InvertedIndex Load(std::istream& in, nlohmann::json* extra = nullptr);

 private:
  IndexConfig config_;
  std::vector<std::vector<Posting>> postings_;
  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, std::uint32_t> doc_lookup_;
};

// One-per-query-word correspondences between two descriptors under the given
// mode, using the rotation with the most matches (lowest rotation on ties).
// The match count equals the score the index assigns to `database`.
std::vector<WordMatch> MatchWords(const LocalMapDescriptor& query, const LocalMapDescriptor& database,
                                  const IndexConfig& config, DescriptorMode mode);

// rank(truth) / db_size with 1-based rank. Throws Error(kTruthNotRanked).
double AnrRank(const RetrievalResult& result, std::string_view truth_id, std::size_t db_size);

}  // namespace lmd

#endif  // LMD_CORE_LMD_INDEX_HPP
