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

#include "core/lmd_index.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "core/error.hpp"

namespace lmd {

std::string_view ModeName(DescriptorMode mode) { return mode == DescriptorMode::kBow ? "bow" : "lmd"; }

PoseWord QuantizePose(Point2 point, const Viewpoint& viewpoint, double quantum) {
  Require(quantum > 0.0, "pose quantum must be positive");
  const Point2 local = Rotate(point - viewpoint.position, -viewpoint.orientation);
  constexpr double kNudge = 1e-9;
  return {static_cast<std::int32_t>(std::floor(local.x / quantum + kNudge)),
          static_cast<std::int32_t>(std::floor(local.y / quantum + kNudge))};
}

std::vector<Feature> ExtractFeatures(const PointsetMap& map, const PolestarConfig& config) {
  const std::vector<Point2> keypoints = SampleKeypoints(map, config.min_spacing);
  const std::vector<PolestarDescriptor> descs = PolestarAll(map, keypoints, config.radii);
  std::vector<Feature> features;
  features.reserve(descs.size());
  for (const PolestarDescriptor& d : descs) {
    try {
      features.push_back({d.keypoint, QuantizeAppearance(d)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyDescriptor) throw;
    }
  }
  return features;
}

LocalMapDescriptor DescribeFeatures(std::string map_id, std::span<const Feature> features,
                                    const Viewpoint& viewpoint, DescriptorMode mode, double quantum) {
  LocalMapDescriptor desc;
  desc.map_id = std::move(map_id);
  desc.viewpoint = viewpoint;
  desc.mode = mode;
  desc.words.reserve(features.size());
  desc.keypoints.reserve(features.size());
  for (const Feature& f : features) {
    VisualWord w{0, 0, f.word.code};
    if (mode == DescriptorMode::kLmd) {
      const PoseWord p = QuantizePose(f.keypoint, viewpoint, quantum);
      w.wx = p.wx;
      w.wy = p.wy;
    }
    desc.words.push_back(w);
    desc.keypoints.push_back(f.keypoint);
  }
  return desc;
}

LocalMapDescriptor Describe(const PointsetMap& map, const Viewpoint& viewpoint, const PolestarConfig& config,
                            DescriptorMode mode, double quantum) {
  const std::vector<Feature> features = ExtractFeatures(map, config);
  return DescribeFeatures(map.id, features, viewpoint, mode, quantum);
}

PoseWord RotatePoseWord(PoseWord w, int quarter_turns) {
  switch (((quarter_turns % 4) + 4) % 4) {
    case 0: return w;
    case 1: return {-w.wy - 1, w.wx};
    case 2: return {-w.wx - 1, -w.wy - 1};
    default: return {w.wy, -w.wx - 1};
  }
}

std::int64_t IndexConfig::PoseThresholdSteps() const {
  if (!std::isfinite(pose_threshold)) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(std::floor(pose_threshold / quantum + 1e-9));
}

namespace {

bool PosePasses(std::int32_t qx, std::int32_t qy, std::int32_t dx, std::int32_t dy, std::int64_t steps) {
  return std::abs(static_cast<std::int64_t>(qx) - dx) <= steps &&
         std::abs(static_cast<std::int64_t>(qy) - dy) <= steps;
}

int RotationCount(const IndexConfig& config, DescriptorMode mode) {
  return mode == DescriptorMode::kLmd && config.manhattan_rotations ? 4 : 1;
}

}  // namespace

InvertedIndex::InvertedIndex(IndexConfig config) : config_(config) {
  Require(config_.rings >= 1 && config_.rings <= 24, "ring count must be in [1, 24]");
  Require(config_.quantum > 0.0, "pose quantum must be positive");
  Require(config_.pose_threshold >= 0.0, "pose threshold must be non-negative");
  postings_.resize(std::size_t{1} << config_.rings);
}

std::size_t InvertedIndex::posting_count() const {
  std::size_t n = 0;
  for (const auto& list : postings_) n += list.size();
  return n;
}

void InvertedIndex::Insert(const LocalMapDescriptor& descriptor) {
  if (doc_lookup_.count(descriptor.map_id) != 0) {
    throw Error(ErrorCode::kDuplicateMap, "map '" + descriptor.map_id + "' is already indexed");
  }
  for (const VisualWord& w : descriptor.words) {
    Require(w.wa < postings_.size(), "appearance word outside the vocabulary");
  }
  const auto doc = static_cast<std::uint32_t>(doc_ids_.size());
  doc_ids_.push_back(descriptor.map_id);
  doc_lookup_.emplace(descriptor.map_id, doc);
  for (const VisualWord& w : descriptor.words) postings_[w.wa].push_back({doc, w.wx, w.wy});
}

RetrievalResult InvertedIndex::Query(const LocalMapDescriptor& query, std::size_t top_k,
                                     std::optional<DescriptorMode> mode_override) const {
  if (doc_ids_.empty()) throw Error(ErrorCode::kEmptyIndex, "query against an empty index");
  const DescriptorMode mode = mode_override.value_or(config_.mode);
  const bool filter = mode == DescriptorMode::kLmd;
  const std::int64_t steps = config_.PoseThresholdSteps();
  const int rotations = RotationCount(config_, mode);

  const std::size_t docs = doc_ids_.size();
  std::vector<std::uint32_t> best(docs, 0);
  std::vector<std::uint32_t> count(docs, 0);
  // stamp[doc] == tag marks that the current query word already matched doc.
  std::vector<std::uint64_t> stamp(docs, std::numeric_limits<std::uint64_t>::max());
  const std::uint64_t words = query.words.size();
  for (int r = 0; r < rotations; ++r) {
    std::fill(count.begin(), count.end(), 0);
    for (std::uint64_t j = 0; j < words; ++j) {
      const VisualWord& w = query.words[j];
      if (w.wa >= postings_.size()) continue;
      const PoseWord p = RotatePoseWord({w.wx, w.wy}, r);
      const std::uint64_t tag = static_cast<std::uint64_t>(r) * words + j;
      for (const Posting& posting : postings_[w.wa]) {
        if (stamp[posting.doc] == tag) continue;
        if (filter && !PosePasses(p.wx, p.wy, posting.wx, posting.wy, steps)) continue;
        stamp[posting.doc] = tag;
        ++count[posting.doc];
      }
    }
    for (std::size_t d = 0; d < docs; ++d) best[d] = std::max(best[d], count[d]);
  }

  RetrievalResult result;
  result.query_id = query.map_id;
  result.ranking.reserve(docs);
  for (std::size_t d = 0; d < docs; ++d) result.ranking.push_back({doc_ids_[d], best[d]});
  std::sort(result.ranking.begin(), result.ranking.end(), [](const RankedMap& a, const RankedMap& b) {
    return a.score != b.score ? a.score > b.score : a.map_id < b.map_id;
  });
  if (top_k != 0 && result.ranking.size() > top_k) result.ranking.resize(top_k);
  return result;
}

std::vector<std::uint32_t> InvertedIndex::Histogram(std::string_view map_id) const {
  const auto it = doc_lookup_.find(std::string(map_id));
  Require(it != doc_lookup_.end(), "map '" + std::string(map_id) + "' is not indexed");
  std::vector<std::uint32_t> hist(postings_.size(), 0);
  for (std::size_t code = 0; code < postings_.size(); ++code) {
    for (const Posting& p : postings_[code]) {
      if (p.doc == it->second) ++hist[code];
    }
  }
  return hist;
}

namespace {

constexpr std::string_view kIndexMagic = "LMDX1";

void PutU32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                              static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b.data(), 4);
}

std::uint32_t GetU32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) throw Error(ErrorCode::kFormat, "truncated index file");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void InvertedIndex::Save(std::ostream& out, const nlohmann::json& extra) const {
  nlohmann::json header;
  header["D"] = config_.rings;
  header["q"] = config_.quantum;
  header["D_xy"] = std::isfinite(config_.pose_threshold) ? nlohmann::json(config_.pose_threshold) : nlohmann::json();
  header["mode"] = std::string(ModeName(config_.mode));
  header["rotations"] = config_.manhattan_rotations;
  header["doc_count"] = doc_ids_.size();
  header["map_ids"] = doc_ids_;
  header["meta"] = extra;
  const std::string text = header.dump();

  out.write(kIndexMagic.data(), static_cast<std::streamsize>(kIndexMagic.size()));
  PutU32(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& list : postings_) {
    PutU32(out, static_cast<std::uint32_t>(list.size()));
    for (const Posting& p : list) {
      PutU32(out, p.doc);
      PutU32(out, static_cast<std::uint32_t>(p.wx));
      PutU32(out, static_cast<std::uint32_t>(p.wy));
    }
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write index");
}

InvertedIndex InvertedIndex::Load(std::istream& in, nlohmann::json* extra) {
  std::string magic(kIndexMagic.size(), '\0');
  in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
  if (!in || magic != kIndexMagic) throw Error(ErrorCode::kFormat, "not an LMDX1 index");
  const std::uint32_t header_len = GetU32(in);
  std::string text(header_len, '\0');
  in.read(text.data(), header_len);
  if (!in) throw Error(ErrorCode::kFormat, "truncated index header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("bad index header: ") + e.what());
  }
  IndexConfig config;
  std::vector<std::string> ids;
  try {
    config.rings = header.at("D").get<std::uint32_t>();
    config.quantum = header.at("q").get<double>();
    config.pose_threshold =
        header.at("D_xy").is_null() ? std::numeric_limits<double>::infinity() : header.at("D_xy").get<double>();
    config.mode = header.at("mode").get<std::string>() == "bow" ? DescriptorMode::kBow : DescriptorMode::kLmd;
    config.manhattan_rotations = header.value("rotations", true);
    ids = header.at("map_ids").get<std::vector<std::string>>();
    if (header.at("doc_count").get<std::size_t>() != ids.size()) {
      throw Error(ErrorCode::kFormat, "doc_count does not match map_ids");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("bad index header: ") + e.what());
  }
  if (config.rings < 1 || config.rings > 24) throw Error(ErrorCode::kFormat, "bad ring count in index header");

  InvertedIndex index(config);
  for (const std::string& id : ids) {
    if (!index.doc_lookup_.emplace(id, static_cast<std::uint32_t>(index.doc_ids_.size())).second) {
      throw Error(ErrorCode::kFormat, "duplicate map id in index header");
    }
    index.doc_ids_.push_back(id);
  }
  for (auto& list : index.postings_) {
    const std::uint32_t n = GetU32(in);
    list.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      Posting p;
      p.doc = GetU32(in);
      p.wx = static_cast<std::int32_t>(GetU32(in));
      p.wy = static_cast<std::int32_t>(GetU32(in));
      if (p.doc >= ids.size()) throw Error(ErrorCode::kFormat, "posting refers to unknown map");
      list.push_back(p);
    }
  }
  if (extra != nullptr) *extra = header.value("meta", nlohmann::json::object());
  return index;
}

std::vector<WordMatch> MatchWords(const LocalMapDescriptor& query, const LocalMapDescriptor& database,
                                  const IndexConfig& config, DescriptorMode mode) {
  const bool filter = mode == DescriptorMode::kLmd;
  const std::int64_t steps = config.PoseThresholdSteps();
  std::vector<WordMatch> best;
  for (int r = 0; r < RotationCount(config, mode); ++r) {
    std::vector<WordMatch> matches;
    for (std::size_t j = 0; j < query.words.size(); ++j) {
      const VisualWord& q = query.words[j];
      const PoseWord p = RotatePoseWord({q.wx, q.wy}, r);
      for (std::size_t i = 0; i < database.words.size(); ++i) {
        const VisualWord& d = database.words[i];
        if (d.wa != q.wa) continue;
        if (filter && !PosePasses(p.wx, p.wy, d.wx, d.wy, steps)) continue;
        matches.push_back({j, i});
        break;
      }
    }
    if (r == 0 || matches.size() > best.size()) best = std::move(matches);
  }
  return best;
}

double AnrRank(const RetrievalResult& result, std::string_view truth_id, std::size_t db_size) {
  Require(db_size > 0, "database size must be positive");
  for (std::size_t i = 0; i < result.ranking.size(); ++i) {
    if (result.ranking[i].map_id == truth_id) return static_cast<double>(i + 1) / static_cast<double>(db_size);
  }
  throw Error(ErrorCode::kTruthNotRanked, "map '" + std::string(truth_id) + "' is not in the ranking");
}

}  // namespace lmd
