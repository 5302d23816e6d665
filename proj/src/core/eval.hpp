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


#ifndef LMD_CORE_EVAL_HPP
#define LMD_CORE_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/map_model.hpp"
#include "core/pipeline.hpp"
#include "core/synth.hpp"

namespace lmd {

inline constexpr double kDefaultOverlapRadius = 0.1;
inline constexpr double kDefaultRelevantOverlap = 0.75;
inline constexpr double kDefaultMinSeparation = 10.0;

// Map points in the common (log) frame, bucketed for radius queries.
class OverlapGrid {
 public:
  OverlapGrid(const PointsetMap& map, double radius);

  std::span<const Point2> points() const { return points_; }
  bool HasNeighbor(Point2 p) const;
  // Number of `other` points with a neighbour here. Gives up as soon as more
  // than `max_misses` points have missed, so the count is then only a lower
  // bound.
  std::size_t CountCovered(std::span<const Point2> other, std::size_t max_misses) const;
  bool BoxesTouch(const OverlapGrid& other) const;

 private:
  double radius_;
  double cell_;
  Point2 lo_;
  Point2 hi_;
  std::size_t cols_ = 0;
  std::size_t rows_ = 0;
  std::vector<Point2> points_;
  std::vector<std::uint32_t> start_;  // CSR offsets per cell
  std::vector<Point2> sorted_;
};

// Fraction of a's points that have a point of b within `radius` (inclusive),
// both maps taken to the common frame through their origins. 0 for an empty a.
double Overlap(const PointsetMap& a, const PointsetMap& b, double radius = kDefaultOverlapRadius);
// min(Overlap(a, b), Overlap(b, a)).
double SymmetricOverlap(const PointsetMap& a, const PointsetMap& b, double radius = kDefaultOverlapRadius);

struct RelevantPair {
  std::size_t query = 0;  // indices into the map list
  std::size_t truth = 0;
  std::string query_id;
  std::string truth_id;
  double overlap = 0.0;          // symmetric
  double path_separation = 0.0;  // meters of odometry
};

// Unordered pairs of maps from the same source whose symmetric overlap is at
// least `r_overlap`, ignoring path separation; query < truth.
std::vector<RelevantPair> FindOverlappingPairs(std::span<const PointsetMap> maps, double r_overlap,
                                               double radius = kDefaultOverlapRadius);

// All ordered pairs with symmetric overlap >= r_overlap and path separation
// >= min_separation, same source only.
std::vector<RelevantPair> FindRelevantPairs(std::span<const PointsetMap> maps,
                                            double r_overlap = kDefaultRelevantOverlap,
                                            double min_separation = kDefaultMinSeparation,
                                            double radius = kDefaultOverlapRadius);

struct EvalConfig {
  // "bow" and/or "s1".."s5".
  std::vector<std::string> methods{"bow", "s1", "s2", "s3", "s4", "s5"};
  std::size_t db_size = 100;
  double r_overlap = kDefaultRelevantOverlap;
  double min_separation = kDefaultMinSeparation;
  double overlap_radius = kDefaultOverlapRadius;
  std::uint64_t seed = 7;
  PipelineConfig pipeline;
};

struct MethodOutcome {
  std::size_t rank = 0;  // 1-based
  double normalized_rank = 0.0;
  std::uint32_t truth_score = 0;
  std::uint32_t top_score = 0;
  std::optional<double> viewpoint_error;  // meters, planners only
};

// One query: the truth map plus db_size - 1 distractors. Database entries
// are relabelled with shuffled ids so ties do not favour any map.
struct RetrievalTask {
  RelevantPair pair;
  std::vector<std::size_t> database;       // map indices, truth first
  std::vector<std::string> labels;         // id each database map is indexed under
  std::vector<MethodOutcome> outcomes;     // parallel to EvalConfig::methods
};

inline constexpr std::size_t kHistogramBins = 11;  // 1 m bins, last is >= 10 m

struct MethodSummary {
  std::string method;
  double anr = 0.0;
  std::size_t fallbacks = 0;  // maps whose planner fell back to the centroid
  std::vector<double> viewpoint_errors;
  std::vector<std::size_t> histogram;  // kHistogramBins counts
};

struct ExperimentReport {
  std::string dataset;
  std::uint64_t seed = 0;
  std::size_t db_size = 0;
  std::size_t map_count = 0;
  std::size_t relevant_pairs = 0;
  std::vector<RetrievalTask> tasks;
  std::vector<MethodSummary> methods;
};

// One task per query map that has a relevant partner; the truth is the
// partner with the highest overlap (lowest index on ties). Distractors are
// drawn uniformly without replacement from maps whose overlap with the query
// is below r_overlap. Maps flagged in `distractor_only` are never queried.
// Throws Error(kInsufficientDistractors).
std::vector<RetrievalTask> MakeTasks(std::span<const PointsetMap> maps, std::span<const RelevantPair> pairs,
                                     std::span<const RelevantPair> overlapping, std::span<const char> distractor_only,
                                     const EvalConfig& config);

ExperimentReport RunExperiment(std::span<const PointsetMap> maps, std::span<const char> distractor_only,
                               const EvalConfig& config, std::string dataset);

std::vector<std::size_t> ErrorHistogram(std::span<const double> errors);

struct BenchmarkConfig {
  std::vector<std::uint64_t> seeds{7};
  int worlds = 2;             // worlds whose maps are queried
  int distractor_worlds = 1;  // worlds used only as distractors
  SynthConfig synth{.rooms = 4, .clutter = 0.2, .drop = 0.2};
  EvalConfig eval;
};

// Maps of every world of one benchmark seed and their distractor-only flags.
struct BenchmarkWorlds {
  std::vector<PointsetMap> maps;
  std::vector<char> distractor_only;
};

BenchmarkWorlds MakeBenchmarkWorlds(std::uint64_t seed, const BenchmarkConfig& config);

std::vector<ExperimentReport> RunSynthBenchmark(const BenchmarkConfig& config);

// Mean ANR per method across reports, in method order of the first report.
std::vector<std::pair<std::string, double>> MeanAnr(std::span<const ExperimentReport> reports);

nlohmann::json ReportToJson(std::span<const ExperimentReport> reports);
// dataset,method,queries,anr; one row per (method, dataset), then "mean" rows.
void WriteAnrCsv(std::ostream& out, std::span<const ExperimentReport> reports);

}  // namespace lmd

#endif  // LMD_CORE_EVAL_HPP
