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


#include "lmd.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/lmd_index.hpp"
#include "core/map_io.hpp"
#include "core/pipeline.hpp"
#include "core/svg.hpp"
#include "core/synth.hpp"

struct lmd_map {
  lmd::PointsetMap map;
};

struct lmd_parse {
  lmd::ParseResult result;
  std::string map_id;
  std::size_t points = 0;
};

struct lmd_index {
  lmd::InvertedIndex index;
  lmd_index_options options;
};

struct lmd_result {
  lmd::RetrievalResult result;
  lmd::DescriptorMode mode;
};

struct lmd_report {
  std::vector<lmd::ExperimentReport> reports;
};

namespace {

thread_local std::string g_last_error;

lmd_status ToStatus(lmd::ErrorCode code) {
  switch (code) {
    case lmd::ErrorCode::kInvalidArgument: return LMD_ERR_INVALID_ARGUMENT;
    case lmd::ErrorCode::kIo: return LMD_ERR_IO;
    case lmd::ErrorCode::kFormat: return LMD_ERR_FORMAT;
    case lmd::ErrorCode::kEmptyLog: return LMD_ERR_EMPTY_LOG;
    case lmd::ErrorCode::kDegenerateMap: return LMD_ERR_DEGENERATE_MAP;
    case lmd::ErrorCode::kEmptyDescriptor: return LMD_ERR_EMPTY_DESCRIPTOR;
    case lmd::ErrorCode::kNoStructure: return LMD_ERR_NO_STRUCTURE;
    case lmd::ErrorCode::kNoFreeSpace: return LMD_ERR_NO_FREE_SPACE;
    case lmd::ErrorCode::kNoWalls: return LMD_ERR_NO_WALLS;
    case lmd::ErrorCode::kDuplicateMap: return LMD_ERR_DUPLICATE_MAP;
    case lmd::ErrorCode::kEmptyIndex: return LMD_ERR_EMPTY_INDEX;
    case lmd::ErrorCode::kTruthNotRanked: return LMD_ERR_TRUTH_NOT_RANKED;
    case lmd::ErrorCode::kInsufficientDistractors: return LMD_ERR_INSUFFICIENT_DISTRACTORS;
  }
  return LMD_ERR_INTERNAL;
}

template <typename Fn>
lmd_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LMD_OK;
  } catch (const lmd::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return LMD_ERR_FORMAT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LMD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LMD_ERR_INTERNAL;
  }
}

void NotNull(const void* p, const char* what) { lmd::Require(p != nullptr, std::string(what) + " is null"); }

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

lmd::ParseConfig ToParseConfig(const lmd_parse_options* options) {
  lmd_parse_options o;
  lmd_parse_options_default(&o);
  if (options != nullptr) o = *options;
  lmd::ParseConfig c;
  c.hypotheses = o.hypotheses;
  c.rule_steps = o.rule_steps;
  c.split_hypotheses = o.split_hypotheses;
  c.epsilon = o.epsilon;
  c.seed = o.seed;
  lmd::Require(c.hypotheses >= 1 && c.rule_steps >= 0 && c.split_hypotheses >= 1 && c.epsilon > 0.0,
               "invalid parse options");
  return c;
}

std::optional<lmd::Strategy> ToStrategy(lmd_strategy s, bool allow_bow) {
  if (s == LMD_BOW) {
    lmd::Require(allow_bow, "a planning strategy is required");
    return std::nullopt;
  }
  lmd::Require(s >= LMD_S1 && s <= LMD_S5, "unknown strategy");
  return static_cast<lmd::Strategy>(s);
}

lmd::PipelineConfig ToPipeline(const lmd_index_options& o) {
  lmd::PipelineConfig c;
  c.parse = ToParseConfig(&o.parse);
  lmd::Require(o.resolution > 0.0, "resolution must be positive");
  lmd::Require(o.keypoint_spacing >= 0.0, "keypoint spacing must be non-negative");
  c.resolution = o.resolution;
  c.features.min_spacing = o.keypoint_spacing;
  c.index.pose_threshold = o.pose_threshold < 0.0 ? std::numeric_limits<double>::infinity() : o.pose_threshold;
  c.index.manhattan_rotations = o.rotations != 0;
  c.index.mode = o.strategy == LMD_BOW ? lmd::DescriptorMode::kBow : lmd::DescriptorMode::kLmd;
  return c;
}

nlohmann::json ParseOptionsJson(const lmd_parse_options& o) {
  return {{"K", o.hypotheses}, {"N", o.rule_steps}, {"H", o.split_hypotheses}, {"epsilon", o.epsilon},
          {"seed", o.seed}};
}

lmd::LocalMapDescriptor DescribeWithOptions(const lmd::PointsetMap& map, const lmd_index_options& o) {
  const lmd::PipelineConfig config = ToPipeline(o);
  const lmd::MapDescriptors prepared = lmd::PrepareMap(map, config);
  return lmd::DescribeForStrategy(map, prepared, ToStrategy(o.strategy, true), config);
}

std::vector<std::string> SplitMethods(const char* methods) {
  std::vector<std::string> out;
  std::stringstream ss(methods == nullptr ? "bow,s1,s2,s3,s4,s5" : methods);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  lmd::Require(!out.empty(), "no evaluation methods given");
  return out;
}

lmd::EvalConfig ToEvalConfig(const lmd_eval_options& o) {
  lmd::EvalConfig c;
  c.methods = SplitMethods(o.methods);
  c.db_size = o.db_size;
  c.r_overlap = o.r_overlap;
  c.min_separation = o.min_separation;
  c.seed = o.seed;
  lmd::Require(c.db_size >= 1, "database size must be positive");
  lmd::Require(c.r_overlap >= 0.0 && c.r_overlap <= 1.0, "overlap threshold must be in [0, 1]");
  return c;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lmd::Error(lmd::ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw lmd::Error(lmd::ErrorCode::kIo, "failed to write '" + path.string() + "'");
}

void SaveMaps(const std::vector<lmd::PointsetMap>& maps, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const lmd::PointsetMap& m : maps) lmd::SaveMapFile(dir / (m.id + ".map"), m);
}

}  // namespace

extern "C" {

const char* lmd_version(void) { return "1.0.0"; }

const char* lmd_status_name(lmd_status status) {
  switch (status) {
    case LMD_OK: return "OK";
    case LMD_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case LMD_ERR_IO: return "Io";
    case LMD_ERR_FORMAT: return "Format";
    case LMD_ERR_EMPTY_LOG: return "EmptyLog";
    case LMD_ERR_DEGENERATE_MAP: return "DegenerateMap";
    case LMD_ERR_EMPTY_DESCRIPTOR: return "EmptyDescriptor";
    case LMD_ERR_NO_STRUCTURE: return "NoStructure";
    case LMD_ERR_NO_FREE_SPACE: return "NoFreeSpace";
    case LMD_ERR_NO_WALLS: return "NoWalls";
    case LMD_ERR_DUPLICATE_MAP: return "DuplicateMap";
    case LMD_ERR_EMPTY_INDEX: return "EmptyIndex";
    case LMD_ERR_TRUTH_NOT_RANKED: return "TruthNotRanked";
    case LMD_ERR_INSUFFICIENT_DISTRACTORS: return "InsufficientDistractors";
    case LMD_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* lmd_last_error(void) { return g_last_error.c_str(); }

void lmd_string_free(char* s) { std::free(s); }

lmd_status lmd_map_load(const char* path, lmd_map** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new lmd_map{lmd::LoadMapFile(path)};
  });
}

lmd_status lmd_map_from_points(const char* id, const double* xy, size_t n, lmd_map** out) {
  return Guard([&] {
    NotNull(id, "id");
    NotNull(out, "out");
    lmd::Require(n == 0 || xy != nullptr, "points are null");
    auto* m = new lmd_map;
    m->map.id = id;
    m->map.points.reserve(n);
    for (size_t i = 0; i < n; ++i) m->map.points.push_back({xy[2 * i], xy[2 * i + 1]});
    *out = m;
  });
}

lmd_status lmd_map_save(const lmd_map* map, const char* path) {
  return Guard([&] {
    NotNull(map, "map");
    NotNull(path, "path");
    lmd::SaveMapFile(path, map->map);
  });
}

void lmd_map_free(lmd_map* map) { delete map; }

size_t lmd_map_point_count(const lmd_map* map) { return map == nullptr ? 0 : map->map.points.size(); }

const char* lmd_map_id(const lmd_map* map) { return map == nullptr ? "" : map->map.id.c_str(); }

lmd_status lmd_map_write_pgm(const lmd_map* map, double resolution, const char* path) {
  return Guard([&] {
    NotNull(map, "map");
    NotNull(path, "path");
    lmd::Require(resolution > 0.0, "resolution must be positive");
    lmd::WritePgm(path, lmd::Rasterize(map->map, map->map.viewpoints, resolution));
  });
}

lmd_status lmd_map_describe_csv(const lmd_map* map, double keypoint_spacing, char** csv) {
  return Guard([&] {
    NotNull(map, "map");
    NotNull(csv, "csv");
    lmd::Require(keypoint_spacing >= 0.0, "keypoint spacing must be non-negative");
    const lmd::PolestarConfig config;
    const std::vector<lmd::Point2> keys = lmd::SampleKeypoints(map->map, keypoint_spacing);
    const std::vector<lmd::PolestarDescriptor> descs = lmd::PolestarAll(map->map, keys, config.radii);
    std::ostringstream out;
    lmd::WriteDescriptorCsv(out, map->map.id, descs);
    *csv = CopyString(out.str());
  });
}

lmd_status lmd_log_window(const char* log_path, int carmen, double window, double stride, const char* out_dir,
                          size_t* map_count) {
  return Guard([&] {
    NotNull(log_path, "log path");
    NotNull(out_dir, "output directory");
    std::ifstream in(log_path);
    if (!in) throw lmd::Error(lmd::ErrorCode::kIo, std::string("cannot open '") + log_path + "'");
    const std::vector<lmd::ScanLogEntry> log = carmen != 0 ? lmd::ReadCarmenLog(in) : lmd::ReadScanLog(in);
    const std::string source = std::filesystem::path(log_path).stem().string();
    const std::vector<lmd::PointsetMap> maps = lmd::WindowLog(log, window, stride, source);
    SaveMaps(maps, out_dir);
    if (map_count != nullptr) *map_count = maps.size();
  });
}

void lmd_parse_options_default(lmd_parse_options* options) {
  if (options == nullptr) return;
  const lmd::ParseConfig c;
  options->hypotheses = c.hypotheses;
  options->rule_steps = c.rule_steps;
  options->split_hypotheses = c.split_hypotheses;
  options->epsilon = c.epsilon;
  options->seed = c.seed;
}

lmd_status lmd_map_parse(const lmd_map* map, const lmd_parse_options* options, lmd_parse** out) {
  return Guard([&] {
    NotNull(map, "map");
    NotNull(out, "out");
    auto result = lmd::ParseMap(map->map, ToParseConfig(options));
    *out = new lmd_parse{std::move(result), map->map.id, map->map.points.size()};
  });
}

double lmd_parse_score(const lmd_parse* parse) { return parse == nullptr ? 0.0 : parse->result.score; }

double lmd_parse_theta(const lmd_parse* parse) { return parse == nullptr ? 0.0 : parse->result.theta; }

size_t lmd_parse_wall_count(const lmd_parse* parse) { return parse == nullptr ? 0 : parse->result.walls.size(); }

lmd_status lmd_parse_wall(const lmd_parse* parse, size_t i, double xyxy[4]) {
  return Guard([&] {
    NotNull(parse, "parse");
    NotNull(xyxy, "xyxy");
    lmd::Require(i < parse->result.walls.size(), "wall index out of range");
    const lmd::WallSegment& w = parse->result.walls[i];
    xyxy[0] = w.a.x;
    xyxy[1] = w.a.y;
    xyxy[2] = w.b.x;
    xyxy[3] = w.b.y;
  });
}

lmd_status lmd_parse_to_json(const lmd_parse* parse, char** json) {
  return Guard([&] {
    NotNull(parse, "parse");
    NotNull(json, "json");
    const lmd::ParseResult& r = parse->result;
    nlohmann::json j;
    j["map_id"] = parse->map_id;
    j["points"] = parse->points;
    j["theta"] = r.theta;
    j["score"] = r.score;
    j["explained"] = r.explained.size();
    j["rooms"] = nlohmann::json::array();
    for (const lmd::Room& room : r.rooms) {
      j["rooms"].push_back({{"x_start", room.x_start},
                            {"y_start", room.y_start},
                            {"x_end", room.x_end},
                            {"y_end", room.y_end}});
    }
    j["walls"] = nlohmann::json::array();
    for (const lmd::WallSegment& w : r.walls) {
      j["walls"].push_back({{"a", {w.a.x, w.a.y}}, {"b", {w.b.x, w.b.y}}, {"room", w.parent_room}});
    }
    j["policy"] = nlohmann::json::array();
    for (const lmd::RuleApplication& a : r.policy.rules) {
      nlohmann::json ja{{"rule", std::string(lmd::RuleName(a.rule))}, {"room", a.room}};
      if (a.rule == lmd::Rule::kSplitVertical || a.rule == lmd::Rule::kSplitHorizontal) ja["position"] = a.position;
      j["policy"].push_back(std::move(ja));
    }
    *json = CopyString(j.dump(2) + "\n");
  });
}

lmd_status lmd_parse_write_svg(const lmd_parse* parse, const lmd_map* map, const char* path) {
  return Guard([&] {
    NotNull(parse, "parse");
    NotNull(map, "map");
    NotNull(path, "path");
    std::ostringstream out;
    lmd::RenderParseSvg(out, map->map, parse->result);
    WriteText(path, out.str());
  });
}

void lmd_parse_free(lmd_parse* parse) { delete parse; }

lmd_status lmd_plan(const lmd_map* map, lmd_strategy strategy, const lmd_parse_options* parse, double resolution,
                    lmd_viewpoint* out) {
  return Guard([&] {
    NotNull(map, "map");
    NotNull(out, "out");
    lmd::Require(resolution > 0.0, "resolution must be positive");
    const lmd::Strategy s = *ToStrategy(strategy, false);
    lmd::PipelineConfig config;
    config.parse = ToParseConfig(parse);
    config.resolution = resolution;
    const lmd::MapAnalysis analysis = lmd::AnalyzeMap(map->map, config);
    const lmd::Viewpoint v = lmd::PlanViewpoint(s, analysis.cells, analysis.grid, analysis.parse);
    *out = {v.position.x, v.position.y, v.orientation, 0};
  });
}

lmd_status lmd_plan_write_svg(const lmd_map* map, const lmd_strategy* strategies, size_t count,
                              const lmd_parse_options* parse, double resolution, const char* path) {
  return Guard([&] {
    NotNull(map, "map");
    NotNull(path, "path");
    lmd::Require(count == 0 || strategies != nullptr, "strategies are null");
    lmd::Require(resolution > 0.0, "resolution must be positive");
    lmd::PipelineConfig config;
    config.parse = ToParseConfig(parse);
    config.resolution = resolution;
    const lmd::MapAnalysis analysis = lmd::AnalyzeMap(map->map, config);
    std::vector<lmd::Viewpoint> viewpoints;
    std::optional<lmd::UnoccupiedBox> box;
    for (size_t i = 0; i < count; ++i) {
      const lmd::Strategy s = *ToStrategy(strategies[i], false);
      viewpoints.push_back(lmd::PlanWithFallback(s, map->map, analysis).viewpoint);
      if (s == lmd::Strategy::kS5 && !analysis.cells.unoccupied.empty()) {
        box = lmd::PlanS5Box(analysis.cells, analysis.grid, analysis.parse.theta);
      }
    }
    std::ostringstream out;
    lmd::RenderPlanSvg(out, map->map, analysis.grid, analysis.cells, viewpoints, box);
    WriteText(path, out.str());
  });
}

void lmd_index_options_default(lmd_index_options* options) {
  if (options == nullptr) return;
  options->strategy = LMD_S5;
  options->pose_threshold = lmd::kDefaultPoseThreshold;
  options->rotations = 1;
  options->resolution = lmd::kDefaultResolution;
  options->keypoint_spacing = lmd::PolestarConfig{}.min_spacing;
  lmd_parse_options_default(&options->parse);
}

lmd_status lmd_index_create(const lmd_index_options* options, lmd_index** out) {
  return Guard([&] {
    NotNull(out, "out");
    lmd_index_options o;
    lmd_index_options_default(&o);
    if (options != nullptr) o = *options;
    ToStrategy(o.strategy, true);
    *out = new lmd_index{lmd::InvertedIndex(ToPipeline(o).index), o};
  });
}

lmd_status lmd_index_add_map(lmd_index* index, const lmd_map* map) {
  return Guard([&] {
    NotNull(index, "index");
    NotNull(map, "map");
    index->index.Insert(DescribeWithOptions(map->map, index->options));
  });
}

lmd_status lmd_index_save(const lmd_index* index, const char* path) {
  return Guard([&] {
    NotNull(index, "index");
    NotNull(path, "path");
    const lmd_index_options& o = index->options;
    nlohmann::json meta;
    meta["strategy"] = o.strategy == LMD_BOW ? "bow" : std::string(lmd::StrategyName(*ToStrategy(o.strategy, false)));
    meta["resolution"] = o.resolution;
    meta["keypoint_spacing"] = o.keypoint_spacing;
    meta["parse"] = ParseOptionsJson(o.parse);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lmd::Error(lmd::ErrorCode::kIo, std::string("cannot open '") + path + "' for writing");
    index->index.Save(out, meta);
  });
}

lmd_status lmd_index_load(const char* path, lmd_index** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lmd::Error(lmd::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    nlohmann::json meta;
    lmd::InvertedIndex index = lmd::InvertedIndex::Load(in, &meta);
    lmd_index_options o;
    lmd_index_options_default(&o);
    const lmd::IndexConfig& c = index.config();
    o.pose_threshold = std::isfinite(c.pose_threshold) ? c.pose_threshold : -1.0;
    o.rotations = c.manhattan_rotations ? 1 : 0;
    const std::string strategy = meta.value("strategy", c.mode == lmd::DescriptorMode::kBow ? "bow" : "s5");
    if (strategy == "bow") {
      o.strategy = LMD_BOW;
    } else {
      const std::optional<lmd::Strategy> s = lmd::ParseStrategy(strategy);
      if (!s) throw lmd::Error(lmd::ErrorCode::kFormat, "unknown strategy '" + strategy + "' in index");
      o.strategy = static_cast<lmd_strategy>(*s);
    }
    o.resolution = meta.value("resolution", o.resolution);
    o.keypoint_spacing = meta.value("keypoint_spacing", o.keypoint_spacing);
    if (meta.contains("parse")) {
      const nlohmann::json& p = meta["parse"];
      o.parse.hypotheses = p.value("K", o.parse.hypotheses);
      o.parse.rule_steps = p.value("N", o.parse.rule_steps);
      o.parse.split_hypotheses = p.value("H", o.parse.split_hypotheses);
      o.parse.epsilon = p.value("epsilon", o.parse.epsilon);
      o.parse.seed = p.value("seed", o.parse.seed);
    }
    *out = new lmd_index{std::move(index), o};
  });
}

size_t lmd_index_doc_count(const lmd_index* index) { return index == nullptr ? 0 : index->index.doc_count(); }

lmd_status lmd_index_query_map(const lmd_index* index, const lmd_map* query, size_t top_k, int bow,
                               lmd_result** out) {
  return Guard([&] {
    NotNull(index, "index");
    NotNull(query, "query");
    NotNull(out, "out");
    const lmd::LocalMapDescriptor desc = DescribeWithOptions(query->map, index->options);
    std::optional<lmd::DescriptorMode> mode;
    if (bow != 0) mode = lmd::DescriptorMode::kBow;
    lmd::RetrievalResult result = index->index.Query(desc, top_k, mode);
    *out = new lmd_result{std::move(result), mode.value_or(index->index.config().mode)};
  });
}

void lmd_index_free(lmd_index* index) { delete index; }

size_t lmd_result_size(const lmd_result* result) { return result == nullptr ? 0 : result->result.ranking.size(); }

const char* lmd_result_map_id(const lmd_result* result, size_t i) {
  if (result == nullptr || i >= result->result.ranking.size()) return nullptr;
  return result->result.ranking[i].map_id.c_str();
}

uint32_t lmd_result_score(const lmd_result* result, size_t i) {
  if (result == nullptr || i >= result->result.ranking.size()) return 0;
  return result->result.ranking[i].score;
}

lmd_status lmd_result_to_json(const lmd_result* result, char** json) {
  return Guard([&] {
    NotNull(result, "result");
    NotNull(json, "json");
    nlohmann::json j;
    j["query"] = result->result.query_id;
    j["mode"] = std::string(lmd::ModeName(result->mode));
    j["ranking"] = nlohmann::json::array();
    for (const lmd::RankedMap& r : result->result.ranking) {
      j["ranking"].push_back({{"map_id", r.map_id}, {"score", r.score}});
    }
    *json = CopyString(j.dump(2) + "\n");
  });
}

void lmd_result_free(lmd_result* result) { delete result; }

lmd_status lmd_match_write_svg(const lmd_map* query, const lmd_map* database, const lmd_index_options* options,
                               const char* path, size_t* match_count) {
  return Guard([&] {
    NotNull(query, "query");
    NotNull(database, "database");
    NotNull(path, "path");
    lmd_index_options o;
    lmd_index_options_default(&o);
    if (options != nullptr) o = *options;
    const lmd::LocalMapDescriptor qd = DescribeWithOptions(query->map, o);
    const lmd::LocalMapDescriptor dd = DescribeWithOptions(database->map, o);
    const lmd::IndexConfig config = ToPipeline(o).index;
    const std::vector<lmd::WordMatch> matches = lmd::MatchWords(qd, dd, config, config.mode);
    std::ostringstream out;
    lmd::RenderMatchesSvg(out, query->map, database->map, qd, dd, matches);
    WriteText(path, out.str());
    if (match_count != nullptr) *match_count = matches.size();
  });
}

void lmd_eval_options_default(lmd_eval_options* options) {
  if (options == nullptr) return;
  const lmd::BenchmarkConfig b;
  options->seed = 7;
  options->seed_count = 1;
  options->methods = "bow,s1,s2,s3,s4,s5";
  options->db_size = b.eval.db_size;
  options->worlds = b.worlds;
  options->distractor_worlds = b.distractor_worlds;
  options->rooms = b.synth.rooms;
  options->clutter = b.synth.clutter;
  options->drop = b.synth.drop;
  options->r_overlap = b.eval.r_overlap;
  options->min_separation = b.eval.min_separation;
}

lmd_status lmd_eval_run(const lmd_eval_options* options, lmd_report** out) {
  return Guard([&] {
    NotNull(out, "out");
    lmd_eval_options o;
    lmd_eval_options_default(&o);
    if (options != nullptr) o = *options;
    lmd::Require(o.seed_count >= 1, "seed count must be positive");
    lmd::Require(o.worlds >= 1 && o.distractor_worlds >= 0, "invalid world counts");
    lmd::BenchmarkConfig config;
    config.seeds.clear();
    for (size_t i = 0; i < o.seed_count; ++i) config.seeds.push_back(o.seed + i);
    config.worlds = o.worlds;
    config.distractor_worlds = o.distractor_worlds;
    config.synth.rooms = o.rooms;
    config.synth.clutter = o.clutter;
    config.synth.drop = o.drop;
    config.eval = ToEvalConfig(o);
    *out = new lmd_report{lmd::RunSynthBenchmark(config)};
  });
}

lmd_status lmd_eval_run_maps(const char* map_dir, const lmd_eval_options* options, lmd_report** out) {
  return Guard([&] {
    NotNull(map_dir, "map directory");
    NotNull(out, "out");
    lmd_eval_options o;
    lmd_eval_options_default(&o);
    if (options != nullptr) o = *options;
    const std::vector<lmd::PointsetMap> maps = lmd::LoadMapDirectory(map_dir);
    const std::vector<char> distractor_only(maps.size(), 0);
    const std::string name = std::filesystem::path(map_dir).filename().string();
    auto* report = new lmd_report;
    try {
      report->reports.push_back(lmd::RunExperiment(maps, distractor_only, ToEvalConfig(o), name));
    } catch (...) {
      delete report;
      throw;
    }
    *out = report;
  });
}

lmd_status lmd_report_to_json(const lmd_report* report, char** json) {
  return Guard([&] {
    NotNull(report, "report");
    NotNull(json, "json");
    *json = CopyString(lmd::ReportToJson(report->reports).dump(2) + "\n");
  });
}

lmd_status lmd_report_to_csv(const lmd_report* report, char** csv) {
  return Guard([&] {
    NotNull(report, "report");
    NotNull(csv, "csv");
    std::ostringstream out;
    lmd::WriteAnrCsv(out, report->reports);
    *csv = CopyString(out.str());
  });
}

double lmd_report_mean_anr(const lmd_report* report, const char* method) {
  if (report == nullptr || method == nullptr) return -1.0;
  for (const auto& [name, anr] : lmd::MeanAnr(report->reports)) {
    if (name == method) return anr;
  }
  return -1.0;
}

void lmd_report_free(lmd_report* report) { delete report; }

lmd_status lmd_synth_write(uint64_t seed, int rooms, double clutter, double drop, const char* out_dir,
                           size_t* map_count) {
  return Guard([&] {
    NotNull(out_dir, "output directory");
    lmd::SynthConfig config;
    config.seed = seed;
    config.rooms = rooms;
    config.clutter = clutter;
    config.drop = drop;
    config.name = "synth" + std::to_string(seed);
    const lmd::SynthWorld world = lmd::SynthesizeWorld(config);
    SaveMaps(world.maps, out_dir);
    std::ostringstream log;
    lmd::WriteScanLog(log, world.log);
    WriteText(std::filesystem::path(out_dir) / "world.log", log.str());
    if (map_count != nullptr) *map_count = world.maps.size();
  });
}

}  // extern "C"
