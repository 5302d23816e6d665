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


// Command-line front end. Everything goes through the C API in lmd.h.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lmd.h"

namespace {

// `message` is already prefixed with the status name.
struct Failure {
  lmd_status status;
  std::string message;
};

void Check(lmd_status status) {
  if (status != LMD_OK) throw Failure{status, lmd_last_error()};
}

[[noreturn]] void Fail(lmd_status status, const std::string& detail) {
  throw Failure{status, std::string(lmd_status_name(status)) + ": " + detail};
}

struct MapDeleter {
  void operator()(lmd_map* m) const { lmd_map_free(m); }
};
struct ParseDeleter {
  void operator()(lmd_parse* p) const { lmd_parse_free(p); }
};
struct IndexDeleter {
  void operator()(lmd_index* i) const { lmd_index_free(i); }
};
struct ResultDeleter {
  void operator()(lmd_result* r) const { lmd_result_free(r); }
};
struct ReportDeleter {
  void operator()(lmd_report* r) const { lmd_report_free(r); }
};

using MapPtr = std::unique_ptr<lmd_map, MapDeleter>;

MapPtr LoadMap(const std::string& path) {
  lmd_map* m = nullptr;
  Check(lmd_map_load(path.c_str(), &m));
  return MapPtr(m);
}

// Takes ownership of a C string and returns it as std::string.
std::string Take(char* s) {
  std::string out(s);
  lmd_string_free(s);
  return out;
}

void Emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    Fail(LMD_ERR_IO, "cannot write '" + path + "'");
  }
}

lmd_strategy StrategyFromName(const std::string& name) {
  if (name == "bow") return LMD_BOW;
  if (name.size() == 2 && name[0] == 's' && name[1] >= '1' && name[1] <= '5') {
    return static_cast<lmd_strategy>(name[1] - '0');
  }
  Fail(LMD_ERR_INVALID_ARGUMENT, "unknown strategy '" + name + "'");
}

std::string FormatNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void AddParseOptions(CLI::App* cmd, lmd_parse_options& o) {
  cmd->add_option("--K", o.hypotheses, "policy hypotheses");
  cmd->add_option("--N", o.rule_steps, "split steps per policy");
  cmd->add_option("--H", o.split_hypotheses, "split-line candidates per step");
  cmd->add_option("--epsilon", o.epsilon, "wall tolerance in meters");
  cmd->add_option("--seed", o.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local map descriptors for 2D lidar map retrieval"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lmd_version()));

  // parse
  lmd_parse_options parse_opts;
  lmd_parse_options_default(&parse_opts);
  std::string parse_map;
  std::string parse_svg;
  std::string parse_json;
  CLI::App* parse = app.add_subcommand("parse", "Parse a map into Manhattan rooms and walls");
  parse->add_option("map", parse_map, "map file")->required();
  AddParseOptions(parse, parse_opts);
  parse->add_option("--svg", parse_svg, "write an SVG overlay");
  parse->add_option("--json", parse_json, "write the JSON result to a file instead of stdout");

  // plan
  lmd_parse_options plan_parse;
  lmd_parse_options_default(&plan_parse);
  std::string plan_map;
  std::string plan_strategy = "s5";
  bool plan_all = false;
  std::string plan_svg;
  std::string plan_json;
  double plan_resolution = 0.1;
  CLI::App* plan = app.add_subcommand("plan", "Plan the unique viewpoint of a map");
  plan->add_option("map", plan_map, "map file")->required();
  plan->add_option("--strategy", plan_strategy, "s1..s5");
  plan->add_flag("--all", plan_all, "plan with every strategy");
  plan->add_option("--svg", plan_svg, "write an SVG overlay");
  plan->add_option("--json", plan_json, "write the JSON result to a file instead of stdout");
  plan->add_option("--resolution", plan_resolution, "grid resolution in meters");
  AddParseOptions(plan, plan_parse);

  // index build / query
  CLI::App* index = app.add_subcommand("index", "Build or query an inverted index");
  index->require_subcommand(1);
  lmd_index_options build_opts;
  lmd_index_options_default(&build_opts);
  std::string build_dir;
  std::string build_out;
  std::string build_strategy = "s5";
  bool build_no_rotations = false;
  CLI::App* build = index->add_subcommand("build", "Index every *.map file of a directory");
  build->add_option("map-dir", build_dir, "directory of map files")->required();
  build->add_option("--strategy", build_strategy, "bow or s1..s5");
  build->add_option("--out", build_out, "index file")->required();
  build->add_option("--dxy", build_opts.pose_threshold, "pose filter threshold in meters; negative disables");
  build->add_flag("--no-rotations", build_no_rotations, "do not try quarter-turn rotations of queries");
  build->add_option("--resolution", build_opts.resolution, "grid resolution in meters");
  build->add_option("--spacing", build_opts.keypoint_spacing, "keypoint spacing in meters");
  AddParseOptions(build, build_opts.parse);

  std::string query_index;
  std::string query_map;
  std::size_t query_top = 10;
  bool query_bow = false;
  std::string query_json;
  CLI::App* query = index->add_subcommand("query", "Rank indexed maps against a query map");
  query->add_option("index", query_index, "index file")->required();
  query->add_option("map", query_map, "query map file")->required();
  query->add_option("--top", query_top, "number of results; 0 for all");
  query->add_flag("--bow", query_bow, "ignore pose words");
  query->add_option("--json", query_json, "write the JSON result to a file instead of stdout");

  // eval
  lmd_eval_options eval_opts;
  lmd_eval_options_default(&eval_opts);
  std::string eval_world = "synth";
  std::string eval_methods = "bow,s1,s2,s3,s4,s5";
  std::string eval_report;
  std::string eval_csv;
  CLI::App* eval = app.add_subcommand("eval", "Run a retrieval experiment");
  eval->add_option("--world", eval_world, "'synth' or a directory of map files");
  eval->add_option("--seed", eval_opts.seed, "random seed");
  eval->add_option("--seeds", eval_opts.seed_count, "number of consecutive seeds (synthetic worlds)");
  eval->add_option("--strategies", eval_methods, "comma separated: bow,s1,...,s5");
  eval->add_option("--db-size", eval_opts.db_size, "database size per query");
  eval->add_option("--worlds", eval_opts.worlds, "synthetic worlds with queries per seed");
  eval->add_option("--distractor-worlds", eval_opts.distractor_worlds, "synthetic worlds used only as distractors");
  eval->add_option("--rooms", eval_opts.rooms, "rooms per synthetic world");
  eval->add_option("--clutter", eval_opts.clutter, "clutter level in [0, 1)");
  eval->add_option("--drop", eval_opts.drop, "point dropout probability in [0, 1)");
  eval->add_option("--r-overlap", eval_opts.r_overlap, "relevant-pair overlap threshold");
  eval->add_option("--min-separation", eval_opts.min_separation, "relevant-pair path separation in meters");
  eval->add_option("--report", eval_report, "JSON report file");
  eval->add_option("--csv", eval_csv, "ANR table CSV file");

  // synth
  std::uint64_t synth_seed = 7;
  int synth_rooms = 4;
  double synth_clutter = 0.0;
  double synth_drop = 0.0;
  std::string synth_dir;
  CLI::App* synth = app.add_subcommand("synth", "Write the local maps of a synthetic world");
  synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("--rooms", synth_rooms, "rooms");
  synth->add_option("--clutter", synth_clutter, "clutter level in [0, 1)");
  synth->add_option("--drop", synth_drop, "point dropout probability in [0, 1)");
  synth->add_option("--out-dir", synth_dir, "output directory")->required();

  // window
  std::string window_log;
  std::string window_dir;
  bool window_carmen = false;
  double window_length = 5.0;
  double window_stride = 1.0;
  CLI::App* window = app.add_subcommand("window", "Cut a scan log into local maps");
  window->add_option("log", window_log, "scan log")->required();
  window->add_flag("--carmen", window_carmen, "the log is a carmen log");
  window->add_option("--window", window_length, "path length per map in meters");
  window->add_option("--stride", window_stride, "path distance between maps in meters");
  window->add_option("--out-dir", window_dir, "output directory")->required();

  // grid
  std::string grid_map;
  std::string grid_pgm;
  double grid_resolution = 0.1;
  CLI::App* grid = app.add_subcommand("grid", "Rasterize a map into an occupancy grid");
  grid->add_option("map", grid_map, "map file")->required();
  grid->add_option("--pgm", grid_pgm, "PGM output")->required();
  grid->add_option("--resolution", grid_resolution, "grid resolution in meters");

  // describe
  std::string describe_map;
  std::string describe_csv;
  double describe_spacing = 0.3;
  CLI::App* describe = app.add_subcommand("describe", "Dump the polestar descriptors of a map");
  describe->add_option("map", describe_map, "map file")->required();
  describe->add_option("--csv", describe_csv, "CSV output instead of stdout");
  describe->add_option("--spacing", describe_spacing, "keypoint spacing in meters");

  // match
  lmd_index_options match_opts;
  lmd_index_options_default(&match_opts);
  std::string match_query;
  std::string match_db;
  std::string match_strategy = "s5";
  std::string match_svg;
  CLI::App* match = app.add_subcommand("match", "Draw the matched visual words of two maps");
  match->add_option("query", match_query, "query map file")->required();
  match->add_option("database", match_db, "database map file")->required();
  match->add_option("--strategy", match_strategy, "bow or s1..s5");
  match->add_option("--dxy", match_opts.pose_threshold, "pose filter threshold in meters");
  match->add_option("--svg", match_svg, "SVG output")->required();
  AddParseOptions(match, match_opts.parse);

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse->parsed()) {
      MapPtr map = LoadMap(parse_map);
      lmd_parse* raw = nullptr;
      Check(lmd_map_parse(map.get(), &parse_opts, &raw));
      std::unique_ptr<lmd_parse, ParseDeleter> result(raw);
      char* json = nullptr;
      Check(lmd_parse_to_json(result.get(), &json));
      Emit(Take(json), parse_json);
      if (!parse_svg.empty()) Check(lmd_parse_write_svg(result.get(), map.get(), parse_svg.c_str()));
    } else if (plan->parsed()) {
      MapPtr map = LoadMap(plan_map);
      std::vector<std::string> names;
      if (plan_all) {
        names = {"s1", "s2", "s3", "s4", "s5"};
      } else {
        names = {plan_strategy};
      }
      std::vector<lmd_strategy> strategies;
      std::string json = plan_all ? "[\n" : "";
      for (std::size_t i = 0; i < names.size(); ++i) {
        const lmd_strategy s = StrategyFromName(names[i]);
        if (s == LMD_BOW) {
          Fail(LMD_ERR_INVALID_ARGUMENT, "plan needs a strategy s1..s5");
        }
        strategies.push_back(s);
        lmd_viewpoint v;
        Check(lmd_plan(map.get(), s, &plan_parse, plan_resolution, &v));
        json += std::string(plan_all ? "  " : "") + "{\"strategy\": \"" + names[i] + "\", \"x\": " +
                FormatNumber(v.x) + ", \"y\": " + FormatNumber(v.y) + ", \"theta\": " + FormatNumber(v.theta) + "}";
        json += plan_all ? (i + 1 < names.size() ? ",\n" : "\n") : "\n";
      }
      if (plan_all) json += "]\n";
      Emit(json, plan_json);
      if (!plan_svg.empty()) {
        Check(lmd_plan_write_svg(map.get(), strategies.data(), strategies.size(), &plan_parse, plan_resolution,
                                 plan_svg.c_str()));
      }
    } else if (build->parsed()) {
      build_opts.strategy = StrategyFromName(build_strategy);
      build_opts.rotations = build_no_rotations ? 0 : 1;
      lmd_index* raw = nullptr;
      Check(lmd_index_create(&build_opts, &raw));
      std::unique_ptr<lmd_index, IndexDeleter> idx(raw);
      std::vector<std::string> files;
      for (const auto& entry : std::filesystem::directory_iterator(build_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".map") files.push_back(entry.path().string());
      }
      std::sort(files.begin(), files.end());
      for (const std::string& f : files) {
        MapPtr map = LoadMap(f);
        Check(lmd_index_add_map(idx.get(), map.get()));
      }
      Check(lmd_index_save(idx.get(), build_out.c_str()));
      std::cerr << "indexed " << lmd_index_doc_count(idx.get()) << " maps\n";
    } else if (query->parsed()) {
      lmd_index* raw = nullptr;
      Check(lmd_index_load(query_index.c_str(), &raw));
      std::unique_ptr<lmd_index, IndexDeleter> idx(raw);
      MapPtr map = LoadMap(query_map);
      lmd_result* rraw = nullptr;
      Check(lmd_index_query_map(idx.get(), map.get(), query_top, query_bow ? 1 : 0, &rraw));
      std::unique_ptr<lmd_result, ResultDeleter> result(rraw);
      char* json = nullptr;
      Check(lmd_result_to_json(result.get(), &json));
      Emit(Take(json), query_json);
    } else if (eval->parsed()) {
      eval_opts.methods = eval_methods.c_str();
      lmd_report* raw = nullptr;
      if (eval_world == "synth") {
        Check(lmd_eval_run(&eval_opts, &raw));
      } else {
        Check(lmd_eval_run_maps(eval_world.c_str(), &eval_opts, &raw));
      }
      std::unique_ptr<lmd_report, ReportDeleter> report(raw);
      char* json = nullptr;
      Check(lmd_report_to_json(report.get(), &json));
      const std::string json_text = Take(json);
      char* csv = nullptr;
      Check(lmd_report_to_csv(report.get(), &csv));
      const std::string csv_text = Take(csv);
      if (!eval_report.empty()) Emit(json_text, eval_report);
      if (!eval_csv.empty()) Emit(csv_text, eval_csv);
      if (eval_report.empty() && eval_csv.empty()) Emit(csv_text, "");
    } else if (synth->parsed()) {
      std::size_t count = 0;
      Check(lmd_synth_write(synth_seed, synth_rooms, synth_clutter, synth_drop, synth_dir.c_str(), &count));
      std::cerr << "wrote " << count << " maps\n";
    } else if (window->parsed()) {
      std::size_t count = 0;
      Check(lmd_log_window(window_log.c_str(), window_carmen ? 1 : 0, window_length, window_stride,
                           window_dir.c_str(), &count));
      std::cerr << "wrote " << count << " maps\n";
    } else if (grid->parsed()) {
      MapPtr map = LoadMap(grid_map);
      Check(lmd_map_write_pgm(map.get(), grid_resolution, grid_pgm.c_str()));
    } else if (describe->parsed()) {
      MapPtr map = LoadMap(describe_map);
      char* csv = nullptr;
      Check(lmd_map_describe_csv(map.get(), describe_spacing, &csv));
      Emit(Take(csv), describe_csv);
    } else if (match->parsed()) {
      match_opts.strategy = StrategyFromName(match_strategy);
      MapPtr q = LoadMap(match_query);
      MapPtr d = LoadMap(match_db);
      std::size_t count = 0;
      Check(lmd_match_write_svg(q.get(), d.get(), &match_opts, match_svg.c_str(), &count));
      std::cout << "{\"matches\": " << count << "}\n";
    }
  } catch (const Failure& f) {
    std::cerr << "lmd: " << (f.message.empty() ? std::string(lmd_status_name(f.status)) : f.message) << "\n";
    return static_cast<int>(f.status) == 0 ? 1 : static_cast<int>(f.status);
  } catch (const std::exception& e) {
    std::cerr << "lmd: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
