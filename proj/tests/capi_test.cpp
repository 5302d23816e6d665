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
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace {

// Outline of two rooms side by side plus the shared wall, every 5 cm.
std::vector<double> TwoRooms(double w, double h, double split, double dx = 0.0, double dy = 0.0) {
  std::vector<double> xy;
  const auto seg = [&](double ax, double ay, double bx, double by) {
    const int n = static_cast<int>(std::lround(std::hypot(bx - ax, by - ay) / 0.05));
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / n;
      xy.push_back(ax + t * (bx - ax) + dx);
      xy.push_back(ay + t * (by - ay) + dy);
    }
  };
  seg(0, 0, w, 0);
  seg(w, 0, w, h);
  seg(w, h, 0, h);
  seg(0, h, 0, 0);
  seg(split, 0.05, split, h - 0.05);
  return xy;
}

struct MapPtr {
  lmd_map* p = nullptr;
  ~MapPtr() { lmd_map_free(p); }
};

lmd_map* Make(const char* id, const std::vector<double>& xy) {
  lmd_map* m = nullptr;
  EXPECT_EQ(lmd_map_from_points(id, xy.data(), xy.size() / 2, &m), LMD_OK);
  return m;
}

std::filesystem::path Scratch(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path(::testing::TempDir()) / "lmd_capi";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(CApiTest, VersionAndStatusNames) {
  ASSERT_NE(lmd_version(), nullptr);
  EXPECT_GT(std::strlen(lmd_version()), 0u);
  EXPECT_STREQ(lmd_status_name(LMD_OK), "OK");
  EXPECT_STREQ(lmd_status_name(LMD_ERR_DUPLICATE_MAP), "DuplicateMap");
  EXPECT_STREQ(lmd_status_name(LMD_ERR_INTERNAL), "Internal");
}

TEST(CApiTest, NullArgumentsAreRejected) {
  lmd_map* m = nullptr;
  EXPECT_EQ(lmd_map_from_points("x", nullptr, 3, &m), LMD_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(m, nullptr);
  EXPECT_GT(std::strlen(lmd_last_error()), 0u);
  EXPECT_EQ(lmd_map_load(nullptr, &m), LMD_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(lmd_index_create(nullptr, nullptr), LMD_ERR_INVALID_ARGUMENT);
  lmd_map_free(nullptr);
  lmd_index_free(nullptr);
  lmd_result_free(nullptr);
  lmd_parse_free(nullptr);
  lmd_report_free(nullptr);
  lmd_string_free(nullptr);
}

TEST(CApiTest, MissingFileIsIoError) {
  lmd_map* m = nullptr;
  EXPECT_EQ(lmd_map_load("/nonexistent/dir/none.map", &m), LMD_ERR_IO);
  EXPECT_EQ(m, nullptr);
}

TEST(CApiTest, ParseTwoRooms) {
  MapPtr map{Make("two", TwoRooms(8.0, 4.0, 3.0))};
  ASSERT_NE(map.p, nullptr);
  EXPECT_STREQ(lmd_map_id(map.p), "two");
  lmd_parse_options opt;
  lmd_parse_options_default(&opt);
  EXPECT_EQ(opt.hypotheses, 100);
  EXPECT_EQ(opt.rule_steps, 16);
  EXPECT_EQ(opt.split_hypotheses, 20);
  EXPECT_DOUBLE_EQ(opt.epsilon, 0.1);
  lmd_parse* parse = nullptr;
  ASSERT_EQ(lmd_map_parse(map.p, &opt, &parse), LMD_OK);
  EXPECT_GE(lmd_parse_score(parse), 0.95);
  const size_t walls = lmd_parse_wall_count(parse);
  EXPECT_GT(walls, 0u);
  double w[4];
  EXPECT_EQ(lmd_parse_wall(parse, 0, w), LMD_OK);
  EXPECT_EQ(lmd_parse_wall(parse, walls, w), LMD_ERR_INVALID_ARGUMENT);
  char* json = nullptr;
  ASSERT_EQ(lmd_parse_to_json(parse, &json), LMD_OK);
  EXPECT_NE(std::string(json).find("\"walls\""), std::string::npos);
  lmd_string_free(json);
  lmd_parse_free(parse);
}

TEST(CApiTest, DegenerateMapParse) {
  const std::vector<double> one = {1.0, 2.0};
  MapPtr map{Make("one", one)};
  lmd_parse_options opt;
  lmd_parse_options_default(&opt);
  lmd_parse* parse = nullptr;
  EXPECT_EQ(lmd_map_parse(map.p, &opt, &parse), LMD_ERR_DEGENERATE_MAP);
  EXPECT_EQ(parse, nullptr);
}

TEST(CApiTest, PlanIsStrict) {
  MapPtr map{Make("two", TwoRooms(8.0, 4.0, 3.0))};
  lmd_parse_options opt;
  lmd_parse_options_default(&opt);
  opt.hypotheses = 20;
  for (lmd_strategy s : {LMD_S1, LMD_S2, LMD_S3, LMD_S4, LMD_S5}) {
    lmd_viewpoint vp{};
    // Points-only maps have no sensor poses, so nothing is carved free.
    const lmd_status st = lmd_plan(map.p, s, &opt, 0.1, &vp);
    EXPECT_TRUE(st == LMD_ERR_NO_FREE_SPACE || st == LMD_ERR_NO_STRUCTURE) << lmd_status_name(st);
  }
  lmd_viewpoint vp{};
  EXPECT_EQ(lmd_plan(map.p, LMD_BOW, &opt, 0.1, &vp), LMD_ERR_INVALID_ARGUMENT);
}

TEST(CApiTest, IndexQueryRanksTruthFirstAndRoundTrips) {
  lmd_index_options opt;
  lmd_index_options_default(&opt);
  EXPECT_EQ(opt.strategy, LMD_S5);
  EXPECT_DOUBLE_EQ(opt.pose_threshold, 3.0);
  opt.parse.hypotheses = 20;
  lmd_index* index = nullptr;
  ASSERT_EQ(lmd_index_create(&opt, &index), LMD_OK);

  MapPtr a{Make("a", TwoRooms(8.0, 4.0, 3.0))};
  MapPtr b{Make("b", TwoRooms(11.0, 5.0, 7.5))};
  MapPtr c{Make("c", TwoRooms(6.0, 6.0, 2.0))};
  MapPtr q{Make("q", TwoRooms(8.0, 4.0, 3.0, 20.0, -4.0))};
  EXPECT_EQ(lmd_index_add_map(index, a.p), LMD_OK);
  EXPECT_EQ(lmd_index_add_map(index, b.p), LMD_OK);
  EXPECT_EQ(lmd_index_add_map(index, c.p), LMD_OK);
  EXPECT_EQ(lmd_index_add_map(index, a.p), LMD_ERR_DUPLICATE_MAP);
  EXPECT_NE(std::string(lmd_last_error()).find("a"), std::string::npos);
  EXPECT_EQ(lmd_index_doc_count(index), 3u);

  lmd_result* result = nullptr;
  ASSERT_EQ(lmd_index_query_map(index, q.p, 0, 0, &result), LMD_OK);
  ASSERT_EQ(lmd_result_size(result), 3u);
  EXPECT_STREQ(lmd_result_map_id(result, 0), "a");
  EXPECT_GE(lmd_result_score(result, 0), lmd_result_score(result, 1));
  EXPECT_EQ(lmd_result_map_id(result, 3), nullptr);
  char* json = nullptr;
  ASSERT_EQ(lmd_result_to_json(result, &json), LMD_OK);
  const std::string first_json = json;
  lmd_string_free(json);

  const std::string path = Scratch("round.lmdx").string();
  ASSERT_EQ(lmd_index_save(index, path.c_str()), LMD_OK);
  lmd_index* loaded = nullptr;
  ASSERT_EQ(lmd_index_load(path.c_str(), &loaded), LMD_OK);
  EXPECT_EQ(lmd_index_doc_count(loaded), 3u);
  lmd_result* again = nullptr;
  ASSERT_EQ(lmd_index_query_map(loaded, q.p, 0, 0, &again), LMD_OK);
  ASSERT_EQ(lmd_result_to_json(again, &json), LMD_OK);
  EXPECT_EQ(std::string(json), first_json);
  lmd_string_free(json);

  lmd_result* top = nullptr;
  ASSERT_EQ(lmd_index_query_map(loaded, q.p, 1, 1, &top), LMD_OK);
  EXPECT_EQ(lmd_result_size(top), 1u);

  lmd_result_free(top);
  lmd_result_free(again);
  lmd_result_free(result);
  lmd_index_free(loaded);
  lmd_index_free(index);
}

TEST(CApiTest, EmptyIndexAndBadFile) {
  lmd_index_options opt;
  lmd_index_options_default(&opt);
  lmd_index* index = nullptr;
  ASSERT_EQ(lmd_index_create(&opt, &index), LMD_OK);
  MapPtr q{Make("q", TwoRooms(8.0, 4.0, 3.0))};
  lmd_result* result = nullptr;
  EXPECT_EQ(lmd_index_query_map(index, q.p, 0, 0, &result), LMD_ERR_EMPTY_INDEX);
  lmd_index_free(index);

  const std::string path = Scratch("junk.lmdx").string();
  std::ofstream(path) << "not an index";
  lmd_index* loaded = nullptr;
  EXPECT_EQ(lmd_index_load(path.c_str(), &loaded), LMD_ERR_FORMAT);
  EXPECT_EQ(loaded, nullptr);
}

TEST(CApiTest, MapSaveLoadAndArtifacts) {
  MapPtr map{Make("saved", TwoRooms(5.0, 3.0, 2.0))};
  const std::string path = Scratch("saved.map").string();
  ASSERT_EQ(lmd_map_save(map.p, path.c_str()), LMD_OK);
  MapPtr back;
  ASSERT_EQ(lmd_map_load(path.c_str(), &back.p), LMD_OK);
  EXPECT_EQ(lmd_map_point_count(back.p), lmd_map_point_count(map.p));
  EXPECT_STREQ(lmd_map_id(back.p), "saved");

  const std::string pgm = Scratch("saved.pgm").string();
  ASSERT_EQ(lmd_map_write_pgm(map.p, 0.1, pgm.c_str()), LMD_OK);
  EXPECT_TRUE(std::filesystem::exists(pgm));
  EXPECT_TRUE(std::filesystem::exists(pgm + ".info"));

  char* csv = nullptr;
  ASSERT_EQ(lmd_map_describe_csv(map.p, 0.3, &csv), LMD_OK);
  EXPECT_GT(std::strlen(csv), 0u);
  lmd_string_free(csv);
}

TEST(CApiTest, SynthAndEvalOverDirectory) {
  const std::filesystem::path dir = Scratch("synth");
  std::filesystem::remove_all(dir);
  size_t count = 0;
  ASSERT_EQ(lmd_synth_write(3, 2, 0.0, 0.0, dir.string().c_str(), &count), LMD_OK) << lmd_last_error();
  EXPECT_GT(count, 20u);
  EXPECT_TRUE(std::filesystem::exists(dir / "world.log"));

  lmd_eval_options opt;
  lmd_eval_options_default(&opt);
  opt.methods = "bow,s5";
  opt.db_size = 10;
  lmd_report* report = nullptr;
  ASSERT_EQ(lmd_eval_run_maps(dir.string().c_str(), &opt, &report), LMD_OK) << lmd_last_error();
  EXPECT_GT(lmd_report_mean_anr(report, "bow"), 0.0);
  EXPECT_LE(lmd_report_mean_anr(report, "s5"), 1.0);
  EXPECT_LT(lmd_report_mean_anr(report, "s3"), 0.0);
  char* csv = nullptr;
  ASSERT_EQ(lmd_report_to_csv(report, &csv), LMD_OK);
  EXPECT_EQ(std::string(csv).rfind("dataset,method,queries,anr", 0), 0u);
  lmd_string_free(csv);
  lmd_report_free(report);

  opt.db_size = 100000;
  EXPECT_EQ(lmd_eval_run_maps(dir.string().c_str(), &opt, &report), LMD_ERR_INSUFFICIENT_DISTRACTORS);
}

}  // namespace
