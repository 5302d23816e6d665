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


/* C interface to the local map descriptor library. All handles are opaque;
 * every fallible call returns an lmd_status and, on failure, leaves a
 * message retrievable with lmd_last_error() on the calling thread. Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with lmd_string_free(). */

#ifndef LMD_H_
#define LMD_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LMD_API __declspec(dllexport)
#else
#define LMD_API __attribute__((visibility("default")))
#endif

typedef enum lmd_status {
  LMD_OK = 0,
  LMD_ERR_INVALID_ARGUMENT = 1,
  LMD_ERR_IO = 2,
  LMD_ERR_FORMAT = 3,
  LMD_ERR_EMPTY_LOG = 4,
  LMD_ERR_DEGENERATE_MAP = 5,
  LMD_ERR_EMPTY_DESCRIPTOR = 6,
  LMD_ERR_NO_STRUCTURE = 7,
  LMD_ERR_NO_FREE_SPACE = 8,
  LMD_ERR_NO_WALLS = 9,
  LMD_ERR_DUPLICATE_MAP = 10,
  LMD_ERR_EMPTY_INDEX = 11,
  LMD_ERR_TRUTH_NOT_RANKED = 12,
  LMD_ERR_INSUFFICIENT_DISTRACTORS = 13,
  LMD_ERR_INTERNAL = 99
} lmd_status;

typedef enum lmd_strategy {
  LMD_BOW = 0, /* no viewpoint; only valid where noted */
  LMD_S1 = 1,
  LMD_S2 = 2,
  LMD_S3 = 3,
  LMD_S4 = 4,
  LMD_S5 = 5
} lmd_strategy;

typedef struct lmd_map lmd_map;
typedef struct lmd_parse lmd_parse;
typedef struct lmd_index lmd_index;
typedef struct lmd_result lmd_result;
typedef struct lmd_report lmd_report;

LMD_API const char* lmd_version(void);
LMD_API const char* lmd_status_name(lmd_status status);
LMD_API const char* lmd_last_error(void);
LMD_API void lmd_string_free(char* s);

/* ---- maps ---- */

LMD_API lmd_status lmd_map_load(const char* path, lmd_map** out);
/* xy holds n interleaved (x, y) pairs. */
LMD_API lmd_status lmd_map_from_points(const char* id, const double* xy, size_t n, lmd_map** out);
LMD_API lmd_status lmd_map_save(const lmd_map* map, const char* path);
LMD_API void lmd_map_free(lmd_map* map);
LMD_API size_t lmd_map_point_count(const lmd_map* map);
LMD_API const char* lmd_map_id(const lmd_map* map);
/* Occupancy grid as PGM plus a "<path>.info" sidecar. */
LMD_API lmd_status lmd_map_write_pgm(const lmd_map* map, double resolution, const char* path);
/* Polestar descriptors of every keypoint as CSV. */
LMD_API lmd_status lmd_map_describe_csv(const lmd_map* map, double keypoint_spacing, char** csv);

/* Cuts a scan log (neutral SCAN format, or carmen FLASER when carmen != 0)
 * into local maps written as <out_dir>/<id>.map. */
LMD_API lmd_status lmd_log_window(const char* log_path, int carmen, double window, double stride,
                                  const char* out_dir, size_t* map_count);

/* ---- parsing ---- */

typedef struct lmd_parse_options {
  int hypotheses;       /* K */
  int rule_steps;       /* N */
  int split_hypotheses; /* H */
  double epsilon;       /* meters */
  uint64_t seed;
} lmd_parse_options;

LMD_API void lmd_parse_options_default(lmd_parse_options* options);
LMD_API lmd_status lmd_map_parse(const lmd_map* map, const lmd_parse_options* options, lmd_parse** out);
LMD_API double lmd_parse_score(const lmd_parse* parse);
LMD_API double lmd_parse_theta(const lmd_parse* parse);
LMD_API size_t lmd_parse_wall_count(const lmd_parse* parse);
/* xyxy receives (ax, ay, bx, by). */
LMD_API lmd_status lmd_parse_wall(const lmd_parse* parse, size_t i, double xyxy[4]);
LMD_API lmd_status lmd_parse_to_json(const lmd_parse* parse, char** json);
LMD_API lmd_status lmd_parse_write_svg(const lmd_parse* parse, const lmd_map* map, const char* path);
LMD_API void lmd_parse_free(lmd_parse* parse);

/* ---- viewpoint planning ---- */

typedef struct lmd_viewpoint {
  double x;
  double y;
  double theta;
  int fallback; /* nonzero when the map centroid was used */
} lmd_viewpoint;

/* Strict planning: fails with NO_STRUCTURE / NO_FREE_SPACE / NO_WALLS. */
LMD_API lmd_status lmd_plan(const lmd_map* map, lmd_strategy strategy, const lmd_parse_options* parse,
                            double resolution, lmd_viewpoint* out);
/* SVG with the grid, the viewpoints of the given strategies and, when S5 is
 * among them, its box in red. */
LMD_API lmd_status lmd_plan_write_svg(const lmd_map* map, const lmd_strategy* strategies, size_t count,
                                      const lmd_parse_options* parse, double resolution, const char* path);

/* ---- index ---- */

typedef struct lmd_index_options {
  lmd_strategy strategy;  /* LMD_BOW builds a bag-of-words index */
  double pose_threshold;  /* D_xy meters; negative disables the filter */
  int rotations;          /* score quarter-turn rotations of queries */
  double resolution;      /* occupancy grid cell size */
  double keypoint_spacing;
  lmd_parse_options parse;
} lmd_index_options;

LMD_API void lmd_index_options_default(lmd_index_options* options);
LMD_API lmd_status lmd_index_create(const lmd_index_options* options, lmd_index** out);
LMD_API lmd_status lmd_index_add_map(lmd_index* index, const lmd_map* map);
LMD_API lmd_status lmd_index_save(const lmd_index* index, const char* path);
LMD_API lmd_status lmd_index_load(const char* path, lmd_index** out);
LMD_API size_t lmd_index_doc_count(const lmd_index* index);
/* top_k == 0 ranks every map; bow != 0 skips the pose filter. */
LMD_API lmd_status lmd_index_query_map(const lmd_index* index, const lmd_map* query, size_t top_k, int bow,
                                       lmd_result** out);
LMD_API void lmd_index_free(lmd_index* index);

LMD_API size_t lmd_result_size(const lmd_result* result);
LMD_API const char* lmd_result_map_id(const lmd_result* result, size_t i);
LMD_API uint32_t lmd_result_score(const lmd_result* result, size_t i);
LMD_API lmd_status lmd_result_to_json(const lmd_result* result, char** json);
LMD_API void lmd_result_free(lmd_result* result);

/* Matched visual words between two maps drawn over both maps in their
 * common frame. */
LMD_API lmd_status lmd_match_write_svg(const lmd_map* query, const lmd_map* database,
                                       const lmd_index_options* options, const char* path, size_t* match_count);

/* ---- evaluation ---- */

typedef struct lmd_eval_options {
  uint64_t seed;
  size_t seed_count;   /* seeds seed, seed+1, ... */
  const char* methods; /* comma separated: bow,s1,...,s5 */
  size_t db_size;
  int worlds;
  int distractor_worlds;
  int rooms;
  double clutter;
  double drop;
  double r_overlap;
  double min_separation;
} lmd_eval_options;

LMD_API void lmd_eval_options_default(lmd_eval_options* options);
LMD_API lmd_status lmd_eval_run(const lmd_eval_options* options, lmd_report** out);
/* Experiment over the *.map files of a directory; maps of one source must
 * share a frame through their origins. */
LMD_API lmd_status lmd_eval_run_maps(const char* map_dir, const lmd_eval_options* options, lmd_report** out);
LMD_API lmd_status lmd_report_to_json(const lmd_report* report, char** json);
LMD_API lmd_status lmd_report_to_csv(const lmd_report* report, char** csv);
/* Mean ANR of one method over all datasets; negative if absent. */
LMD_API double lmd_report_mean_anr(const lmd_report* report, const char* method);
LMD_API void lmd_report_free(lmd_report* report);

/* Writes the local maps of one synthetic world to out_dir and its scan log
 * to out_dir/world.log. */
LMD_API lmd_status lmd_synth_write(uint64_t seed, int rooms, double clutter, double drop, const char* out_dir,
                                   size_t* map_count);

#ifdef __cplusplus
}
#endif

#endif /* LMD_H_ */
