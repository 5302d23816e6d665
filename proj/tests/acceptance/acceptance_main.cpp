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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Every tolerance is a named constant below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/lmd_index.hpp"
#include "core/manhattan_parser.hpp"
#include "core/map_model.hpp"
#include "core/polestar.hpp"
#include "core/random.hpp"
#include "core/viewpoint_planner.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace lmd {
namespace {

// C1
constexpr int kC1Databases = 20;
constexpr std::size_t kC1MapsPerDb = 100;
constexpr int kC1QueriesPerDb = 3;
constexpr double kC1MaxSeconds = 30.0;
// C2 / C3
constexpr std::uint64_t kC2FirstSeed = 1;
constexpr int kC2Seeds = 5;
constexpr std::size_t kC2DbSize = 100;
constexpr double kC2Clutter = 0.2;
constexpr double kC2Drop = 0.2;
constexpr std::size_t kC2MinPairs = 30;
constexpr int kC2MinBeatingBow = 2;
constexpr double kC2MaxSeconds = 300.0;
constexpr double kC3WithinMeters = 5.0;
constexpr double kC3MinFraction = 0.80;
// C4
constexpr int kC4Runs = 100;
constexpr double kC4MinScore = 0.95;
constexpr double kC4MinPassFraction = 0.95;
constexpr int kC4OracleInstances = 10;
constexpr double kC4OracleTolerance = 0.02;
constexpr double kC4Lattice = 0.1;
constexpr double kC4MaxSeconds = 120.0;
// C5
constexpr int kC5Grids = 100;
constexpr std::size_t kC5MaxSide = 100;
constexpr double kC5S5Tolerance = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

// ------------------------------------------------------------------ C1

LocalMapDescriptor RandomWords(Rng& rng, std::string id, const std::vector<std::uint32_t>& codes) {
  LocalMapDescriptor d;
  d.map_id = std::move(id);
  const std::size_t n = 50 + rng.Index(200);
  for (std::size_t i = 0; i < n; ++i) {
    d.words.push_back({static_cast<std::int32_t>(rng.Index(161)) - 80, static_cast<std::int32_t>(rng.Index(161)) - 80,
                       codes[rng.Index(codes.size())]});
  }
  return d;
}

Outcome C1IndexMatchesOracle() {
  const auto t0 = Clock::now();
  std::size_t checked = 0;
  std::size_t mismatched = 0;
  for (int db = 0; db < kC1Databases; ++db) {
    Rng rng(MixSeed(1001, static_cast<std::uint64_t>(db)));
    IndexConfig cfg;
    cfg.pose_threshold = db % 5 == 4 ? std::numeric_limits<double>::infinity() : kDefaultPoseThreshold;
    cfg.manhattan_rotations = db % 2 == 0;
    std::vector<std::uint32_t> codes(64);
    for (auto& c : codes) c = static_cast<std::uint32_t>(rng.Index(1u << cfg.rings));
    InvertedIndex index(cfg);
    std::vector<LocalMapDescriptor> maps;
    for (std::size_t m = 0; m < kC1MapsPerDb; ++m) {
      maps.push_back(RandomWords(rng, "db" + std::to_string(db) + "-" + std::to_string(rng.Index(100000)) + "-" +
                                          std::to_string(m),
                                 codes));
      index.Insert(maps.back());
    }
    for (int q = 0; q < kC1QueriesPerDb; ++q) {
      // A jittered copy of a database map with a third of its words replaced.
      LocalMapDescriptor query = maps[rng.Index(maps.size())];
      query.map_id = "query";
      for (VisualWord& w : query.words) {
        w.wx += static_cast<std::int32_t>(rng.Index(61)) - 30;
        w.wy += static_cast<std::int32_t>(rng.Index(61)) - 30;
        if (rng.Bernoulli(0.33)) w.wa = codes[rng.Index(codes.size())];
      }
      for (DescriptorMode mode : {DescriptorMode::kLmd, DescriptorMode::kBow}) {
        ++checked;
        if (index.Query(query, 0, mode).ranking != testing::OracleRanking(query, maps, cfg, mode)) ++mismatched;
      }
    }
  }
  const double secs = Seconds(t0);
  Outcome out;
  out.pass = mismatched == 0 && secs < kC1MaxSeconds;
  out.detail = std::to_string(checked - mismatched) + "/" + std::to_string(checked) + " rankings equal over " +
               std::to_string(kC1Databases) + " dbs x " + std::to_string(kC1MapsPerDb) + " maps, lmd+bow; " +
               Fmt("%.1f s", secs) + " (limit " + Fmt("%.0f s", kC1MaxSeconds) + ")";
  return out;
}

// ---------------------------------------------------------------- C2/C3

struct BenchmarkRun {
  std::vector<ExperimentReport> reports;
  double seconds = 0.0;
};

BenchmarkRun RunBenchmark() {
  BenchmarkConfig cfg;
  cfg.seeds.clear();
  for (int i = 0; i < kC2Seeds; ++i) cfg.seeds.push_back(kC2FirstSeed + static_cast<std::uint64_t>(i));
  cfg.synth.clutter = kC2Clutter;
  cfg.synth.drop = kC2Drop;
  cfg.eval.db_size = kC2DbSize;
  const auto t0 = Clock::now();
  BenchmarkRun run;
  run.reports = RunSynthBenchmark(cfg);
  run.seconds = Seconds(t0);
  return run;
}

Outcome C2LmdBeatsBow(const BenchmarkRun& run) {
  Outcome out;
  std::size_t min_pairs = std::numeric_limits<std::size_t>::max();
  std::size_t queries = 0;
  for (const ExperimentReport& r : run.reports) {
    min_pairs = std::min(min_pairs, r.relevant_pairs);
    queries += r.tasks.size();
  }
  const auto mean = MeanAnr(run.reports);
  double bow = -1.0;
  for (const auto& [m, v] : mean) {
    if (m == "bow") bow = v;
  }
  int beating = 0;
  std::ostringstream anr;
  for (const auto& [m, v] : mean) {
    anr << " " << m << "=" << Fmt("%.4f", v);
    if ((m == "s1" || m == "s4" || m == "s5") && bow >= 0.0 && v < bow) ++beating;
  }
  out.pass = bow >= 0.0 && beating >= kC2MinBeatingBow && min_pairs >= kC2MinPairs &&
             run.seconds < kC2MaxSeconds;
  out.detail = "mean ANR" + anr.str() + "; " + std::to_string(beating) + " of {s1,s4,s5} below bow (need " +
               std::to_string(kC2MinBeatingBow) + "); min relevant pairs/seed " + std::to_string(min_pairs) +
               " (need " + std::to_string(kC2MinPairs) + "), " + std::to_string(queries) + " queries over " +
               std::to_string(run.reports.size()) + " seeds; " + Fmt("%.1f s", run.seconds) + " (limit " +
               Fmt("%.0f s", kC2MaxSeconds) + ")";
  return out;
}

Outcome C3ViewpointRepeatability(const BenchmarkRun& run) {
  std::vector<double> errors;
  for (const ExperimentReport& r : run.reports) {
    for (const MethodSummary& m : r.methods) {
      if (m.method == "s1") errors.insert(errors.end(), m.viewpoint_errors.begin(), m.viewpoint_errors.end());
    }
  }
  const auto within = static_cast<std::size_t>(
      std::count_if(errors.begin(), errors.end(), [](double e) { return e <= kC3WithinMeters; }));
  const double frac = errors.empty() ? 0.0 : static_cast<double>(within) / static_cast<double>(errors.size());
  const auto hist = ErrorHistogram(errors);
  std::ostringstream h;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    h << (i == 0 ? "" : " ") << (i + 1 == hist.size() ? ">=" + std::to_string(i) : std::to_string(i)) << "m:"
      << hist[i];
  }
  Outcome out;
  out.pass = !errors.empty() && frac >= kC3MinFraction;
  out.detail = Fmt("%.3f", frac) + " of " + std::to_string(errors.size()) + " s1 viewpoint errors <= " +
               Fmt("%.0f m", kC3WithinMeters) + " (need " + Fmt("%.2f", kC3MinFraction) + "); histogram [" +
               h.str() + "]";
  return out;
}

// ------------------------------------------------------------------ C4

Outcome C4TwoRoomParse() {
  const auto t0 = Clock::now();
  ParseConfig cfg;
  cfg.hypotheses = 100;
  cfg.rule_steps = 16;
  cfg.split_hypotheses = 20;
  int passing = 0;
  double worst_gap = 0.0;
  double min_score = 1.0;
  for (int run = 0; run < kC4Runs; ++run) {
    const testing::TwoRoomMap two = testing::MakeTwoRoomMap(10000 + static_cast<std::uint64_t>(run));
    cfg.seed = static_cast<std::uint64_t>(run);
    const double score = ParseMap(two.map, cfg).score;
    min_score = std::min(min_score, score);
    if (score >= kC4MinScore) ++passing;
    if (run < kC4OracleInstances) {
      const double best = testing::LatticeParseOracle(two.map, cfg.epsilon, kC4Lattice).BestScore();
      worst_gap = std::max(worst_gap, std::abs(score - best));
    }
  }
  const double secs = Seconds(t0);
  const double frac = static_cast<double>(passing) / kC4Runs;
  Outcome out;
  out.pass = frac >= kC4MinPassFraction && worst_gap <= kC4OracleTolerance && secs < kC4MaxSeconds;
  out.detail = std::to_string(passing) + "/" + std::to_string(kC4Runs) + " runs score >= " +
               Fmt("%.2f", kC4MinScore) + " (need " + Fmt("%.2f", kC4MinPassFraction) + ", min " +
               Fmt("%.4f", min_score) + "); max |score - lattice optimum| " + Fmt("%.4f", worst_gap) + " on " +
               std::to_string(kC4OracleInstances) + " instances (limit " + Fmt("%.2f", kC4OracleTolerance) + "); " +
               Fmt("%.1f s", secs) + " (limit " + Fmt("%.0f s", kC4MaxSeconds) + ")";
  return out;
}

// ------------------------------------------------------------------ C5

std::size_t IndexAt(const OccupancyGrid& grid, Point2 p) { return grid.CellAt(p).value_or(grid.size()); }

Outcome C5PlannersMatchOracles() {
  Rng rng(5005);
  int failures = 0;
  std::size_t largest = 0;
  for (int g = 0; g < kC5Grids; ++g) {
    testing::Scene s = testing::RandomScene(rng, kC5MaxSide);
    if (g == 0) {
      // Make sure the largest size is covered.
      Rng fixed(77);
      do {
        s = testing::RandomScene(fixed, kC5MaxSide);
      } while (s.grid.rows() != kC5MaxSide || s.grid.cols() != kC5MaxSide);
    }
    largest = std::max(largest, s.grid.size());
    bool ok = IndexAt(s.grid, PlanS1(s.cells, s.grid).position) == testing::OracleS1(s.cells, s.grid);
    ok = ok && IndexAt(s.grid, PlanS2(s.cells, s.grid).position) == testing::OracleS2(s.cells, s.grid);
    ok = ok && IndexAt(s.grid, PlanS3(s.cells, s.grid).position) == testing::OracleS3(s.cells, s.grid);
    ok = ok && Distance(PlanS5(s.cells, s.grid, 0.0).position, testing::OracleS5(s.cells, s.grid)) <= kC5S5Tolerance;

    // S4: random axis-aligned walls whose cells are mostly occupied.
    const double w = static_cast<double>(s.grid.cols()) * s.grid.resolution();
    const double h = static_cast<double>(s.grid.rows()) * s.grid.resolution();
    std::vector<WallSegment> walls;
    const std::size_t n_walls = 1 + rng.Index(14);
    for (std::size_t k = 0; k < n_walls; ++k) {
      const Point2 a{rng.Uniform(0.0, w), rng.Uniform(0.0, h)};
      const Point2 b = rng.Bernoulli(0.5) ? Point2{rng.Uniform(0.0, w), a.y} : Point2{a.x, rng.Uniform(0.0, h)};
      walls.push_back({a, b, k});
    }
    OccupancyGrid labelled = s.grid;
    for (std::size_t i : WallCells(labelled, walls)) {
      if (rng.Bernoulli(0.8)) labelled.Set(i, CellLabel::kOccupied);
    }
    labelled.Set(WallCells(labelled, walls).front(), CellLabel::kOccupied);
    bool has_free = false;
    for (std::size_t i = 0; i < labelled.size(); ++i) has_free = has_free || labelled.At(i) == CellLabel::kFree;
    if (!has_free) labelled.Set(labelled.size() - 1, CellLabel::kFree);
    const CellSets cells = DeriveCellSets(labelled, walls);
    try {
      ok = ok && IndexAt(labelled, PlanS4(cells, labelled, walls).position) == testing::OracleS4(labelled, walls);
    } catch (const Error& e) {
      ok = false;
    }
    if (!ok) ++failures;
  }
  Outcome out;
  out.pass = failures == 0;
  out.detail = std::to_string(kC5Grids - failures) + "/" + std::to_string(kC5Grids) +
               " random grids (largest " + std::to_string(largest) +
               " cells) with s1-s5 equal to exhaustive scans";
  return out;
}

// ------------------------------------------------------------------ C6

struct Tally {
  std::size_t checks = 0;
  std::vector<std::string> failed;

  void Check(bool ok, const std::string& what) {
    ++checks;
    if (!ok && std::find(failed.begin(), failed.end(), what) == failed.end()) failed.push_back(what);
  }
};

void PolestarInvariance(Tally& t) {
  Rng rng(601);
  const PolestarConfig pc;
  for (int trial = 0; trial < 20; ++trial) {
    const PointsetMap map = testing::RandomCloud(rng, 400, 4.0);
    const Pose2 motion{rng.Uniform(-50, 50), rng.Uniform(-50, 50), rng.Uniform(-3.0, 3.0)};
    PointsetMap moved = map;
    for (Point2& p : moved.points) p = motion.ToParent(p);
    for (int k = 0; k < 10; ++k) {
      const Point2 key = map.points[rng.Index(map.points.size())];
      const auto a = Polestar(map, key, pc.radii).counts;
      const auto b = Polestar(moved, motion.ToParent(key), pc.radii).counts;
      t.Check(a == b, "polestar rigid-motion invariance");
    }
  }
}

void ParserInvariants(Tally& t) {
  Rng rng(602);
  for (int trial = 0; trial < 15; ++trial) {
    PointsetMap map = testing::MakeTwoRoomMap(700 + static_cast<std::uint64_t>(trial)).map;
    for (int i = 0; i < 50; ++i) map.points.push_back({rng.Uniform(0.0, 6.0), rng.Uniform(0.0, 3.0)});
    for (Point2& p : map.points) p = Rotate(p, rng.Uniform(0.0, 6.0));
    ParseConfig cfg;
    cfg.hypotheses = 20;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const ParseResult r = ParseMap(map, cfg);
    const ParseResult again = ParseMap(map, cfg);
    t.Check(r.explained == again.explained && r.theta == again.theta, "parse determinism");
    t.Check(r.score >= 0.0 && r.score <= 1.0, "parse score in [0, 1]");
    t.Check(r.score == static_cast<double>(r.explained.size()) / static_cast<double>(map.points.size()),
            "parse score is the explained fraction");
    t.Check(r.theta >= 0.0 && r.theta < std::numbers::pi / 2.0, "theta folded into [0, pi/2)");
    for (const WallSegment& w : r.walls) {
      const Point2 d = Rotate(w.b - w.a, -r.theta);
      t.Check(std::min(std::abs(d.x), std::abs(d.y)) <= 1e-9 * (1.0 + Norm(d)), "walls axis-aligned in theta frame");
    }
    const Room box = ParseContext(map, r.theta, cfg.epsilon).Bounds();
    double area = 0.0;
    for (const Room& room : r.rooms) area += room.area();
    t.Check(std::abs(area - box.area()) <= 1e-9 * box.area(), "rooms partition the bounding box");
    ParseConfig more = cfg;
    more.hypotheses = 40;
    t.Check(ParseMap(map, more).score >= r.score, "more hypotheses never score lower");
  }
}

void PlannerInvariants(Tally& t) {
  Rng rng(603);
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t seed = rng.Next();
    Rng ra(seed);
    Rng rb(seed);
    const Point2 shift{rng.Uniform(-30.0, 30.0), rng.Uniform(-30.0, 30.0)};
    const testing::Scene a = testing::RandomScene(ra, 40);
    const testing::Scene b = testing::RandomScene(rb, 40, shift);
    const double theta = rng.Uniform(0.0, 1.5);
    const Viewpoint pa[] = {PlanS1(a.cells, a.grid), PlanS2(a.cells, a.grid), PlanS3(a.cells, a.grid),
                            PlanS5(a.cells, a.grid, theta)};
    const Viewpoint pb[] = {PlanS1(b.cells, b.grid), PlanS2(b.cells, b.grid), PlanS3(b.cells, b.grid),
                            PlanS5(b.cells, b.grid, theta)};
    for (int k = 0; k < 4; ++k) {
      t.Check(Distance(pa[k].position + shift, pb[k].position) <= 1e-9, "planner translation equivariance");
    }
    for (int k = 0; k < 3; ++k) {
      const auto idx = a.grid.CellAt(pa[k].position);
      t.Check(idx && std::binary_search(a.cells.unoccupied.begin(), a.cells.unoccupied.end(), *idx),
              "s1-s3 viewpoints are unoccupied cells");
    }
    t.Check(PlanS1(a.cells, a.grid).position == pa[0].position, "planner determinism");
  }
}

void IndexInvariants(Tally& t) {
  Rng rng(604);
  std::vector<std::uint32_t> codes(16);
  for (auto& c : codes) c = static_cast<std::uint32_t>(rng.Index(1024));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<LocalMapDescriptor> db;
    for (int m = 0; m < 20; ++m) db.push_back(RandomWords(rng, "m" + std::to_string(m), codes));
    const LocalMapDescriptor q = RandomWords(rng, "q", codes);
    std::vector<std::uint32_t> prev(db.size(), 0);
    for (double dxy : {0.0, 0.5, 1.0, 3.0, 8.0, std::numeric_limits<double>::infinity()}) {
      IndexConfig cfg;
      cfg.pose_threshold = dxy;
      InvertedIndex index(cfg);
      for (const auto& d : db) index.Insert(d);
      const auto lmd = index.Query(q, 0, DescriptorMode::kLmd);
      const auto bow = index.Query(q, 0, DescriptorMode::kBow);
      for (std::size_t i = 0; i < db.size(); ++i) {
        std::uint32_t sl = 0, sb = 0;
        for (const auto& r : lmd.ranking) sl = r.map_id == db[i].map_id ? r.score : sl;
        for (const auto& r : bow.ranking) sb = r.map_id == db[i].map_id ? r.score : sb;
        t.Check(sl >= prev[i], "score non-decreasing in D_xy");
        t.Check(sb >= sl, "bag-of-words score bounds lmd score");
        prev[i] = sl;
      }
      std::size_t words = 0;
      for (const auto& d : db) words += d.words.size();
      t.Check(index.posting_count() == words, "posting conservation");
      std::stringstream buf;
      index.Save(buf);
      const InvertedIndex back = InvertedIndex::Load(buf);
      t.Check(back.Query(q).ranking == index.Query(q).ranking, "index save/load preserves rankings");
    }
  }
}

void WindowInvariants(Tally& t) {
  Rng rng(605);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ScanLogEntry> log;
    double odom = 0.0;
    Pose2 pose;
    for (int i = 0; i < 60; ++i) {
      ScanLogEntry e;
      e.pose = pose;
      e.odom_distance = odom;
      for (int k = 0; k < 5; ++k) e.points.push_back({rng.Uniform(-3, 3), rng.Uniform(-3, 3)});
      log.push_back(e);
      const double step = rng.Uniform(0.1, 0.6);
      pose = pose.Compose({step, 0.0, rng.Uniform(-0.3, 0.3)});
      odom += step;
    }
    const auto maps = WindowLog(log, 5.0, 1.0, "inv");
    std::vector<char> covered(log.size(), 0);
    for (const PointsetMap& m : maps) {
      std::size_t p = 0;
      for (std::size_t i = 0; i < log.size(); ++i) {
        const double d = log[i].odom_distance;
        if (d < m.path_position - 1e-9 || d > m.path_position + 5.0 + 1e-9) continue;
        covered[i] = 1;
        for (const Point2& local : log[i].points) {
          const bool same = p < m.points.size() &&
                            Distance(m.origin.ToParent(m.points[p]), log[i].pose.ToParent(local)) <= 1e-9;
          t.Check(same, "window maps hold their scans in the first pose frame");
          ++p;
        }
      }
      t.Check(p == m.points.size(), "window maps hold exactly their scans");
    }
    // Scans up to the end of the last window all belong to some map.
    const double end = maps.back().path_position + 5.0;
    for (std::size_t i = 0; i < log.size(); ++i) {
      if (log[i].odom_distance <= end - 1e-9) t.Check(covered[i] != 0, "windows cover the log");
    }
  }
}

void OverlapInvariants(Tally& t) {
  Rng rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    PointsetMap a = testing::RandomCloud(rng, 200, 3.0, "a");
    PointsetMap b = testing::RandomCloud(rng, 200, 3.0, "b");
    b.origin = {rng.Uniform(-2, 2), rng.Uniform(-2, 2), rng.Uniform(-3, 3)};
    const double ab = SymmetricOverlap(a, b, 0.2);
    t.Check(ab == SymmetricOverlap(b, a, 0.2), "symmetric overlap is symmetric");
    t.Check(ab >= 0.0 && ab <= 1.0, "overlap in [0, 1]");
    t.Check(Overlap(a, a) == 1.0, "self overlap is one");
  }
}

Outcome C6Invariants() {
  Tally t;
  PolestarInvariance(t);
  ParserInvariants(t);
  PlannerInvariants(t);
  IndexInvariants(t);
  WindowInvariants(t);
  OverlapInvariants(t);
  Outcome out;
  out.pass = t.failed.empty();
  out.detail = std::to_string(t.checks) + " checks across polestar, parser, planner, index, windowing, overlap";
  for (const std::string& f : t.failed) out.detail += "; FAILED: " + f;
  return out;
}

// ------------------------------------------------------------------ C7

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int Run(const std::string& cmd) { return std::system(cmd.c_str()); }

Outcome C7CliDeterminism(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.detail = "no --cli given";
    return out;
  }
  const std::filesystem::path work = std::filesystem::absolute("acceptance_cli");
  std::filesystem::remove_all(work);
  std::vector<std::string> artifacts = {"eval.json", "eval.csv", "plan.json", "index.lmdx", "query.json"};
  bool ok = true;
  for (int pass = 0; pass < 2; ++pass) {
    const std::filesystem::path dir = work / ("run" + std::to_string(pass));
    std::filesystem::create_directories(dir);
    const std::string d = "'" + dir.string() + "'";
    const std::string c = "'" + cli + "'";
    ok = ok && Run(c + " eval --world synth --seed 3 --worlds 1 --distractor-worlds 1 --rooms 2 --db-size 20"
                       " --strategies bow,s1,s5 --report " + d + "/eval.json --csv " + d + "/eval.csv") == 0;
    ok = ok && Run(c + " synth --seed 4 --rooms 2 --out-dir " + d + "/maps > /dev/null 2>&1") == 0;
    ok = ok && Run(c + " plan " + d + "/maps/synth4-0010.map --all > " + d + "/plan.json") == 0;
    ok = ok && Run(c + " index build " + d + "/maps --strategy s1 --out " + d + "/index.lmdx > /dev/null 2>&1") == 0;
    ok = ok && Run(c + " index query " + d + "/index.lmdx " + d + "/maps/synth4-0010.map --top 10 --json " + d +
                   "/query.json") == 0;
  }
  std::size_t identical = 0;
  for (const std::string& a : artifacts) {
    const std::string x = Slurp(work / "run0" / a);
    const std::string y = Slurp(work / "run1" / a);
    if (!x.empty() && x == y) ++identical;
  }
  out.pass = ok && identical == artifacts.size();
  out.detail = std::string(ok ? "" : "a CLI command failed; ") + std::to_string(identical) + "/" +
               std::to_string(artifacts.size()) + " artifacts byte-identical across two runs with fixed seeds";
  return out;
}

}  // namespace
}  // namespace lmd

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cli;
  app.add_option("--cli", cli, "path to the lmd executable");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  const auto report = [&](const char* id, const char* name, const std::function<lmd::Outcome()>& fn) {
    const auto t0 = lmd::Clock::now();
    lmd::Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), lmd::Seconds(t0));
    std::fflush(stdout);
  };

  report("C1", "index-equals-brute-force", lmd::C1IndexMatchesOracle);
  lmd::BenchmarkRun bench;
  report("C2", "lmd-anr-below-bow", [&] {
    bench = lmd::RunBenchmark();
    return lmd::C2LmdBeatsBow(bench);
  });
  report("C3", "s1-viewpoint-repeatability", [&] { return lmd::C3ViewpointRepeatability(bench); });
  report("C4", "two-room-parse-quality", lmd::C4TwoRoomParse);
  report("C5", "planners-equal-exhaustive-oracles", lmd::C5PlannersMatchOracles);
  report("C6", "invariant-suites", lmd::C6Invariants);
  report("C7", "cli-byte-identical", [&] { return lmd::C7CliDeterminism(cli); });
  std::printf("%d of 7 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
