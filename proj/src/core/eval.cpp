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


#include "core/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "core/error.hpp"
#include "core/lmd_index.hpp"
#include "core/map_io.hpp"
#include "core/random.hpp"

namespace lmd {

OverlapGrid::OverlapGrid(const PointsetMap& map, double radius) : radius_(radius), cell_(radius) {
  Require(radius > 0.0, "overlap radius must be positive");
  points_.reserve(map.points.size());
  for (const Point2& p : map.points) points_.push_back(map.origin.ToParent(p));
  if (points_.empty()) return;
  lo_ = hi_ = points_.front();
  for (const Point2& p : points_) {
    lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
    hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
  }
  // Coarser cells for very large maps keep the table small; any cell at
  // least `radius` wide still only needs the 3x3 neighbourhood.
  constexpr double kMaxCellsPerSide = 1024.0;
  cell_ = std::max({radius, (hi_.x - lo_.x) / kMaxCellsPerSide, (hi_.y - lo_.y) / kMaxCellsPerSide});
  cols_ = static_cast<std::size_t>((hi_.x - lo_.x) / cell_) + 1;
  rows_ = static_cast<std::size_t>((hi_.y - lo_.y) / cell_) + 1;
  std::vector<std::size_t> cell_of(points_.size());
  start_.assign(rows_ * cols_ + 1, 0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto c = std::min(cols_ - 1, static_cast<std::size_t>((points_[i].x - lo_.x) / cell_));
    const auto r = std::min(rows_ - 1, static_cast<std::size_t>((points_[i].y - lo_.y) / cell_));
    cell_of[i] = r * cols_ + c;
    ++start_[cell_of[i] + 1];
  }
  for (std::size_t i = 1; i < start_.size(); ++i) start_[i] += start_[i - 1];
  std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
  sorted_.resize(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) sorted_[fill[cell_of[i]]++] = points_[i];
}

bool OverlapGrid::HasNeighbor(Point2 p) const {
  if (points_.empty()) return false;
  if (p.x < lo_.x - radius_ || p.x > hi_.x + radius_ || p.y < lo_.y - radius_ || p.y > hi_.y + radius_) {
    return false;
  }
  const double r2 = radius_ * radius_;
  const auto ci = static_cast<long long>(std::floor((p.x - lo_.x) / cell_));
  const auto ri = static_cast<long long>(std::floor((p.y - lo_.y) / cell_));
  for (long long r = std::max(0LL, ri - 1); r <= std::min<long long>(rows_ - 1, ri + 1); ++r) {
    for (long long c = std::max(0LL, ci - 1); c <= std::min<long long>(cols_ - 1, ci + 1); ++c) {
      const std::size_t cell = static_cast<std::size_t>(r) * cols_ + static_cast<std::size_t>(c);
      for (std::uint32_t k = start_[cell]; k < start_[cell + 1]; ++k) {
        if (SquaredNorm(sorted_[k] - p) <= r2) return true;
      }
    }
  }
  return false;
}

std::size_t OverlapGrid::CountCovered(std::span<const Point2> other, std::size_t max_misses) const {
  std::size_t hits = 0;
  std::size_t misses = 0;
  for (const Point2& p : other) {
    if (HasNeighbor(p)) {
      ++hits;
    } else if (++misses > max_misses) {
      break;
    }
  }
  return hits;
}

bool OverlapGrid::BoxesTouch(const OverlapGrid& other) const {
  if (points_.empty() || other.points_.empty()) return false;
  const double r = std::max(radius_, other.radius_);
  return lo_.x <= other.hi_.x + r && other.lo_.x <= hi_.x + r && lo_.y <= other.hi_.y + r &&
         other.lo_.y <= hi_.y + r;
}

double Overlap(const PointsetMap& a, const PointsetMap& b, double radius) {
  if (a.points.empty()) return 0.0;
  const OverlapGrid ga(a, radius);
  const OverlapGrid gb(b, radius);
  const std::size_t hits = gb.CountCovered(ga.points(), std::numeric_limits<std::size_t>::max());
  return static_cast<double>(hits) / static_cast<double>(a.points.size());
}

double SymmetricOverlap(const PointsetMap& a, const PointsetMap& b, double radius) {
  return std::min(Overlap(a, b, radius), Overlap(b, a, radius));
}

namespace {

// Smallest hit count h with h / n >= r as evaluated in floating point.
std::size_t RequiredHits(std::size_t n, double r) {
  const double dn = static_cast<double>(n);
  auto h = static_cast<std::size_t>(std::max(0.0, std::ceil(r * dn)));
  while (h > 0 && static_cast<double>(h - 1) / dn >= r) --h;
  while (h <= n && static_cast<double>(h) / dn < r) ++h;
  return h;
}

}  // namespace

std::vector<RelevantPair> FindOverlappingPairs(std::span<const PointsetMap> maps, double r_overlap,
                                               double radius) {
  std::vector<OverlapGrid> grids;
  grids.reserve(maps.size());
  for (const PointsetMap& m : maps) grids.emplace_back(m, radius);

  std::vector<RelevantPair> pairs;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::size_t ni = maps[i].points.size();
    if (ni == 0) continue;
    const std::size_t need_i = RequiredHits(ni, r_overlap);
    for (std::size_t j = i + 1; j < maps.size(); ++j) {
      if (maps[j].source != maps[i].source || !grids[i].BoxesTouch(grids[j])) continue;
      const std::size_t nj = maps[j].points.size();
      const std::size_t need_j = RequiredHits(nj, r_overlap);
      if (need_i > ni || need_j > nj) continue;
      const std::size_t hits_i = grids[j].CountCovered(grids[i].points(), ni - need_i);
      if (hits_i < need_i) continue;
      const std::size_t hits_j = grids[i].CountCovered(grids[j].points(), nj - need_j);
      if (hits_j < need_j) continue;
      RelevantPair pair;
      pair.query = i;
      pair.truth = j;
      pair.query_id = maps[i].id;
      pair.truth_id = maps[j].id;
      pair.overlap = std::min(static_cast<double>(hits_i) / static_cast<double>(ni),
                              static_cast<double>(hits_j) / static_cast<double>(nj));
      pair.path_separation = std::abs(maps[i].path_position - maps[j].path_position);
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

namespace {

std::vector<RelevantPair> OrderedRelevant(std::span<const RelevantPair> overlapping, double min_separation) {
  std::vector<RelevantPair> out;
  for (const RelevantPair& p : overlapping) {
    if (p.path_separation < min_separation) continue;
    out.push_back(p);
    RelevantPair back = p;
    std::swap(back.query, back.truth);
    std::swap(back.query_id, back.truth_id);
    out.push_back(std::move(back));
  }
  std::sort(out.begin(), out.end(), [](const RelevantPair& a, const RelevantPair& b) {
    return a.query != b.query ? a.query < b.query : a.truth < b.truth;
  });
  return out;
}

}  // namespace

std::vector<RelevantPair> FindRelevantPairs(std::span<const PointsetMap> maps, double r_overlap,
                                            double min_separation, double radius) {
  return OrderedRelevant(FindOverlappingPairs(maps, r_overlap, radius), min_separation);
}

std::vector<RetrievalTask> MakeTasks(std::span<const PointsetMap> maps, std::span<const RelevantPair> pairs,
                                     std::span<const RelevantPair> overlapping, std::span<const char> distractor_only,
                                     const EvalConfig& config) {
  Require(config.db_size >= 1, "database size must be positive");
  std::vector<std::vector<std::size_t>> near(maps.size());
  for (const RelevantPair& p : overlapping) {
    near[p.query].push_back(p.truth);
    near[p.truth].push_back(p.query);
  }

  std::map<std::size_t, const RelevantPair*> best;
  for (const RelevantPair& p : pairs) {
    if (!distractor_only.empty() && distractor_only[p.query]) continue;
    auto [it, inserted] = best.emplace(p.query, &p);
    if (!inserted && (p.overlap > it->second->overlap ||
                      (p.overlap == it->second->overlap && p.truth < it->second->truth))) {
      it->second = &p;
    }
  }

  std::vector<RetrievalTask> tasks;
  std::vector<char> excluded(maps.size(), 0);
  for (const auto& [query, pair] : best) {
    std::fill(excluded.begin(), excluded.end(), 0);
    excluded[query] = 1;
    excluded[pair->truth] = 1;
    for (std::size_t k : near[query]) excluded[k] = 1;
    std::vector<std::size_t> pool;
    for (std::size_t k = 0; k < maps.size(); ++k) {
      if (!excluded[k]) pool.push_back(k);
    }
    if (pool.size() + 1 < config.db_size) {
      throw Error(ErrorCode::kInsufficientDistractors,
                  "query '" + pair->query_id + "' has " + std::to_string(pool.size()) + " distractors, needs " +
                      std::to_string(config.db_size - 1));
    }
    RetrievalTask task;
    task.pair = *pair;
    Rng rng(MixSeed(config.seed, tasks.size()));
    task.database.push_back(pair->truth);
    for (std::size_t k = 0; k + 1 < config.db_size; ++k) {
      const std::size_t pick = k + rng.Index(pool.size() - k);
      std::swap(pool[k], pool[pick]);
      task.database.push_back(pool[k]);
    }
    std::vector<std::size_t> order(task.database.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.Index(k)]);
    for (std::size_t k = 0; k < order.size(); ++k) {
      char label[32];
      std::snprintf(label, sizeof(label), "db-%04zu", order[k]);
      task.labels.emplace_back(label);
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::vector<std::size_t> ErrorHistogram(std::span<const double> errors) {
  std::vector<std::size_t> hist(kHistogramBins, 0);
  for (double e : errors) {
    const auto bin = static_cast<std::size_t>(std::max(0.0, std::floor(e)));
    ++hist[std::min(bin, kHistogramBins - 1)];
  }
  return hist;
}

ExperimentReport RunExperiment(std::span<const PointsetMap> maps, std::span<const char> distractor_only,
                               const EvalConfig& config, std::string dataset) {
  std::vector<std::optional<Strategy>> methods;
  for (const std::string& name : config.methods) {
    if (name == "bow") {
      methods.emplace_back(std::nullopt);
    } else {
      const std::optional<Strategy> s = ParseStrategy(name);
      Require(s.has_value(), "unknown method '" + name + "'");
      methods.emplace_back(s);
    }
  }

  ExperimentReport report;
  report.dataset = std::move(dataset);
  report.seed = config.seed;
  report.db_size = config.db_size;
  report.map_count = maps.size();

  const std::vector<RelevantPair> overlapping = FindOverlappingPairs(maps, config.r_overlap, config.overlap_radius);
  const std::vector<RelevantPair> relevant = OrderedRelevant(overlapping, config.min_separation);
  report.relevant_pairs = relevant.size();
  report.tasks = MakeTasks(maps, relevant, overlapping, distractor_only, config);

  std::vector<char> used(maps.size(), 0);
  for (const RetrievalTask& t : report.tasks) {
    used[t.pair.query] = 1;
    for (std::size_t k : t.database) used[k] = 1;
  }
  std::vector<std::optional<MapDescriptors>> prepared(maps.size());
  for (std::size_t k = 0; k < maps.size(); ++k) {
    if (used[k]) prepared[k] = PrepareMap(maps[k], config.pipeline);
  }

  for (RetrievalTask& t : report.tasks) t.outcomes.resize(methods.size());
  for (std::size_t m = 0; m < methods.size(); ++m) {
    MethodSummary summary;
    summary.method = config.methods[m];
    std::vector<std::optional<LocalMapDescriptor>> descs(maps.size());
    for (std::size_t k = 0; k < maps.size(); ++k) {
      if (!used[k]) continue;
      bool fallback = false;
      descs[k] = DescribeForStrategy(maps[k], *prepared[k], methods[m], config.pipeline, &fallback);
      if (fallback) ++summary.fallbacks;
    }
    IndexConfig index_config = config.pipeline.index;
    index_config.mode = methods[m] ? DescriptorMode::kLmd : DescriptorMode::kBow;

    double rank_sum = 0.0;
    for (RetrievalTask& t : report.tasks) {
      InvertedIndex index(index_config);
      for (std::size_t k = 0; k < t.database.size(); ++k) {
        LocalMapDescriptor d = *descs[t.database[k]];
        d.map_id = t.labels[k];
        index.Insert(d);
      }
      LocalMapDescriptor q = *descs[t.pair.query];
      q.map_id = "query";
      const RetrievalResult result = index.Query(q);
      MethodOutcome& out = t.outcomes[m];
      out.normalized_rank = AnrRank(result, t.labels.front(), t.database.size());
      out.rank = static_cast<std::size_t>(std::lround(out.normalized_rank * static_cast<double>(t.database.size())));
      out.top_score = result.ranking.front().score;
      for (const RankedMap& r : result.ranking) {
        if (r.map_id == t.labels.front()) out.truth_score = r.score;
      }
      rank_sum += out.normalized_rank;
      if (methods[m]) {
        const PointsetMap& qm = maps[t.pair.query];
        const PointsetMap& tm = maps[t.pair.truth];
        const double err = Distance(qm.origin.ToParent(descs[t.pair.query]->viewpoint.position),
                                    tm.origin.ToParent(descs[t.pair.truth]->viewpoint.position));
        out.viewpoint_error = err;
        summary.viewpoint_errors.push_back(err);
      }
    }
    summary.anr = report.tasks.empty() ? 0.0 : rank_sum / static_cast<double>(report.tasks.size());
    summary.histogram = ErrorHistogram(summary.viewpoint_errors);
    report.methods.push_back(std::move(summary));
  }
  return report;
}

BenchmarkWorlds MakeBenchmarkWorlds(std::uint64_t seed, const BenchmarkConfig& config) {
  BenchmarkWorlds out;
  const int total = config.worlds + config.distractor_worlds;
  for (int w = 0; w < total; ++w) {
    SynthConfig synth = config.synth;
    synth.seed = MixSeed(seed, static_cast<std::uint64_t>(w));
    const bool distractor = w >= config.worlds;
    synth.name = "synth" + std::to_string(seed) + (distractor ? "d" : "w") +
                 std::to_string(distractor ? w - config.worlds : w);
    SynthWorld world = SynthesizeWorld(synth);
    for (PointsetMap& m : world.maps) {
      out.maps.push_back(std::move(m));
      out.distractor_only.push_back(distractor ? 1 : 0);
    }
  }
  return out;
}

std::vector<ExperimentReport> RunSynthBenchmark(const BenchmarkConfig& config) {
  std::vector<ExperimentReport> reports;
  for (std::uint64_t seed : config.seeds) {
    const BenchmarkWorlds worlds = MakeBenchmarkWorlds(seed, config);
    EvalConfig eval = config.eval;
    eval.seed = seed;
    reports.push_back(RunExperiment(worlds.maps, worlds.distractor_only, eval, "synth-" + std::to_string(seed)));
  }
  return reports;
}

std::vector<std::pair<std::string, double>> MeanAnr(std::span<const ExperimentReport> reports) {
  std::vector<std::pair<std::string, double>> out;
  if (reports.empty()) return out;
  for (std::size_t m = 0; m < reports.front().methods.size(); ++m) {
    double sum = 0.0;
    for (const ExperimentReport& r : reports) sum += r.methods.at(m).anr;
    out.emplace_back(reports.front().methods[m].method, sum / static_cast<double>(reports.size()));
  }
  return out;
}

nlohmann::json ReportToJson(std::span<const ExperimentReport> reports) {
  nlohmann::json out;
  out["reports"] = nlohmann::json::array();
  for (const ExperimentReport& r : reports) {
    nlohmann::json jr;
    jr["dataset"] = r.dataset;
    jr["seed"] = r.seed;
    jr["db_size"] = r.db_size;
    jr["maps"] = r.map_count;
    jr["relevant_pairs"] = r.relevant_pairs;
    jr["queries"] = r.tasks.size();
    nlohmann::json methods = nlohmann::json::object();
    for (const MethodSummary& m : r.methods) {
      nlohmann::json jm;
      jm["anr"] = m.anr;
      jm["fallbacks"] = m.fallbacks;
      if (!m.viewpoint_errors.empty()) {
        const auto within = std::count_if(m.viewpoint_errors.begin(), m.viewpoint_errors.end(),
                                          [](double e) { return e <= 5.0; });
        jm["viewpoint_error"] = {
            {"bin_width_m", 1.0},
            {"histogram", m.histogram},
            {"within_5m", static_cast<double>(within) / static_cast<double>(m.viewpoint_errors.size())},
        };
      }
      methods[m.method] = std::move(jm);
    }
    jr["methods"] = std::move(methods);
    jr["tasks"] = nlohmann::json::array();
    for (const RetrievalTask& t : r.tasks) {
      nlohmann::json jt;
      jt["query"] = t.pair.query_id;
      jt["truth"] = t.pair.truth_id;
      jt["overlap"] = t.pair.overlap;
      jt["path_separation"] = t.pair.path_separation;
      nlohmann::json results = nlohmann::json::object();
      for (std::size_t m = 0; m < t.outcomes.size(); ++m) {
        const MethodOutcome& o = t.outcomes[m];
        nlohmann::json jo{{"rank", o.rank},
                          {"normalized_rank", o.normalized_rank},
                          {"truth_score", o.truth_score},
                          {"top_score", o.top_score}};
        if (o.viewpoint_error) jo["viewpoint_error"] = *o.viewpoint_error;
        results[r.methods[m].method] = std::move(jo);
      }
      jt["results"] = std::move(results);
      jr["tasks"].push_back(std::move(jt));
    }
    out["reports"].push_back(std::move(jr));
  }
  nlohmann::json mean = nlohmann::json::object();
  for (const auto& [method, anr] : MeanAnr(reports)) mean[method] = anr;
  out["mean_anr"] = std::move(mean);
  return out;
}

void WriteAnrCsv(std::ostream& out, std::span<const ExperimentReport> reports) {
  out << "dataset,method,queries,anr\n";
  std::size_t queries = 0;
  for (const ExperimentReport& r : reports) {
    queries += r.tasks.size();
    for (const MethodSummary& m : r.methods) {
      out << r.dataset << ',' << m.method << ',' << r.tasks.size() << ',' << FormatDouble(m.anr) << '\n';
    }
  }
  for (const auto& [method, anr] : MeanAnr(reports)) {
    out << "mean," << method << ',' << queries << ',' << FormatDouble(anr) << '\n';
  }
}

}  // namespace lmd
