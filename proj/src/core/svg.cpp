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


#include "core/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "core/map_io.hpp"

namespace lmd {
namespace {

constexpr double kPixelsPerMeter = 40.0;
constexpr double kMargin = 1.0;

std::string Num(double v) { return FormatDouble(std::round(v * 100.0) / 100.0); }

// World-to-canvas transform; SVG y grows downwards.
class Canvas {
 public:
  explicit Canvas(std::span<const Point2> points) {
    if (points.empty()) {
      lo_ = {-1.0, -1.0};
      hi_ = {1.0, 1.0};
    } else {
      lo_ = hi_ = points.front();
      for (const Point2& p : points) {
        lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
        hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
      }
    }
    lo_ = lo_ - Point2{kMargin, kMargin};
    hi_ = hi_ + Point2{kMargin, kMargin};
  }

  double X(Point2 p) const { return (p.x - lo_.x) * kPixelsPerMeter; }
  double Y(Point2 p) const { return (hi_.y - p.y) * kPixelsPerMeter; }

  void Begin(std::ostream& out) const {
    const double w = (hi_.x - lo_.x) * kPixelsPerMeter;
    const double h = (hi_.y - lo_.y) * kPixelsPerMeter;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Num(w) << "\" height=\"" << Num(h)
        << "\" viewBox=\"0 0 " << Num(w) << ' ' << Num(h) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void Dot(std::ostream& out, Point2 p, const char* color, double r = 1.5) const {
    out << "<circle cx=\"" << Num(X(p)) << "\" cy=\"" << Num(Y(p)) << "\" r=\"" << Num(r) << "\" fill=\"" << color
        << "\"/>\n";
  }

  void Line(std::ostream& out, Point2 a, Point2 b, const char* color, double width) const {
    out << "<line x1=\"" << Num(X(a)) << "\" y1=\"" << Num(Y(a)) << "\" x2=\"" << Num(X(b)) << "\" y2=\""
        << Num(Y(b)) << "\" stroke=\"" << color << "\" stroke-width=\"" << Num(width) << "\"/>\n";
  }

  void Square(std::ostream& out, Point2 center, double side, const char* color) const {
    const double s = side * kPixelsPerMeter;
    out << "<rect x=\"" << Num(X(center) - s / 2.0) << "\" y=\"" << Num(Y(center) - s / 2.0) << "\" width=\""
        << Num(s) << "\" height=\"" << Num(s) << "\" fill=\"" << color << "\"/>\n";
  }

 private:
  Point2 lo_;
  Point2 hi_;
};

const char* StrategyColor(Strategy s) {
  switch (s) {
    case Strategy::kS1: return "#1f77b4";
    case Strategy::kS2: return "#ff7f0e";
    case Strategy::kS3: return "#2ca02c";
    case Strategy::kS4: return "#9467bd";
    case Strategy::kS5: return "#d62728";
  }
  return "black";
}

}  // namespace

void RenderParseSvg(std::ostream& out, const PointsetMap& map, const ParseResult& parse) {
  std::vector<Point2> extent = map.points;
  for (const WallSegment& w : parse.walls) {
    extent.push_back(w.a);
    extent.push_back(w.b);
  }
  const Canvas canvas(extent);
  canvas.Begin(out);
  for (const Point2& p : map.points) canvas.Dot(out, p, "gray");
  for (const WallSegment& w : parse.walls) canvas.Line(out, w.a, w.b, "red", 2.0);
  out << "</svg>\n";
}

void RenderPlanSvg(std::ostream& out, const PointsetMap& map, const OccupancyGrid& grid, const CellSets& cells,
                   std::span<const Viewpoint> viewpoints, const std::optional<UnoccupiedBox>& box) {
  std::vector<Point2> extent = map.points;
  for (const Viewpoint& v : viewpoints) extent.push_back(v.position);
  const Canvas canvas(extent);
  canvas.Begin(out);
  for (std::size_t c : cells.unoccupied) canvas.Square(out, grid.CellCenter(c), grid.resolution(), "#cfe8ff");
  for (std::size_t c : cells.structure) canvas.Square(out, grid.CellCenter(c), grid.resolution(), "black");
  for (const Point2& p : map.points) canvas.Dot(out, p, "gray", 1.0);
  if (box) {
    for (std::size_t i = 0; i < 4; ++i) canvas.Line(out, box->corners[i], box->corners[(i + 1) % 4], "red", 2.0);
  }
  for (const Viewpoint& v : viewpoints) {
    canvas.Dot(out, v.position, StrategyColor(v.strategy), 5.0);
    const Point2 tip = v.position + Rotate({0.5, 0.0}, v.orientation);
    canvas.Line(out, v.position, tip, StrategyColor(v.strategy), 2.0);
  }
  out << "</svg>\n";
}

void RenderMatchesSvg(std::ostream& out, const PointsetMap& query, const PointsetMap& database,
                      const LocalMapDescriptor& query_desc, const LocalMapDescriptor& database_desc,
                      std::span<const WordMatch> matches) {
  std::vector<Point2> qpts;
  std::vector<Point2> dpts;
  for (const Point2& p : query.points) qpts.push_back(query.origin.ToParent(p));
  for (const Point2& p : database.points) dpts.push_back(database.origin.ToParent(p));
  std::vector<Point2> extent = qpts;
  extent.insert(extent.end(), dpts.begin(), dpts.end());
  const Canvas canvas(extent);
  canvas.Begin(out);
  for (const Point2& p : dpts) canvas.Dot(out, p, "green");
  for (const Point2& p : qpts) canvas.Dot(out, p, "purple");
  for (const WordMatch& m : matches) {
    const Point2 a = query.origin.ToParent(query_desc.keypoints.at(m.query));
    const Point2 b = database.origin.ToParent(database_desc.keypoints.at(m.database));
    canvas.Line(out, a, b, "red", 1.0);
  }
  out << "</svg>\n";
}

}  // namespace lmd
