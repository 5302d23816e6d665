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

#include "core/map_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace lmd {

std::string FormatDouble(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

namespace {

double ParseDouble(const std::string& token, const std::string& context) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end || !std::isfinite(value)) {
    throw Error(ErrorCode::kFormat, "bad number '" + token + "' in " + context);
  }
  return value;
}

std::vector<std::string> Split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string token;
  while (ss >> token) tokens.push_back(token);
  return tokens;
}

Pose2 ParsePose(const std::vector<std::string>& tokens, std::size_t at, const std::string& context) {
  if (tokens.size() < at + 3) throw Error(ErrorCode::kFormat, "truncated pose in " + context);
  return {ParseDouble(tokens[at], context), ParseDouble(tokens[at + 1], context),
          ParseDouble(tokens[at + 2], context)};
}

std::string FormatPose(const Pose2& p) {
  return FormatDouble(p.x) + " " + FormatDouble(p.y) + " " + FormatDouble(p.heading);
}

constexpr std::string_view kMapMagic = "# lmd-map v1";

}  // namespace

void WriteMap(std::ostream& out, const PointsetMap& map) {
  if (map.id.find_first_of(" \t\n") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "map id must not contain whitespace");
  }
  out << kMapMagic << " id=" << map.id << " path_pos=" << FormatDouble(map.path_position) << '\n';
  if (!map.source.empty()) out << "# source " << map.source << '\n';
  out << "# origin " << FormatPose(map.origin) << '\n';
  for (const Pose2& v : map.viewpoints) out << "# viewpoint " << FormatPose(v) << '\n';
  for (const Point2& p : map.points) out << FormatDouble(p.x) << ' ' << FormatDouble(p.y) << '\n';
}

PointsetMap ReadMap(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kMapMagic, 0) != 0) {
    throw Error(ErrorCode::kFormat, "missing '# lmd-map v1' header");
  }
  PointsetMap map;
  bool have_id = false;
  bool have_pos = false;
  for (const std::string& token : Split(line.substr(kMapMagic.size()))) {
    if (token.rfind("id=", 0) == 0) {
      map.id = token.substr(3);
      have_id = true;
    } else if (token.rfind("path_pos=", 0) == 0) {
      map.path_position = ParseDouble(token.substr(9), "map header");
      have_pos = true;
    }
  }
  if (!have_id || !have_pos || map.id.empty()) {
    throw Error(ErrorCode::kFormat, "map header needs id= and path_pos=");
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string context = "map line " + std::to_string(line_no);
    const auto tokens = Split(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "#") {
      if (tokens.size() >= 2 && tokens[1] == "source" && tokens.size() >= 3) {
        map.source = tokens[2];
      } else if (tokens.size() >= 2 && tokens[1] == "origin") {
        map.origin = ParsePose(tokens, 2, context);
      } else if (tokens.size() >= 2 && tokens[1] == "viewpoint") {
        map.viewpoints.push_back(ParsePose(tokens, 2, context));
      }
      continue;
    }
    if (tokens[0][0] == '#') continue;
    if (tokens.size() != 2) throw Error(ErrorCode::kFormat, "expected 'x y' on " + context);
    map.points.push_back({ParseDouble(tokens[0], context), ParseDouble(tokens[1], context)});
  }
  return map;
}

void SaveMapFile(const std::filesystem::path& path, const PointsetMap& map) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  WriteMap(out, map);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

PointsetMap LoadMapFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ReadMap(in);
}

std::vector<PointsetMap> LoadMapDirectory(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::kIo, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".map") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<PointsetMap> maps;
  maps.reserve(files.size());
  for (const auto& f : files) maps.push_back(LoadMapFile(f));
  return maps;
}

std::vector<ScanLogEntry> ReadCarmenLog(std::istream& in, const CarmenOptions& options) {
  std::vector<ScanLogEntry> log;
  std::string line;
  std::size_t line_no = 0;
  bool have_prev = false;
  Point2 prev_odom;
  double distance = 0.0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = Split(line);
    if (tokens.empty()) continue;
    const std::string context = "carmen line " + std::to_string(line_no);
    if (tokens[0] == "ODOM") {
      // ODOM x y theta tv rv accel timestamp host logger_timestamp
      ParsePose(tokens, 1, context);
      continue;
    }
    if (tokens[0] != "FLASER") continue;
    // FLASER n r1..rn x y theta odom_x odom_y odom_theta timestamp host logger_timestamp
    if (tokens.size() < 2) throw Error(ErrorCode::kFormat, "truncated FLASER on " + context);
    const double n_real = ParseDouble(tokens[1], context);
    if (n_real < 0.0 || n_real != std::floor(n_real)) {
      throw Error(ErrorCode::kFormat, "bad reading count on " + context);
    }
    const auto n = static_cast<std::size_t>(n_real);
    if (tokens.size() < 2 + n + 6) throw Error(ErrorCode::kFormat, "truncated FLASER on " + context);

    ScanLogEntry entry;
    entry.pose = ParsePose(tokens, 2 + n, context);
    const Pose2 odom = ParsePose(tokens, 2 + n + 3, context);
    if (have_prev) distance += Distance(odom.position(), prev_odom);
    prev_odom = odom.position();
    have_prev = true;
    entry.odom_distance = distance;

    const double step = n > 1 ? options.field_of_view / static_cast<double>(n - 1) : 0.0;
    const double start = n > 1 ? -0.5 * options.field_of_view : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double range = ParseDouble(tokens[2 + i], context);
      if (range <= 0.0 || range >= options.max_range) continue;
      const double angle = start + step * static_cast<double>(i);
      entry.points.push_back({range * std::cos(angle), range * std::sin(angle)});
    }
    log.push_back(std::move(entry));
  }
  return log;
}

void WriteScanLog(std::ostream& out, const std::vector<ScanLogEntry>& log) {
  for (const ScanLogEntry& e : log) {
    out << "SCAN " << FormatDouble(e.odom_distance) << ' ' << FormatPose(e.pose) << ' ' << e.points.size();
    for (const Point2& p : e.points) out << ' ' << FormatDouble(p.x) << ' ' << FormatDouble(p.y);
    out << '\n';
  }
}

std::vector<ScanLogEntry> ReadScanLog(std::istream& in) {
  std::vector<ScanLogEntry> log;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = Split(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    const std::string context = "scan log line " + std::to_string(line_no);
    if (tokens[0] != "SCAN" || tokens.size() < 6) throw Error(ErrorCode::kFormat, "expected SCAN record on " + context);
    ScanLogEntry e;
    e.odom_distance = ParseDouble(tokens[1], context);
    e.pose = ParsePose(tokens, 2, context);
    const double n = ParseDouble(tokens[5], context);
    if (n < 0.0 || n != std::floor(n) || tokens.size() != 6 + 2 * static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::kFormat, "point count mismatch on " + context);
    }
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      e.points.push_back({ParseDouble(tokens[6 + 2 * i], context), ParseDouble(tokens[7 + 2 * i], context)});
    }
    if (!log.empty() && e.odom_distance < log.back().odom_distance) {
      throw Error(ErrorCode::kFormat, "odometry distance decreases on " + context);
    }
    log.push_back(std::move(e));
  }
  return log;
}

void WritePgm(const std::filesystem::path& path, const OccupancyGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "P5\n" << grid.cols() << ' ' << grid.rows() << "\n255\n";
  std::string row(grid.cols(), '\0');
  for (std::size_t r = grid.rows(); r-- > 0;) {
    for (std::size_t c = 0; c < grid.cols(); ++c) {
      switch (grid.At(r, c)) {
        case CellLabel::kOccupied: row[c] = static_cast<char>(0); break;
        case CellLabel::kUnknown: row[c] = static_cast<char>(127); break;
        case CellLabel::kFree: row[c] = static_cast<char>(255); break;
      }
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());

  std::ofstream info(path.string() + ".info");
  if (!info) throw Error(ErrorCode::kIo, "cannot write sidecar for " + path.string());
  info << "resolution " << FormatDouble(grid.resolution()) << '\n'
       << "origin " << FormatDouble(grid.origin().x) << ' ' << FormatDouble(grid.origin().y) << '\n'
       << "size " << grid.cols() << ' ' << grid.rows() << '\n'
       << "free_space_carved " << (grid.free_space_carved() ? 1 : 0) << '\n';
}

}  // namespace lmd
