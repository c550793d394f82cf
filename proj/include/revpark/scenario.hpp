#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revpark/errors.hpp"
#include "revpark/geometry.hpp"
#include "revpark/kinematics.hpp"
#include "revpark/occupancy.hpp"
#include "revpark/planner.hpp"

namespace revpark {

enum class MapKind { rectangles, ascii_raster };

/// A complete planning problem: world geometry, vehicle, start/goal poses and
/// planner settings. Obstacles come either as axis-aligned rectangles or as
/// an inline ASCII raster ('.' free, '#' occupied, top row first).
struct Scenario {
  std::string name = "unnamed";
  MapKind map_kind = MapKind::rectangles;
  Rect extents;
  double resolution = 0.1;  // [m/cell]
  std::vector<Rect> obstacles;
  std::vector<std::string> ascii_rows;  // top row first, as written in the file
  VehicleParams vehicle;
  Pose start;
  Pose goal;
  PlannerConfig planner;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Locale-independent numeric parsing: plain decimal only, full-token match.
inline double parse_number(std::string_view tok, int line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value)) {
    throw ParseError(line, "malformed number '" + std::string(tok) + "'");
  }
  return value;
}

inline std::size_t parse_count(std::string_view tok, int line) {
  unsigned long long value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "malformed count '" + std::string(tok) + "'");
  }
  return static_cast<std::size_t>(value);
}

inline void need_args(const std::vector<std::string_view>& toks, std::size_t n, int line) {
  if (toks.size() != n + 1) {
    throw ParseError(line, "key '" + std::string(toks[0]) + "' expects " + std::to_string(n) +
                               " value(s)");
  }
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Parses the line-oriented scenario format. '#' starts a comment except
/// inside the ascii_map block, where '#' marks an occupied cell. Unknown
/// keys, malformed numbers, missing required sections and obstacles outside
/// the extents are errors carrying the offending line number.
inline Scenario parse_scenario(const std::string& text) {
  Scenario s;
  bool have_extents = false;
  bool have_start = false;
  bool have_goal = false;
  bool have_ascii = false;
  std::vector<int> obstacle_lines;
  int extents_line = 0;

  // split on '\n'; a trailing newline terminates the last line rather than
  // starting an empty one
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string_view line(text.data() + pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  const int last_line = std::max(1, static_cast<int>(lines.size()));

  bool in_ascii = false;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    std::string_view line = lines[li];

    if (in_ascii) {
      std::string_view trimmed = line;
      while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t')) {
        trimmed.remove_suffix(1);
      }
      if (trimmed == "end_map") {
        in_ascii = false;
        if (s.ascii_rows.empty()) throw ParseError(line_no, "ascii_map block is empty");
        continue;
      }
      for (char c : trimmed) {
        if (c != '.' && c != '#') {
          throw ParseError(line_no, "ascii map rows may contain only '.' and '#'");
        }
      }
      if (trimmed.empty()) throw ParseError(line_no, "empty row inside ascii_map block");
      if (!s.ascii_rows.empty() && trimmed.size() != s.ascii_rows.front().size()) {
        throw ParseError(line_no, "ascii map rows must all have the same length");
      }
      s.ascii_rows.emplace_back(trimmed);
      continue;
    }

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::vector<std::string_view> toks = detail::split_tokens(line);
    if (toks.empty()) continue;
    const std::string_view key = toks[0];

    if (key == "name") {
      if (toks.size() < 2) throw ParseError(line_no, "key 'name' expects a value");
      const std::size_t start_pos = static_cast<std::size_t>(toks[1].data() - line.data());
      std::string_view rest = line.substr(start_pos);
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\t')) rest.remove_suffix(1);
      s.name = std::string(rest);
    } else if (key == "extents") {
      detail::need_args(toks, 4, line_no);
      s.extents = {detail::parse_number(toks[1], line_no), detail::parse_number(toks[2], line_no),
                   detail::parse_number(toks[3], line_no), detail::parse_number(toks[4], line_no)};
      if (!(s.extents.width() > 0.0) || !(s.extents.height() > 0.0)) {
        throw ParseError(line_no, "extents must have positive width and height");
      }
      have_extents = true;
      extents_line = line_no;
    } else if (key == "resolution") {
      detail::need_args(toks, 1, line_no);
      s.resolution = detail::parse_number(toks[1], line_no);
      if (!(s.resolution > 0.0)) throw ParseError(line_no, "resolution must be > 0");
    } else if (key == "obstacle") {
      detail::need_args(toks, 4, line_no);
      const Rect r{detail::parse_number(toks[1], line_no), detail::parse_number(toks[2], line_no),
                   detail::parse_number(toks[3], line_no), detail::parse_number(toks[4], line_no)};
      if (!(r.width() > 0.0) || !(r.height() > 0.0)) {
        throw ParseError(line_no, "obstacle rectangle must have positive width and height");
      }
      s.obstacles.push_back(r);
      obstacle_lines.push_back(line_no);
    } else if (key == "ascii_map") {
      detail::need_args(toks, 0, line_no);
      if (have_ascii) throw ParseError(line_no, "duplicate ascii_map block");
      have_ascii = true;
      in_ascii = true;
    } else if (key == "start" || key == "goal") {
      detail::need_args(toks, 3, line_no);
      const Pose p{detail::parse_number(toks[1], line_no), detail::parse_number(toks[2], line_no),
                   detail::parse_number(toks[3], line_no)};
      if (key == "start") {
        s.start = p;
        have_start = true;
      } else {
        s.goal = p;
        have_goal = true;
      }
    } else if (key == "vehicle") {
      if (toks.size() != 4 && toks.size() != 5) {
        throw ParseError(line_no, "key 'vehicle' expects 3 or 4 value(s)");
      }
      std::optional<double> rear;
      if (toks.size() == 5) rear = detail::parse_number(toks[4], line_no);
      try {
        s.vehicle = VehicleParams(detail::parse_number(toks[1], line_no),
                                  detail::parse_number(toks[2], line_no),
                                  detail::parse_number(toks[3], line_no), rear,
                                  s.vehicle.delta_max);
      } catch (const std::invalid_argument& e) {
        throw ParseError(line_no, e.what());
      }
    } else if (key == "q_diag") {
      detail::need_args(toks, 3, line_no);
      s.planner.weights = CostWeights::diagonal(
          detail::parse_number(toks[1], line_no), detail::parse_number(toks[2], line_no),
          detail::parse_number(toks[3], line_no), s.planner.weights.k_a);
    } else if (key == "k_a") {
      detail::need_args(toks, 1, line_no);
      s.planner.weights.k_a = detail::parse_number(toks[1], line_no);
    } else if (key == "v_r") {
      detail::need_args(toks, 1, line_no);
      s.planner.v_r = detail::parse_number(toks[1], line_no);
    } else if (key == "delta_choices") {
      if (toks.size() < 2) throw ParseError(line_no, "delta_choices expects at least one value");
      s.planner.delta_choices.clear();
      for (std::size_t i = 1; i < toks.size(); ++i) {
        s.planner.delta_choices.push_back(detail::parse_number(toks[i], line_no));
      }
    } else if (key == "primitive_duration") {
      detail::need_args(toks, 1, line_no);
      s.planner.primitive_duration = detail::parse_number(toks[1], line_no);
      if (!(s.planner.primitive_duration > 0.0)) {
        throw ParseError(line_no, "primitive_duration must be > 0");
      }
    } else if (key == "goal_tol") {
      detail::need_args(toks, 2, line_no);
      s.planner.goal_tol_xy = detail::parse_number(toks[1], line_no);
      s.planner.goal_tol_psi = detail::parse_number(toks[2], line_no);
    } else if (key == "max_iterations") {
      detail::need_args(toks, 1, line_no);
      s.planner.max_iterations = detail::parse_count(toks[1], line_no);
    } else {
      throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  if (in_ascii) {
    throw ParseError(last_line, "ascii_map block not closed by end_map");
  }

  if (have_ascii && !s.obstacles.empty()) {
    throw ParseError(obstacle_lines.front(),
                     "scenario mixes obstacle rectangles with an ascii_map");
  }
  if (!have_start) throw ParseError(last_line, "missing 'start'");
  if (!have_goal) throw ParseError(last_line, "missing 'goal'");

  if (have_ascii) {
    s.map_kind = MapKind::ascii_raster;
    const double w = static_cast<double>(s.ascii_rows.front().size()) * s.resolution;
    const double h = static_cast<double>(s.ascii_rows.size()) * s.resolution;
    Vec2 origin{0.0, 0.0};
    if (have_extents) {
      // extents may accompany an ascii map only to place its origin; the
      // spanned size must then agree with the raster.
      origin = {s.extents.xmin, s.extents.ymin};
      if (std::abs(s.extents.width() - w) > 0.5 * s.resolution ||
          std::abs(s.extents.height() - h) > 0.5 * s.resolution) {
        throw ParseError(extents_line, "extents disagree with ascii map dimensions");
      }
    }
    s.extents = {origin.x, origin.y, origin.x + w, origin.y + h};
  } else {
    s.map_kind = MapKind::rectangles;
    if (!have_extents) {
      throw ParseError(last_line, "missing 'extents'");
    }
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
      const Rect& r = s.obstacles[i];
      if (r.xmin < s.extents.xmin || r.ymin < s.extents.ymin || r.xmax > s.extents.xmax ||
          r.ymax > s.extents.ymax) {
        throw ParseError(obstacle_lines[i], "obstacle rectangle lies outside the extents");
      }
    }
  }
  return s;
}

/// Serializes a Scenario back to the file format with full double precision,
/// so parse(emit(s)) == s. Only diagonal q matrices are representable.
inline std::string emit_scenario(const Scenario& s) {
  const auto& q = s.planner.weights.q;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j && q[i][j] != 0.0) {
        throw std::invalid_argument("emit_scenario: only diagonal q is representable");
      }
    }
  }
  const auto g = detail::format_double;
  std::string out;
  out += "name " + s.name + "\n";
  out += "extents " + g(s.extents.xmin) + " " + g(s.extents.ymin) + " " + g(s.extents.xmax) +
         " " + g(s.extents.ymax) + "\n";
  out += "resolution " + g(s.resolution) + "\n";
  out += "vehicle " + g(s.vehicle.wheelbase) + " " + g(s.vehicle.length) + " " +
         g(s.vehicle.width) + " " + g(s.vehicle.rear_overhang) + "\n";
  out += "q_diag " + g(q[0][0]) + " " + g(q[1][1]) + " " + g(q[2][2]) + "\n";
  out += "k_a " + g(s.planner.weights.k_a) + "\n";
  out += "v_r " + g(s.planner.v_r) + "\n";
  out += "delta_choices";
  for (double d : s.planner.delta_choices) out += " " + g(d);
  out += "\n";
  out += "primitive_duration " + g(s.planner.primitive_duration) + "\n";
  out += "goal_tol " + g(s.planner.goal_tol_xy) + " " + g(s.planner.goal_tol_psi) + "\n";
  out += "max_iterations " + std::to_string(s.planner.max_iterations) + "\n";
  out += "start " + g(s.start.x_r) + " " + g(s.start.y_r) + " " + g(s.start.psi) + "\n";
  out += "goal " + g(s.goal.x_r) + " " + g(s.goal.y_r) + " " + g(s.goal.psi) + "\n";
  if (s.map_kind == MapKind::ascii_raster) {
    out += "ascii_map\n";
    for (const std::string& row : s.ascii_rows) out += row + "\n";
    out += "end_map\n";
  } else {
    for (const Rect& r : s.obstacles) {
      out += "obstacle " + g(r.xmin) + " " + g(r.ymin) + " " + g(r.xmax) + " " + g(r.ymax) + "\n";
    }
  }
  return out;
}

/// Rasterizes the scenario's obstacles onto a fresh grid. Rectangle maps mark
/// every cell whose center falls inside a rectangle; ascii maps copy the
/// raster directly (file row 0 is the TOP row).
inline OccupancyGrid build_grid(const Scenario& s) {
  if (s.map_kind == MapKind::ascii_raster) {
    OccupancyGrid g;
    g.resolution = s.resolution;
    g.origin = {s.extents.xmin, s.extents.ymin};
    g.width_cells = static_cast<int>(s.ascii_rows.front().size());
    g.height_cells = static_cast<int>(s.ascii_rows.size());
    g.cells.assign(static_cast<std::size_t>(g.width_cells) * g.height_cells, 0);
    for (int file_row = 0; file_row < g.height_cells; ++file_row) {
      const int row = g.height_cells - 1 - file_row;
      const std::string& chars = s.ascii_rows[static_cast<std::size_t>(file_row)];
      for (int col = 0; col < g.width_cells; ++col) {
        if (chars[static_cast<std::size_t>(col)] == '#') g.cells[g.index({col, row})] = 1;
      }
    }
    return g;
  }
  OccupancyGrid g = make_grid(s.extents, s.resolution);
  for (const Rect& r : s.obstacles) mark_rectangle(g, r);
  return g;
}

/// Checks every scenario invariant and returns human-readable violations
/// (empty list = valid). Unlike parse errors these cover semantic problems:
/// out-of-extents poses, steering choices beyond the vehicle limit, start or
/// goal centerlines touching the inflated obstacle set.
inline std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> violations;
  if (!(s.resolution > 0.0)) violations.push_back("resolution must be > 0");
  if (!(s.extents.width() > 0.0) || !(s.extents.height() > 0.0)) {
    violations.push_back("extents must have positive area");
  }
  for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
    const Rect& r = s.obstacles[i];
    if (!(r.width() > 0.0) || !(r.height() > 0.0)) {
      violations.push_back("obstacle " + std::to_string(i) + " has nonpositive size");
    } else if (r.xmin < s.extents.xmin || r.ymin < s.extents.ymin || r.xmax > s.extents.xmax ||
               r.ymax > s.extents.ymax) {
      violations.push_back("obstacle " + std::to_string(i) + " lies outside the extents");
    }
  }
  if (!s.start.finite()) violations.push_back("start pose must be finite");
  if (!s.goal.finite()) violations.push_back("goal pose must be finite");
  if (s.start.finite() && !s.extents.contains({s.start.x_r, s.start.y_r})) {
    violations.push_back("start lies outside the extents");
  }
  if (s.goal.finite() && !s.extents.contains({s.goal.x_r, s.goal.y_r})) {
    violations.push_back("goal lies outside the extents");
  }
  if (s.map_kind == MapKind::ascii_raster &&
      (s.ascii_rows.empty() || s.ascii_rows.front().empty())) {
    violations.push_back("ascii map must be non-empty");
  }
  try {
    s.planner.validate(s.vehicle);
  } catch (const std::invalid_argument& e) {
    violations.push_back(e.what());
  }
  if (!violations.empty()) return violations;

  const InflatedGrid inflated = inflate(
      build_grid(s),
      collision_inflation_radius(s.vehicle, s.planner.centerline_spacing, s.resolution));
  const auto blocked = [&](const Pose& p) {
    return polyline_collides(inflated,
                             centerline_points(p, s.vehicle, s.planner.centerline_spacing));
  };
  if (blocked(s.start)) violations.push_back("start in collision");
  if (blocked(s.goal)) violations.push_back("goal in collision");
  return violations;
}

/// Built-in reverse-parking lot, 30 m x 20 m: a top row of eleven
/// 2.7 m x 5.5 m stalls with every stall but one holding a parked car, a 7 m
/// driveway, and a fully parked facing row. The start sits in the driveway
/// parallel to the stalls; the goal backs the rear axle into the empty stall,
/// nose toward the driveway.
inline Scenario canonical_parking_lot() {
  constexpr double kStallWidth = 2.7;
  constexpr double kStallDepth = 5.5;
  constexpr int kStalls = 11;
  constexpr int kEmptyStall = 5;
  constexpr double kTopStallYMin = 20.0 - kStallDepth;  // 14.5
  constexpr double kDriveway = 7.0;
  constexpr double kBottomStallYMax = kTopStallYMin - kDriveway;  // 7.5

  Scenario s;
  s.name = "parking-lot";
  s.extents = {0.0, 0.0, 30.0, 20.0};
  s.resolution = 0.05;

  const double half_w = s.vehicle.width / 2.0;
  const double half_l = s.vehicle.length / 2.0;
  for (int k = 0; k < kStalls; ++k) {
    const double cx = (static_cast<double>(k) + 0.5) * kStallWidth;
    if (k != kEmptyStall) {
      const double cy = kTopStallYMin + kStallDepth / 2.0;
      s.obstacles.push_back({cx - half_w, cy - half_l, cx + half_w, cy + half_l});
    }
    const double cy_bottom = kBottomStallYMax - kStallDepth / 2.0;
    s.obstacles.push_back({cx - half_w, cy_bottom - half_l, cx + half_w, cy_bottom + half_l});
  }

  s.start = {20.0, kBottomStallYMax + kDriveway / 2.0, 0.0};
  const double goal_x = (kEmptyStall + 0.5) * kStallWidth;
  const double parked_rear_bumper_y = kTopStallYMin + kStallDepth / 2.0 + half_l;
  s.goal = {goal_x, parked_rear_bumper_y - s.vehicle.rear_overhang, -std::numbers::pi / 2.0};
  return s;
}

}  // namespace revpark
