#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "revpark/csv_io.hpp"
#include "revpark/occupancy.hpp"
#include "revpark/planner.hpp"
#include "revpark/scenario.hpp"
#include "revpark/validation.hpp"

namespace revpark {

struct SvgOptions {
  double scale = 40.0;      // [px/m]
  double margin = 20.0;     // [px]
  bool draw_inflated = true;
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

// World to SVG pixel coordinates (SVG y grows downward).
struct SvgFrame {
  Rect extents;
  double scale;
  double margin;

  double x(double wx) const { return margin + (wx - extents.xmin) * scale; }
  double y(double wy) const { return margin + (extents.ymax - wy) * scale; }
  double width() const { return 2.0 * margin + extents.width() * scale; }
  double height() const { return 2.0 * margin + extents.height() * scale; }
};

inline std::string svg_rect(const SvgFrame& f, const Rect& r, const std::string& style) {
  return "  <rect x=\"" + svg_num(f.x(r.xmin)) + "\" y=\"" + svg_num(f.y(r.ymax)) +
         "\" width=\"" + svg_num(r.width() * f.scale) + "\" height=\"" +
         svg_num(r.height() * f.scale) + "\" " + style + "/>\n";
}

inline std::string svg_polygon(const SvgFrame& f, const FootprintPolygon& poly,
                               const std::string& style) {
  std::string out = "  <polygon points=\"";
  for (std::size_t i = 0; i < 4; ++i) {
    if (i > 0) out += " ";
    out += svg_num(f.x(poly.corners[i].x)) + "," + svg_num(f.y(poly.corners[i].y));
  }
  out += "\" " + style + "/>\n";
  return out;
}

// Merges horizontal runs of marked cells into single rectangles; keeps the
// SVG small even for dense rasters.
inline std::vector<Rect> cell_runs(const OccupancyGrid& g, const OccupancyGrid* exclude) {
  std::vector<Rect> runs;
  for (int row = 0; row < g.height_cells; ++row) {
    int run_start = -1;
    for (int col = 0; col <= g.width_cells; ++col) {
      bool on = col < g.width_cells && g.cells[g.index({col, row})] != 0;
      if (on && exclude && exclude->cells[exclude->index({col, row})] != 0) on = false;
      if (on && run_start < 0) run_start = col;
      if (!on && run_start >= 0) {
        runs.push_back({g.origin.x + run_start * g.resolution, g.origin.y + row * g.resolution,
                        g.origin.x + col * g.resolution, g.origin.y + (row + 1) * g.resolution});
        run_start = -1;
      }
    }
  }
  return runs;
}

inline std::string svg_open(const SvgFrame& f, const std::string& title) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(f.width()) +
         "\" height=\"" + svg_num(f.height()) + "\" viewBox=\"0 0 " + svg_num(f.width()) + " " +
         svg_num(f.height()) + "\">\n";
  out += "  <title>" + xml_escape(title) + "</title>\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"" + svg_num(f.width()) + "\" height=\"" +
         svg_num(f.height()) + "\" fill=\"white\"/>\n";
  return out;
}

inline std::string svg_map_layers(const SvgFrame& f, const Scenario& s,
                                  const OccupancyGrid& grid, const InflatedGrid* inflated,
                                  const SvgOptions& opt) {
  std::string out;
  out += svg_rect(f, s.extents, "fill=\"none\" stroke=\"#808080\" stroke-width=\"1\"");
  if (inflated && opt.draw_inflated) {
    for (const Rect& r : cell_runs(inflated->grid, &grid)) {
      out += svg_rect(f, r, "fill=\"#7788aa\" fill-opacity=\"0.35\"");
    }
  }
  if (s.map_kind == MapKind::rectangles) {
    for (const Rect& r : s.obstacles) out += svg_rect(f, r, "fill=\"#303030\"");
  } else {
    for (const Rect& r : cell_runs(grid, nullptr)) out += svg_rect(f, r, "fill=\"#303030\"");
  }
  return out;
}

inline std::string svg_polyline(const SvgFrame& f, const std::vector<TrajectoryRow>& rows,
                                const std::string& style) {
  std::string out = "  <polyline points=\"";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) out += " ";
    out += svg_num(f.x(rows[i].pose.x_r)) + "," + svg_num(f.y(rows[i].pose.y_r));
  }
  out += "\" " + style + "/>\n";
  return out;
}

}  // namespace detail

/// Scene rendering: obstacles dark, inflated margin translucent, start and
/// goal footprints outlined, the found rear-axle path as a polyline with
/// body rectangles drawn at every primitive boundary. `path` may be null to
/// render the map alone.
inline std::string render_path_svg(const Scenario& s, const OccupancyGrid& grid,
                                   const InflatedGrid& inflated, const QueueEntry* path,
                                   SvgOptions opt = {}) {
  const detail::SvgFrame f{s.extents, opt.scale, opt.margin};
  std::string out = detail::svg_open(f, s.name);
  out += detail::svg_map_layers(f, s, grid, &inflated, opt);
  out += detail::svg_polygon(f, footprint(s.start, s.vehicle),
                             "fill=\"none\" stroke=\"#1f6fd0\" stroke-width=\"1.5\"");
  out += detail::svg_polygon(f, footprint(s.goal, s.vehicle),
                             "fill=\"none\" stroke=\"#1faf54\" stroke-width=\"1.5\"");
  if (path) {
    const std::vector<TrajectoryRow> rows = path_rows(*path, s.planner);
    for (const auto& traj : path->path_trajectory) {
      out += detail::svg_polygon(f, footprint(traj->samples.front().pose, s.vehicle),
                                 "fill=\"none\" stroke=\"#606060\" stroke-width=\"0.8\"");
    }
    out += detail::svg_polygon(f, footprint(path->terminal_state, s.vehicle),
                               "fill=\"none\" stroke=\"#606060\" stroke-width=\"0.8\"");
    out += detail::svg_polyline(f, rows,
                                "fill=\"none\" stroke=\"#d03030\" stroke-width=\"2\"");
  }
  out += "</svg>\n";
  return out;
}

/// Search-tree rendering: every recorded branch drawn as a faint polyline
/// (requires a plan run with record_tree set), the winner on top.
inline std::string render_tree_svg(const Scenario& s, const OccupancyGrid& grid,
                                   const InflatedGrid& inflated,
                                   const std::vector<QueueEntry>& entries, const QueueEntry* path,
                                   SvgOptions opt = {}) {
  const detail::SvgFrame f{s.extents, opt.scale, opt.margin};
  std::string out = detail::svg_open(f, s.name + " (search tree)");
  out += detail::svg_map_layers(f, s, grid, &inflated, opt);
  for (const QueueEntry& e : entries) {
    if (!e.branch_trajectory) continue;
    std::string pts = "  <polyline points=\"";
    const Trajectory& traj = *e.branch_trajectory;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      if (i > 0) pts += " ";
      pts += detail::svg_num(f.x(traj.samples[i].pose.x_r)) + "," +
             detail::svg_num(f.y(traj.samples[i].pose.y_r));
    }
    pts += "\" fill=\"none\" stroke=\"#4060c0\" stroke-opacity=\"0.25\" stroke-width=\"1\"/>\n";
    out += pts;
  }
  if (path) {
    out += detail::svg_polyline(f, path_rows(*path, s.planner),
                                "fill=\"none\" stroke=\"#d03030\" stroke-width=\"2\"");
  }
  out += "</svg>\n";
  return out;
}

}  // namespace revpark
