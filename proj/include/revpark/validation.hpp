#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "revpark/geometry.hpp"
#include "revpark/kinematics.hpp"
#include "revpark/planner.hpp"
#include "revpark/scenario.hpp"

namespace revpark {

/// Exact vehicle body rectangle in the world frame, counterclockwise,
/// starting at the rear-right corner.
struct FootprintPolygon {
  std::array<Vec2, 4> corners;
};

inline FootprintPolygon footprint(const Pose& pose, const VehicleParams& vp) {
  const double c = std::cos(pose.psi);
  const double s = std::sin(pose.psi);
  const double x0 = -vp.rear_overhang;
  const double x1 = vp.wheelbase + vp.front_overhang;
  const double h = vp.half_width();
  auto world = [&](double bx, double by) -> Vec2 {
    return {pose.x_r + bx * c - by * s, pose.y_r + bx * s + by * c};
  };
  return {{world(x0, -h), world(x1, -h), world(x1, h), world(x0, h)}};
}

/// Shoelace area; positive for counterclockwise corners.
inline double area(const FootprintPolygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2 p = poly.corners[i];
    const Vec2 q = poly.corners[(i + 1) % 4];
    a += p.x * q.y - q.x * p.y;
  }
  return a / 2.0;
}

namespace detail {

struct Interval {
  double lo;
  double hi;
};

inline Interval project(const FootprintPolygon& poly, Vec2 axis) {
  double lo = dot(poly.corners[0], axis);
  double hi = lo;
  for (std::size_t i = 1; i < 4; ++i) {
    const double v = dot(poly.corners[i], axis);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

inline Interval project(const Rect& r, Vec2 axis) {
  Interval iv{0.0, 0.0};
  bool first = true;
  for (double x : {r.xmin, r.xmax}) {
    for (double y : {r.ymin, r.ymax}) {
      const double v = dot({x, y}, axis);
      if (first) {
        iv = {v, v};
        first = false;
      } else {
        iv.lo = std::min(iv.lo, v);
        iv.hi = std::max(iv.hi, v);
      }
    }
  }
  return iv;
}

}  // namespace detail

/// Separating-axis test between the rotated footprint rectangle and one
/// axis-aligned rectangle. Both are closed sets: touching counts as a
/// collision, so separation must be strict.
inline bool rect_intersects(const FootprintPolygon& poly, const Rect& r) {
  const Vec2 edge1{poly.corners[1].x - poly.corners[0].x, poly.corners[1].y - poly.corners[0].y};
  const Vec2 edge2{poly.corners[3].x - poly.corners[0].x, poly.corners[3].y - poly.corners[0].y};
  const std::array<Vec2, 4> axes{{{1.0, 0.0}, {0.0, 1.0}, edge1, edge2}};
  for (Vec2 axis : axes) {
    const detail::Interval a = detail::project(poly, axis);
    const detail::Interval b = detail::project(r, axis);
    if (a.hi < b.lo || b.hi < a.lo) return false;
  }
  return true;
}

inline bool footprint_collides(const FootprintPolygon& poly, const std::vector<Rect>& obstacles) {
  for (const Rect& r : obstacles) {
    if (rect_intersects(poly, r)) return true;
  }
  return false;
}

inline bool footprint_within(const FootprintPolygon& poly, const Rect& extents) {
  for (Vec2 c : poly.corners) {
    if (!extents.contains(c)) return false;
  }
  return true;
}

/// Obstacle geometry the oracle certifies against: the scenario's rectangles
/// as-is, or for ascii maps every occupied cell as a one-cell rectangle.
inline std::vector<Rect> certification_rectangles(const Scenario& s) {
  if (s.map_kind == MapKind::rectangles) return s.obstacles;
  std::vector<Rect> rects;
  const OccupancyGrid g = build_grid(s);
  for (int row = 0; row < g.height_cells; ++row) {
    for (int col = 0; col < g.width_cells; ++col) {
      if (g.cells[g.index({col, row})] == 0) continue;
      const double x = g.origin.x + col * g.resolution;
      const double y = g.origin.y + row * g.resolution;
      rects.push_back({x, y, x + g.resolution, y + g.resolution});
    }
  }
  return rects;
}

struct PathViolation {
  std::size_t trajectory_index = 0;
  std::size_t sample_index = 0;
};

/// Ground-truth certification of a found path: at every stored sample the
/// exact body rectangle must miss every obstacle and stay inside the world
/// extents. Returns the first violating sample, or nullopt when clean.
inline std::optional<PathViolation> certify_path(const PlanResult& result, const Scenario& s) {
  if (result.status != PlanStatus::found || !result.path) {
    throw std::invalid_argument("certify_path: result carries no found path");
  }
  const std::vector<Rect> rects = certification_rectangles(s);
  const auto& path = *result.path;
  for (std::size_t ti = 0; ti < path.path_trajectory.size(); ++ti) {
    const Trajectory& traj = *path.path_trajectory[ti];
    for (std::size_t si = 0; si < traj.samples.size(); ++si) {
      const FootprintPolygon poly = footprint(traj.samples[si].pose, s.vehicle);
      if (footprint_collides(poly, rects) || !footprint_within(poly, s.extents)) {
        return PathViolation{ti, si};
      }
    }
  }
  return std::nullopt;
}

/// Same check over a flat pose list (e.g. parsed back from a trajectory CSV);
/// returns the first violating row index.
inline std::optional<std::size_t> certify_poses(const std::vector<Pose>& poses,
                                                const Scenario& s) {
  const std::vector<Rect> rects = certification_rectangles(s);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const FootprintPolygon poly = footprint(poses[i], s.vehicle);
    if (footprint_collides(poly, rects) || !footprint_within(poly, s.extents)) {
      return i;
    }
  }
  return std::nullopt;
}

}  // namespace revpark
