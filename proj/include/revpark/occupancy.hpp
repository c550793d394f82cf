#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "revpark/geometry.hpp"

namespace revpark {

struct Cell {
  int col = 0;
  int row = 0;
  friend constexpr bool operator==(Cell a, Cell b) { return a.col == b.col && a.row == b.row; }
};

/// Binary occupancy raster. origin is the world position of cell (0,0)'s
/// lower-left corner. Treated as immutable once built; copying is cheap
/// enough for the sizes involved here (< ~100k cells).
struct OccupancyGrid {
  double resolution = 0.1;  // [m/cell]
  Vec2 origin;
  int width_cells = 1;
  int height_cells = 1;
  std::vector<std::uint8_t> cells;  // row-major, index = row * width_cells + col

  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_cells) +
           static_cast<std::size_t>(c.col);
  }
  bool in_bounds(Cell c) const {
    return c.col >= 0 && c.col < width_cells && c.row >= 0 && c.row < height_cells;
  }
  std::size_t occupied_count() const {
    std::size_t n = 0;
    for (std::uint8_t v : cells) n += v != 0;
    return n;
  }
};

/// Result of dilating a grid; remembers the radius it was built with.
struct InflatedGrid {
  OccupancyGrid grid;
  double inflation_radius = 0.0;  // [m]
};

/// Empty grid covering `extents`. Cell counts round up so the raster never
/// falls short of the requested area (the small bias guards against
/// width/resolution landing epsilon above an integer).
inline OccupancyGrid make_grid(const Rect& extents, double resolution) {
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("grid resolution must be > 0");
  }
  if (!(extents.width() > 0.0) || !(extents.height() > 0.0)) {
    throw std::invalid_argument("grid extents must have positive area");
  }
  OccupancyGrid g;
  g.resolution = resolution;
  g.origin = {extents.xmin, extents.ymin};
  g.width_cells = std::max(1, static_cast<int>(std::ceil(extents.width() / resolution - 1e-9)));
  g.height_cells = std::max(1, static_cast<int>(std::ceil(extents.height() / resolution - 1e-9)));
  g.cells.assign(static_cast<std::size_t>(g.width_cells) * g.height_cells, 0);
  return g;
}

// Floor-based binning: a point exactly on a cell's upper edge belongs to the
// next cell. Out of raster -> nullopt.
inline std::optional<Cell> world_to_cell(const OccupancyGrid& grid, Vec2 p) {
  const double fc = std::floor((p.x - grid.origin.x) / grid.resolution);
  const double fr = std::floor((p.y - grid.origin.y) / grid.resolution);
  if (fc < 0.0 || fr < 0.0 || fc >= grid.width_cells || fr >= grid.height_cells) {
    return std::nullopt;
  }
  return Cell{static_cast<int>(fc), static_cast<int>(fr)};
}

inline Vec2 cell_center(const OccupancyGrid& grid, Cell c) {
  if (!grid.in_bounds(c)) {
    throw std::invalid_argument("cell_center: index out of bounds");
  }
  return {grid.origin.x + (c.col + 0.5) * grid.resolution,
          grid.origin.y + (c.row + 0.5) * grid.resolution};
}

/// Out-of-map counts as occupied: the vehicle must stay inside the mapped
/// world, so the fail-safe answer is "blocked".
inline bool is_occupied(const OccupancyGrid& grid, Vec2 p) {
  const std::optional<Cell> c = world_to_cell(grid, p);
  if (!c) return true;
  return grid.cells[grid.index(*c)] != 0;
}

/// Marks every cell whose center lies inside or on the boundary of `rect`.
inline void mark_rectangle(OccupancyGrid& grid, const Rect& rect) {
  for (int row = 0; row < grid.height_cells; ++row) {
    for (int col = 0; col < grid.width_cells; ++col) {
      if (rect.contains(cell_center(grid, {col, row}))) {
        grid.cells[grid.index({col, row})] = 1;
      }
    }
  }
}

/// Disk structuring element of cell-radius r: all integer offsets (i,j) with
/// i*i + j*j <= r*r. Exposed so tests can count/verify it directly.
inline std::vector<Cell> disk_stencil(int r) {
  if (r < 0) {
    throw std::invalid_argument("disk_stencil: radius must be >= 0");
  }
  std::vector<Cell> offsets;
  for (int j = -r; j <= r; ++j) {
    for (int i = -r; i <= r; ++i) {
      if (i * i + j * j <= r * r) offsets.push_back({i, j});
    }
  }
  return offsets;
}

/// Dilation by a disk stencil of cell-radius ceil(radius/resolution).
/// Rounding up keeps the result conservative: it never under-inflates.
inline InflatedGrid inflate(const OccupancyGrid& grid, double radius) {
  if (!(radius >= 0.0)) {
    throw std::invalid_argument("inflate: radius must be >= 0");
  }
  const int r = static_cast<int>(std::ceil(radius / grid.resolution - 1e-9));
  const std::vector<Cell> stencil = disk_stencil(r);
  InflatedGrid out{grid, radius};
  for (int row = 0; row < grid.height_cells; ++row) {
    for (int col = 0; col < grid.width_cells; ++col) {
      if (grid.cells[grid.index({col, row})] == 0) continue;
      for (Cell off : stencil) {
        const Cell c{col + off.col, row + off.row};
        if (out.grid.in_bounds(c)) out.grid.cells[out.grid.index(c)] = 1;
      }
    }
  }
  return out;
}

/// True iff any of the points hits an occupied (or out-of-map) cell of the
/// inflated grid. This is the planner's whole collision test.
inline bool polyline_collides(const InflatedGrid& inflated, const std::vector<Vec2>& points) {
  if (points.empty()) {
    throw std::invalid_argument("polyline_collides: empty point list");
  }
  for (Vec2 p : points) {
    if (is_occupied(inflated.grid, p)) return true;
  }
  return false;
}

}  // namespace revpark
