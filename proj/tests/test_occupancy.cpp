#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "revpark/occupancy.hpp"

using namespace revpark;

namespace {

OccupancyGrid empty_10x10() { return make_grid({0, 0, 1, 1}, 0.1); }

// Reference dilation: scan every cell against every occupied source cell.
OccupancyGrid brute_force_inflate(const OccupancyGrid& g, double radius) {
  const int r = static_cast<int>(std::ceil(radius / g.resolution - 1e-9));
  OccupancyGrid out = g;
  for (int row = 0; row < g.height_cells; ++row) {
    for (int col = 0; col < g.width_cells; ++col) {
      bool hit = false;
      for (int orow = 0; orow < g.height_cells && !hit; ++orow) {
        for (int ocol = 0; ocol < g.width_cells && !hit; ++ocol) {
          if (g.cells[g.index({ocol, orow})] == 0) continue;
          const int di = col - ocol;
          const int dj = row - orow;
          hit = di * di + dj * dj <= r * r;
        }
      }
      if (hit) out.cells[out.index({col, row})] = 1;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("make_grid: dimensions and validation") {
  const OccupancyGrid g = make_grid({0, 0, 30, 20}, 0.1);
  CHECK(g.width_cells == 300);
  CHECK(g.height_cells == 200);
  CHECK(g.cells.size() == 60000);
  CHECK(g.origin == Vec2{0, 0});
  CHECK(g.occupied_count() == 0);

  const OccupancyGrid off = make_grid({-5, -5, 5, 5}, 0.5);
  CHECK(off.width_cells == 20);
  CHECK(off.origin == Vec2{-5, -5});

  CHECK_THROWS_AS(make_grid({0, 0, 1, 1}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid({0, 0, 0, 1}, 0.1), std::invalid_argument);
}

TEST_CASE("world_to_cell: floor binning with upper-edge handoff") {
  const OccupancyGrid g = empty_10x10();
  CHECK(world_to_cell(g, {0.05, 0.05}) == Cell{0, 0});
  CHECK(world_to_cell(g, {0.05, 0.95}) == Cell{0, 9});
  SECTION("a point exactly on a cell's upper edge belongs to the next cell") {
    const OccupancyGrid wide = make_grid({0, 0, 2, 1}, 0.1);
    CHECK(world_to_cell(wide, {1.0, 0.0}) == Cell{10, 0});
  }
  SECTION("negative origin") {
    const OccupancyGrid off = make_grid({-5, -5, 5, 5}, 0.5);
    CHECK(world_to_cell(off, {-4.75, -4.75}) == Cell{0, 0});
  }
  SECTION("outside the raster") {
    CHECK_FALSE(world_to_cell(g, {-0.01, 0.5}).has_value());
    CHECK_FALSE(world_to_cell(g, {0.5, 1.01}).has_value());
    CHECK_FALSE(world_to_cell(g, {1.0, 0.5}).has_value());  // x == xmax is past the last cell
  }
}

TEST_CASE("cell_center: position and roundtrip") {
  const OccupancyGrid g = make_grid({0, 0, 2, 1}, 0.1);
  CHECK(cell_center(g, {0, 0}) == Vec2{0.05, 0.05});
  const Vec2 c = cell_center(g, {10, 3});
  CHECK(c.x == Catch::Approx(1.05).margin(1e-12));
  CHECK(c.y == Catch::Approx(0.35).margin(1e-12));
  CHECK_THROWS_AS(cell_center(g, {20, 0}), std::invalid_argument);
  CHECK_THROWS_AS(cell_center(g, {0, -1}), std::invalid_argument);

  std::mt19937 rng(12345);
  const OccupancyGrid big = make_grid({-7.3, 2.1, 13.9, 8.8}, 0.13);
  std::uniform_int_distribution<int> col_dist(0, big.width_cells - 1);
  std::uniform_int_distribution<int> row_dist(0, big.height_cells - 1);
  for (int i = 0; i < 1000; ++i) {
    const Cell cell{col_dist(rng), row_dist(rng)};
    REQUIRE(world_to_cell(big, cell_center(big, cell)) == cell);
  }
}

TEST_CASE("is_occupied: out-of-map counts as occupied") {
  OccupancyGrid g = empty_10x10();
  CHECK_FALSE(is_occupied(g, {0.5, 0.5}));
  CHECK(is_occupied(g, {1.5, 0.5}));
  CHECK(is_occupied(g, {0.5, -0.5}));
  g.cells[g.index({5, 5})] = 1;
  CHECK(is_occupied(g, {0.55, 0.55}));
  CHECK_FALSE(is_occupied(g, {0.45, 0.55}));
}

TEST_CASE("mark_rectangle: center-inside rule") {
  SECTION("grid-aligned unit square covers exactly 100 cells") {
    OccupancyGrid g = make_grid({0, 0, 2, 2}, 0.1);
    mark_rectangle(g, {0, 0, 1, 1});
    CHECK(g.occupied_count() == 100);
  }
  SECTION("centers on the rectangle boundary count (closed set)") {
    // dyadic coordinates so the centers land exactly on the boundary
    OccupancyGrid g = make_grid({0, 0, 2, 2}, 0.5);
    mark_rectangle(g, {0.25, 0.25, 0.75, 0.75});
    CHECK(g.occupied_count() == 4);  // the four cell centers at the corners
  }
  SECTION("sliver missing every center marks nothing") {
    OccupancyGrid g = make_grid({0, 0, 1, 1}, 0.1);
    mark_rectangle(g, {0.06, 0.06, 0.14, 0.14});
    CHECK(g.occupied_count() == 0);
  }
}

TEST_CASE("disk_stencil: size and boundary membership") {
  CHECK(disk_stencil(0).size() == 1);
  CHECK(disk_stencil(1).size() == 5);
  CHECK(disk_stencil(2).size() == 13);
  CHECK(disk_stencil(10).size() == 317);
  const std::vector<Cell> s = disk_stencil(10);
  CHECK(std::find(s.begin(), s.end(), Cell{10, 0}) != s.end());
  CHECK(std::find(s.begin(), s.end(), Cell{6, 8}) != s.end());   // 36 + 64 = 100
  CHECK(std::find(s.begin(), s.end(), Cell{7, 8}) == s.end());   // 49 + 64 > 100
  CHECK_THROWS_AS(disk_stencil(-1), std::invalid_argument);
}

TEST_CASE("inflate: stencil dilation") {
  SECTION("radius 0 changes nothing") {
    OccupancyGrid g = empty_10x10();
    g.cells[g.index({3, 4})] = 1;
    const InflatedGrid inf = inflate(g, 0.0);
    CHECK(inf.inflation_radius == 0.0);
    CHECK(inf.grid.cells == g.cells);
  }
  SECTION("single cell grows to the full disk when it fits") {
    OccupancyGrid g = make_grid({0, 0, 3, 3}, 0.1);
    g.cells[g.index({15, 15})] = 1;
    CHECK(inflate(g, 0.9675).grid.occupied_count() == 317);
  }
  SECTION("the disk clips at the raster edge") {
    OccupancyGrid g = empty_10x10();
    g.cells[g.index({0, 0})] = 1;
    const InflatedGrid inf = inflate(g, 0.35);  // r = 4
    CHECK(inf.grid.occupied_count() < disk_stencil(4).size());
    CHECK(is_occupied(inf.grid, {0.05, 0.45}));
    CHECK_FALSE(is_occupied(inf.grid, {0.55, 0.45}));
  }
  SECTION("fully occupied grid is a fixpoint") {
    OccupancyGrid g = empty_10x10();
    g.cells.assign(g.cells.size(), 1);
    CHECK(inflate(g, 1.0).grid.occupied_count() == g.cells.size());
  }
  SECTION("negative radius rejected") {
    CHECK_THROWS_AS(inflate(empty_10x10(), -0.1), std::invalid_argument);
  }
}

TEST_CASE("inflate: superset, monotonicity, brute-force agreement") {
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> cell_dist(0, 29);
  std::uniform_int_distribution<int> count_dist(1, 20);
  std::uniform_real_distribution<double> radius_dist(0.0, 0.6);
  for (int trial = 0; trial < 10; ++trial) {
    OccupancyGrid g = make_grid({0, 0, 3, 3}, 0.1);
    const int n = count_dist(rng);
    for (int i = 0; i < n; ++i) g.cells[g.index({cell_dist(rng), cell_dist(rng)})] = 1;
    const double ra = radius_dist(rng);
    const double rb = ra + radius_dist(rng);
    const InflatedGrid ia = inflate(g, ra);
    const InflatedGrid ib = inflate(g, rb);
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
      if (g.cells[i]) REQUIRE(ia.grid.cells[i]);       // superset of the source
      if (ia.grid.cells[i]) REQUIRE(ib.grid.cells[i]); // monotone in the radius
    }
    REQUIRE(ia.grid.cells == brute_force_inflate(g, ra).cells);
  }
}

TEST_CASE("polyline_collides: OR over point queries") {
  OccupancyGrid g = make_grid({0, 0, 2, 2}, 0.1);
  g.cells[g.index({10, 10})] = 1;
  const InflatedGrid inf = inflate(g, 0.2);
  CHECK_FALSE(polyline_collides(inf, {{0.2, 0.2}, {0.3, 0.3}, {0.2, 1.7}}));
  CHECK(polyline_collides(inf, {{0.2, 0.2}, {1.05, 1.05}}));
  CHECK(polyline_collides(inf, {{1.05, 0.85}}));        // inside the margin only
  CHECK(polyline_collides(inf, {{0.2, 0.2}, {2.01, 1.0}}));  // out of map
  CHECK_THROWS_AS(polyline_collides(inf, {}), std::invalid_argument);
}
