#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numbers>
#include <string>

#include "revpark/scenario.hpp"

using Catch::Approx;
using namespace revpark;

namespace {

int error_line(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("parse_scenario: minimal rectangle scenario and defaults") {
  const Scenario s = parse_scenario(
      "extents 0 0 10 10\n"
      "start 1 2 0.5\n"
      "goal 8 8 0\n");
  CHECK(s.name == "unnamed");
  CHECK(s.map_kind == MapKind::rectangles);
  CHECK(s.extents == Rect{0, 0, 10, 10});
  CHECK(s.resolution == 0.1);
  CHECK(s.obstacles.empty());
  CHECK(s.start == Pose{1, 2, 0.5});
  CHECK(s.goal == Pose{8, 8, 0});
  CHECK(s.vehicle == VehicleParams{});
  CHECK(s.planner == PlannerConfig{});
}

TEST_CASE("parse_scenario: every key, comments and blank lines") {
  const Scenario s = parse_scenario(
      "# reverse parking demo\n"
      "name big lot A\n"
      "\n"
      "extents 0 0 12 8   # world frame, meters\n"
      "resolution 0.25\n"
      "obstacle 1 1 2 2\n"
      "obstacle 3 3 4.5 4\n"
      "vehicle 2.5 4.0 1.8 0.5\n"
      "q_diag 2 6 3\n"
      "k_a 0.2\n"
      "v_r -1.5\n"
      "delta_choices -0.6 0 0.6\n"
      "primitive_duration 0.5\n"
      "goal_tol 0.15 0.05\n"
      "max_iterations 5000\n"
      "start 6 6 0\n"
      "goal 10 2 -1.5\n");
  CHECK(s.name == "big lot A");
  CHECK(s.resolution == 0.25);
  REQUIRE(s.obstacles.size() == 2);
  CHECK(s.obstacles[1] == Rect{3, 3, 4.5, 4});
  CHECK(s.vehicle.wheelbase == 2.5);
  CHECK(s.vehicle.rear_overhang == 0.5);
  CHECK(s.vehicle.front_overhang == Approx(1.0));
  CHECK(s.planner.weights.q[0][0] == 2.0);
  CHECK(s.planner.weights.q[1][1] == 6.0);
  CHECK(s.planner.weights.q[2][2] == 3.0);
  CHECK(s.planner.weights.k_a == 0.2);
  CHECK(s.planner.v_r == -1.5);
  CHECK(s.planner.delta_choices == std::vector<double>{-0.6, 0.0, 0.6});
  CHECK(s.planner.primitive_duration == 0.5);
  CHECK(s.planner.goal_tol_xy == 0.15);
  CHECK(s.planner.goal_tol_psi == 0.05);
  CHECK(s.planner.max_iterations == 5000);
}

TEST_CASE("parse_scenario: vehicle overhang splits symmetrically when omitted") {
  const Scenario s = parse_scenario(
      "extents 0 0 10 10\n"
      "vehicle 2.5 4.0 1.8\n"
      "start 1 1 0\n"
      "goal 2 2 0\n");
  CHECK(s.vehicle.rear_overhang == Approx(0.75));
  CHECK(s.vehicle.front_overhang == Approx(0.75));
}

TEST_CASE("parse_scenario: errors carry the offending line number") {
  SECTION("unknown key") {
    const std::string text =
        "extents 0 0 10 10\n"
        "speed 3\n"
        "start 1 1 0\n"
        "goal 2 2 0\n";
    CHECK_THROWS_AS(parse_scenario(text), ParseError);
    CHECK(error_line(text) == 2);
  }
  SECTION("malformed number") {
    CHECK(error_line("extents 0 0 ten 10\nstart 1 1 0\ngoal 2 2 0\n") == 1);
    CHECK_THROWS_WITH(parse_scenario("extents 0 0 ten 10\nstart 1 1 0\ngoal 2 2 0\n"),
                      Catch::Matchers::ContainsSubstring("malformed number"));
  }
  SECTION("wrong argument count") {
    CHECK(error_line("extents 0 0 10\nstart 1 1 0\ngoal 2 2 0\n") == 1);
    CHECK(error_line("extents 0 0 10 10\nstart 1 1\ngoal 2 2 0\n") == 2);
  }
  SECTION("missing required keys") {
    CHECK_THROWS_WITH(parse_scenario("extents 0 0 10 10\ngoal 1 1 0\n"),
                      Catch::Matchers::ContainsSubstring("missing 'start'"));
    CHECK_THROWS_WITH(parse_scenario("extents 0 0 10 10\nstart 1 1 0\n"),
                      Catch::Matchers::ContainsSubstring("missing 'goal'"));
    CHECK_THROWS_WITH(parse_scenario("start 1 1 0\ngoal 2 2 0\n"),
                      Catch::Matchers::ContainsSubstring("missing 'extents'"));
  }
  SECTION("degenerate geometry") {
    CHECK(error_line("extents 0 0 0 10\nstart 1 1 0\ngoal 2 2 0\n") == 1);
    CHECK(error_line("extents 0 0 10 10\nobstacle 1 1 1 2\nstart 1 1 0\ngoal 2 2 0\n") == 2);
    CHECK(error_line("extents 0 0 10 10\nresolution 0\nstart 1 1 0\ngoal 2 2 0\n") == 2);
  }
  SECTION("obstacle outside the extents, reported at its own line") {
    const std::string text =
        "extents 0 0 10 10\n"
        "obstacle 1 1 2 2\n"
        "obstacle 9 9 11 10\n"
        "start 1 1 0\n"
        "goal 2 2 0\n";
    CHECK(error_line(text) == 3);
    CHECK_THROWS_WITH(parse_scenario(text),
                      Catch::Matchers::ContainsSubstring("outside the extents"));
  }
}

TEST_CASE("parse_scenario: ascii raster maps") {
  const std::string raster =
      "resolution 0.5\n"
      "start 1 1 0\n"
      "goal 1.5 1 0\n"
      "ascii_map\n"
      "####\n"
      "#..#\n"
      "####\n"
      "end_map\n";
  SECTION("rows, kind and implied extents") {
    const Scenario s = parse_scenario(raster);
    CHECK(s.map_kind == MapKind::ascii_raster);
    REQUIRE(s.ascii_rows.size() == 3);
    CHECK(s.ascii_rows[0] == "####");
    CHECK(s.ascii_rows[1] == "#..#");
    CHECK(s.extents == Rect{0, 0, 2.0, 1.5});  // 4 x 3 cells at 0.5 m
  }
  SECTION("extents may place the origin when they agree with the raster") {
    const Scenario s = parse_scenario("extents -1 -1 1 0.5\n" + raster);
    CHECK(s.extents == Rect{-1, -1, 1, 0.5});
  }
  SECTION("disagreeing extents are an error at the extents line") {
    CHECK(error_line("extents -1 -1 3 0.5\n" + raster) == 1);
  }
  SECTION("the raster is copied with file row 0 on top") {
    const OccupancyGrid g = build_grid(parse_scenario(raster));
    CHECK(g.width_cells == 4);
    CHECK(g.height_cells == 3);
    CHECK(g.occupied_count() == 10);
    CHECK(g.cells[g.index({1, 1})] == 0);  // the interior hole
    CHECK(g.cells[g.index({1, 0})] == 1);  // bottom border = last file row
    CHECK(g.cells[g.index({1, 2})] == 1);  // top border = first file row
  }
  SECTION("inside the block '#' is an occupied cell, not a comment") {
    const Scenario s = parse_scenario(raster);
    CHECK(s.ascii_rows[0] == "####");
  }
}

TEST_CASE("parse_scenario: ascii raster errors") {
  CHECK(error_line("start 1 1 0\ngoal 2 2 0\nascii_map\n##\n###\nend_map\n") == 5);   // ragged
  CHECK(error_line("start 1 1 0\ngoal 2 2 0\nascii_map\n#x#\nend_map\n") == 4);       // bad char
  CHECK(error_line("start 1 1 0\ngoal 2 2 0\nascii_map\nend_map\n") == 4);            // empty
  CHECK_THROWS_WITH(parse_scenario("start 1 1 0\ngoal 2 2 0\nascii_map\n###\n"),
                    Catch::Matchers::ContainsSubstring("not closed"));
  SECTION("rectangles and a raster cannot be mixed") {
    const std::string text =
        "extents 0 0 1.5 0.5\n"
        "obstacle 0 0 0.5 0.5\n"
        "start 0.2 0.2 0\n"
        "goal 1 0.2 0\n"
        "ascii_map\n"
        "...\n"
        "end_map\n";
    CHECK(error_line(text) == 2);
    CHECK_THROWS_WITH(parse_scenario(text), Catch::Matchers::ContainsSubstring("mixes"));
  }
}

TEST_CASE("emit_scenario: parse(emit(s)) reproduces the scenario exactly") {
  SECTION("canonical parking lot") {
    const Scenario s = canonical_parking_lot();
    CHECK(parse_scenario(emit_scenario(s)) == s);
  }
  SECTION("ascii scenario with custom planner settings") {
    Scenario s = parse_scenario(
        "name tight corridor\n"
        "resolution 0.5\n"
        "v_r -0.7\n"
        "delta_choices -0.5 -0.25 0 0.25 0.5\n"
        "goal_tol 0.3 0.17\n"
        "start 1 1 0\n"
        "goal 2 1 0\n"
        "ascii_map\n"
        "......\n"
        "..##..\n"
        "......\n"
        "end_map\n");
    CHECK(parse_scenario(emit_scenario(s)) == s);
  }
  SECTION("full-precision doubles survive the round trip") {
    Scenario s = canonical_parking_lot();
    s.start.psi = 0.1 + 0.2;  // not representable as a short decimal
    s.planner.goal_tol_psi = std::numbers::pi / 31.0;
    CHECK(parse_scenario(emit_scenario(s)) == s);
  }
  SECTION("off-diagonal weights are not representable") {
    Scenario s = canonical_parking_lot();
    s.planner.weights.q[0][1] = s.planner.weights.q[1][0] = 0.25;
    CHECK_THROWS_AS(emit_scenario(s), std::invalid_argument);
  }
}

TEST_CASE("build_grid: rectangle rasterization counts") {
  Scenario s = parse_scenario(
      "extents 0 0 10 10\n"
      "start 5 5 0\n"
      "goal 6 6 0\n");
  SECTION("no obstacles") {
    const OccupancyGrid g = build_grid(s);
    CHECK(g.width_cells == 100);
    CHECK(g.height_cells == 100);
    CHECK(g.occupied_count() == 0);
  }
  SECTION("unit obstacle covers exactly its cell centers") {
    s.obstacles.push_back({1, 1, 2, 2});
    CHECK(build_grid(s).occupied_count() == 100);
  }
  SECTION("obstacle equal to the extents fills the grid") {
    s.obstacles.push_back({0, 0, 10, 10});
    CHECK(build_grid(s).occupied_count() == 10000);
  }
}

TEST_CASE("canonical_parking_lot: well-formed and self-consistent") {
  const Scenario s = canonical_parking_lot();
  CHECK(s.name == "parking-lot");
  CHECK(s.extents == Rect{0, 0, 30, 20});
  CHECK(s.obstacles.size() == 21);  // 10 in the target row + 11 facing
  CHECK(s.start == Pose{20, 11, 0});
  CHECK(s.goal.x_r == Approx(14.85));
  CHECK(s.goal.y_r == Approx(18.698));
  CHECK(s.goal.psi == Approx(-std::numbers::pi / 2.0));
  CHECK(validate_scenario(s).empty());
}

TEST_CASE("validate_scenario: semantic violations") {
  SECTION("pose outside the extents") {
    Scenario s = canonical_parking_lot();
    s.start = {-5, 1, 0};
    const auto v = validate_scenario(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "start lies outside the extents");
  }
  SECTION("goal centerline intersects a parked car") {
    Scenario s = canonical_parking_lot();
    s.goal = {1.35, 17.25, -std::numbers::pi / 2.0};  // center of an occupied stall
    const auto v = validate_scenario(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "goal in collision");
  }
  SECTION("steering choice beyond the vehicle limit") {
    Scenario s = canonical_parking_lot();
    s.planner.delta_choices = {1.6};
    const auto v = validate_scenario(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == std::string("planner config: |delta| must be <= delta_max"));
  }
  SECTION("several problems reported together") {
    Scenario s = canonical_parking_lot();
    s.resolution = -1.0;
    s.obstacles[0] = {-2, -2, -1, -1};
    const auto v = validate_scenario(s);
    CHECK(v.size() == 2);
  }
  SECTION("non-finite poses") {
    Scenario s = canonical_parking_lot();
    s.goal.psi = std::nan("");
    const auto v = validate_scenario(s);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == "goal pose must be finite");
  }
}
