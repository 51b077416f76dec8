#include <catch2/catch_amalgamated.hpp>

#include <wbansim/geometry.hpp>

using namespace wbansim;

TEST_CASE("distance converts cm grid coordinates to meters") {
  CHECK(distance({1, 1}, {1, 1}) == 0.0);
  CHECK(distance({1, 1}, {2, 1}) == 0.01);
  CHECK(distance({1, 1}, {1, 2}) == 0.01);
  CHECK(distance({3, 4}, {4, 5}) == Catch::Approx(0.014142135623730951).epsilon(1e-15));

  // Reference geometry used throughout: Tx (1,1), relay (5,6), Rx (15,15).
  CHECK(distance({1, 1}, {15, 15}) == Catch::Approx(0.1979898987322333).epsilon(1e-15));
  CHECK(distance({1, 1}, {5, 6}) == Catch::Approx(0.06403124237432849).epsilon(1e-15));
  CHECK(distance({5, 6}, {15, 15}) == Catch::Approx(0.1345362404707371).epsilon(1e-15));
}

TEST_CASE("distance is symmetric") {
  const NodePosition a{2, 9};
  const NodePosition b{14, 3};
  CHECK(distance(a, b) == distance(b, a));
}

TEST_CASE("angle_between measures the unsigned angle between two directions") {
  // Collinear and opposite directions.
  CHECK(angle_between({1, 1}, {5, 1}, {9, 1}) == 0.0);
  CHECK(angle_between({5, 5}, {9, 5}, {1, 5}) == Catch::Approx(180.0).epsilon(1e-15));
  // Perpendicular.
  CHECK(angle_between({5, 5}, {9, 5}, {5, 9}) == Catch::Approx(90.0).epsilon(1e-15));
  // Reference: at the Tx (1,1), Rx (15,15) vs relay (5,6).
  CHECK(angle_between({1, 1}, {15, 15}, {5, 6}) == Catch::Approx(6.34019174590991).epsilon(1e-12));
  // Order of the two directions does not matter.
  CHECK(angle_between({1, 1}, {5, 6}, {15, 15}) ==
        angle_between({1, 1}, {15, 15}, {5, 6}));
}

TEST_CASE("angle_between rejects degenerate directions") {
  CHECK_THROWS_AS(angle_between({3, 3}, {3, 3}, {5, 5}), std::invalid_argument);
  CHECK_THROWS_AS(angle_between({3, 3}, {5, 5}, {3, 3}), std::invalid_argument);
}

TEST_CASE("on_grid checks 1-based inclusive bounds") {
  const GridSpec grid;  // 16 x 15
  CHECK(on_grid({1, 1}, grid));
  CHECK(on_grid({16, 15}, grid));
  CHECK_FALSE(on_grid({0, 1}, grid));
  CHECK_FALSE(on_grid({1, 0}, grid));
  CHECK_FALSE(on_grid({17, 1}, grid));
  CHECK_FALSE(on_grid({1, 16}, grid));
}

TEST_CASE("grid_cells enumerates row-major with x fastest") {
  const GridSpec grid;
  const auto cells = grid_cells(grid);
  REQUIRE(cells.size() == 240);
  CHECK(cells[0] == NodePosition{1, 1});
  CHECK(cells[1] == NodePosition{2, 1});
  CHECK(cells[16] == NodePosition{1, 2});
  CHECK(cells.back() == NodePosition{16, 15});
}

TEST_CASE("grid_cells drops excluded cells") {
  const GridSpec grid;
  const auto cells = grid_cells(grid, {{1, 1}, {15, 15}});
  CHECK(cells.size() == 238);
  CHECK(cells[0] == NodePosition{2, 1});
  for (const NodePosition p : cells) {
    CHECK(p != NodePosition{1, 1});
    CHECK(p != NodePosition{15, 15});
  }
}

TEST_CASE("grid_cells honors a coarser cell size") {
  const auto cells = grid_cells(GridSpec{16, 15, 2});
  CHECK(cells.size() == 64);  // x in {1,3,...,15}, y in {1,3,...,15}
  for (const NodePosition p : cells) {
    CHECK((p.x - 1) % 2 == 0);
    CHECK((p.y - 1) % 2 == 0);
  }
}

TEST_CASE("GridSpec validation rejects degenerate grids") {
  CHECK_THROWS_AS((GridSpec{1, 15, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{16, 1, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((GridSpec{16, 15, 0}.validate()), std::invalid_argument);
  CHECK_NOTHROW(GridSpec{}.validate());
}
