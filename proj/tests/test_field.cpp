#include "doctest.h"

#include "piv/error.hpp"
#include "piv/field.hpp"

#include <random>

using namespace piv;

TEST_CASE("make_grid counts nodes from window origins") {
  const GridSpec g = make_grid(64, 64, 24, 12);
  CHECK(g.nx == 4); // origins 0, 12, 24, 36; 36 + 24 <= 64
  CHECK(g.ny == 4);
  CHECK(g.center_x(0) == 12.0);
  CHECK(g.center_x(3) == 48.0);

  const GridSpec one = make_grid(64, 64, 64, 64);
  CHECK(one.nx == 1);
  CHECK(one.ny == 1);
  CHECK(one.center(0, 0) == Point{32.0, 32.0});
}

TEST_CASE("make_grid rejects bad arguments") {
  CHECK_THROWS_AS(make_grid(32, 32, 48, 12), DimensionError);
  CHECK_THROWS_AS(make_grid(64, 64, 16, 0), ParameterError);
  CHECK_THROWS_AS(make_grid(64, 64, 3, 1), ParameterError);
  CHECK_THROWS_AS(make_grid(64, 32, 40, 8), DimensionError);
}

TEST_CASE("grid windows stay inside the image and the grid is deterministic") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const int w = std::uniform_int_distribution(8, 300)(rng);
    const int h = std::uniform_int_distribution(8, 300)(rng);
    const int window = std::uniform_int_distribution(4, std::min(w, h))(rng);
    const int step = std::uniform_int_distribution(1, window)(rng);
    const GridSpec g = make_grid(w, h, window, step);
    CHECK(g.origin_x(g.nx - 1) + window <= w);
    CHECK(g.origin_y(g.ny - 1) + window <= h);
    // One more node would not fit.
    CHECK(g.origin_x(g.nx) + window > w);
    CHECK(g.origin_y(g.ny) + window > h);
    CHECK(make_grid(w, h, window, step) == g);
  }
}

TEST_CASE("GrayImage validates its data") {
  CHECK_THROWS_AS(GrayImage(3, 3, std::vector<double>(8)), DimensionError);
  CHECK_THROWS_AS(GrayImage(1, 1, std::vector<double>{std::nan("")}), NumericError);
  GrayImage img(3, 2, std::vector<double>{0, 1, 2, 3, 4, 5});
  CHECK(img(2, 1) == 5);
  CHECK(img.clamped(-4, 9) == 3);
  CHECK(img.clamped(7, -1) == 2);
}

TEST_CASE("sample_field is bilinear between node centers and clamps outside") {
  VectorField f(make_grid(64, 64, 16, 16)); // centers 8, 24, 40, 56
  for (int iy = 0; iy < f.grid.ny; ++iy)
    for (int ix = 0; ix < f.grid.nx; ++ix) {
      f.u[f.grid.node_index(ix, iy)] = f.grid.center_x(ix) * 2 + f.grid.center_y(iy);
      f.v[f.grid.node_index(ix, iy)] = -f.grid.center_y(iy);
    }
  const Velocity mid = sample_field(f, 17.0, 33.0);
  CHECK(mid.u == doctest::Approx(2 * 17.0 + 33.0));
  CHECK(mid.v == doctest::Approx(-33.0));
  const Velocity corner = sample_field(f, -5.0, 100.0);
  CHECK(corner.u == doctest::Approx(2 * 8.0 + 56.0));
  CHECK(corner.v == doctest::Approx(-56.0));
}

TEST_CASE("VectorField starts measured and counts states") {
  VectorField f(make_grid(32, 32, 16, 8));
  CHECK(f.size() == 9);
  CHECK(f.count(NodeStatus::measured) == 9);
  f.status[4] = NodeStatus::outlier;
  CHECK_FALSE(f.complete());
  f.u.pop_back();
  CHECK_THROWS_AS(f.check(), ParameterError);
  CHECK(parse_node_status(to_string(NodeStatus::interpolated)) == NodeStatus::interpolated);
  CHECK_THROWS_AS(parse_node_status("bogus"), ParameterError);
}
