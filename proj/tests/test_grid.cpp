#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vsk/grid.hpp"

using namespace vsk;

TEST_CASE("uniform grid nodes") {
  Grid g = make_grid(1.0, 4, GridKind::Uniform);
  REQUIRE(g.nodes.size() == 5);
  CHECK(g.nodes[0] == 0.0);
  CHECK(g.nodes[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.nodes[2] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.nodes[4] == 1.0);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(g.width(j) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("graded grid p=2") {
  Grid g = make_grid(1.0, 4, GridKind::Graded, 2.0);
  CHECK(g.nodes[1] == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(g.nodes[2] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g.nodes[3] == doctest::Approx(9.0 / 16).epsilon(1e-15));
  CHECK(g.nodes[4] == 1.0);
  // widths non-decreasing, first width = T*N^{-p}
  for (std::size_t j = 0; j + 1 < 4; ++j) CHECK(g.width(j) <= g.width(j + 1));
  CHECK(g.width(0) == doctest::Approx(1.0 / 16));
}

TEST_CASE("graded p=1 equals uniform") {
  Grid a = make_grid(2.0, 7, GridKind::Graded, 1.0);
  Grid b = make_grid(2.0, 7, GridKind::Uniform);
  for (std::size_t i = 0; i <= 7; ++i) CHECK(a.nodes[i] == b.nodes[i]);
}

TEST_CASE("single cell") {
  Grid g = make_grid(2.0, 1, GridKind::Uniform);
  CHECK(g.nodes == std::vector<double>{0.0, 2.0});
}

TEST_CASE("refine keeps shared nodes and horizon") {
  Grid g = make_grid(1.0, 2, GridKind::Uniform);
  Grid r = refine(g, 2);
  REQUIRE(r.cells() == 4);
  CHECK(r.nodes[2] == g.nodes[1]);
  CHECK(r.nodes[4] == g.nodes[2]);

  Grid gg = make_grid(1.5, 3, GridKind::Graded, 2.0);
  Grid rr = refine(gg, 3);
  REQUIRE(rr.cells() == 9);
  for (std::size_t i = 0; i <= 3; ++i)
    CHECK(rr.nodes[3 * i] == doctest::Approx(gg.nodes[i]).epsilon(1e-14));
  CHECK(rr.horizon == gg.horizon);

  Grid one = make_grid(1.0, 1, GridKind::Uniform);
  Grid four = refine(one, 4);
  CHECK(four.nodes == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("bad configs throw") {
  CHECK_THROWS_AS(make_grid(0.0, 4, GridKind::Uniform), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 0, GridKind::Uniform), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 4, GridKind::Graded, 0.5), std::invalid_argument);
  Grid g = make_grid(1.0, 4, GridKind::Uniform);
  CHECK_THROWS_AS(refine(g, 1), std::invalid_argument);
}
