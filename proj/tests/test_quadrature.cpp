#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vsk/quadrature.hpp"

using vsk::quad::adaptive;
using vsk::quad::singular;

TEST_CASE("smooth integrals") {
  CHECK(adaptive([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(adaptive([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("left endpoint power singularity") {
  // int_0^1 x^{-1/2} dx = 2
  double v = singular([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                      0.5, 0.0);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("both endpoints singular") {
  // int_0^1 x^{-0.3}(1-x)^{-0.6} dx = Beta(0.7, 0.4)
  double v = singular(
      [](double x) { return std::pow(x, -0.3) * std::pow(1.0 - x, -0.6); },
      0.0, 1.0, 0.3, 0.6);
  CHECK(v == doctest::Approx(3.026532290335618).epsilon(1e-9));
}

TEST_CASE("exponent >= 1 rejected") {
  CHECK_THROWS(singular([](double x) { return 1.0 / x; }, 0.0, 1.0, 1.0, 0.0));
}
