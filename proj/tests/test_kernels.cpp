#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vsk/kernel.hpp"
#include "vsk/quadrature.hpp"

using namespace vsk;

namespace {

// exact vs adaptive agreement on random non-degenerate cells
void check_exact_matches_quad(const Kernel& k, double T, int cells = 100) {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int c = 0; c < cells; ++c) {
    const double t = 0.05 * T + 0.95 * T * uni(rng);
    double a = t * uni(rng), b = t * uni(rng);
    if (a > b) std::swap(a, b);
    if (b - a < 1e-3 * t) continue;
    const double exact = cell_integral(k, t, a, b);
    const double quad = cell_integral_quad(k, t, a, b);
    CHECK(exact == doctest::Approx(quad).epsilon(1e-8));
  }
}

}  // namespace

TEST_CASE("constant kernel cell integral") {
  Kernel k = constant_kernel(3.0);
  CHECK(cell_integral(k, 1.0, 0.2, 0.7) == doctest::Approx(1.5).epsilon(1e-14));
  check_exact_matches_quad(k, 2.0);
}

TEST_CASE("circle kernel closed form") {
  Kernel k = circle_kernel(2.0);
  // C0 (pi/2 - asin(0.5))
  CHECK(cell_integral(k, 1.0, 0.5, 1.0) ==
        doctest::Approx(2.0 * (M_PI / 2 - std::asin(0.5))).epsilon(1e-12));
  check_exact_matches_quad(k, 1.0);
}

TEST_CASE("power kernel incomplete-Beta cell integral") {
  Kernel k = power_kernel(0.7, 0.3, 0.2);
  check_exact_matches_quad(k, 1.5);
  // full-triangle integral scales like t^{1-a-b}
  const double v1 = cell_integral(k, 1.0, 0.0, 1.0);
  const double v2 = cell_integral(k, 2.0, 0.0, 2.0);
  CHECK(v2 / v1 == doctest::Approx(std::pow(2.0, 0.5)).epsilon(1e-10));
}

TEST_CASE("semigroup kernel cell integral") {
  Kernel k = semigroup_kernel(1.3, 0.4, 2.0);
  check_exact_matches_quad(k, 1.0);
}

TEST_CASE("non-integrable diagonal rejected") {
  Kernel k = power_kernel(1.0, 0.5, 0.0);
  k.sing.at_diag = 1.2;  // declared non-integrable
  CHECK_THROWS_AS(cell_integral(k, 1.0, 0.5, 1.0), std::domain_error);
}

TEST_CASE("paley-wiener exponential profiles") {
  auto r1 = paley_wiener_check(exp_profile(0.5), 40.0);
  CHECK(r1.integral == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r1.resolvent_integrable);
  auto r2 = paley_wiener_check(exp_profile(1.5), 40.0);
  CHECK(r2.integral == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(!r2.resolvent_integrable);
}

TEST_CASE("paley-wiener loglog profile is integrable") {
  auto r = paley_wiener_check(loglog_profile(1.0), 30.0);
  CHECK(std::isfinite(r.integral));
  CHECK(r.integral > 0.0);
}

TEST_CASE("paley-wiener needs declared decay") {
  Profile p = constant_profile(0.1);  // no tail decay declared
  CHECK_THROWS_AS(paley_wiener_check(p, 10.0), std::domain_error);
}

TEST_CASE("classify power kernel with a+b<1") {
  auto rep = classify(power_kernel(1.0, 0.3, 0.2), 1.0);
  CHECK(rep.verdict == KernelClass::InKGt1);
}

TEST_CASE("classify circle kernel") {
  CHECK(classify(circle_kernel(0.5), 1.0).verdict == KernelClass::InKNotK0);
  CHECK(classify(circle_kernel(1.0), 1.0).verdict == KernelClass::NotInK);
  CHECK(classify(circle_kernel(2.0 / M_PI), 1.0).verdict ==
        KernelClass::Inconclusive);
}

TEST_CASE("classify is monotone in C0 for circle and power") {
  auto rank = [](KernelClass v) {
    switch (v) {
      case KernelClass::InKGt1: return 0;
      case KernelClass::InK0: return 1;
      case KernelClass::InKNotK0: return 2;
      case KernelClass::Inconclusive: return 3;
      case KernelClass::NotInK: return 4;
    }
    return 5;
  };
  int prev = -1;
  for (double c : {0.1, 0.3, 0.5, 0.61, 0.64, 0.8, 1.2}) {
    const int r = rank(classify(circle_kernel(c), 1.0).verdict);
    CHECK(r >= prev);
    prev = r;
  }
  prev = -1;
  for (double c : {0.2, 1.0, 5.0}) {
    const int r = rank(classify(power_kernel(c, 0.3, 0.2), 1.0).verdict);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("fbm kernel H=1/2 is the Brownian kernel") {
  Kernel k = fbm_kernel(0.5);
  CHECK(k.eval(1.0, 0.3) == 1.0);
  CHECK(k.eval(0.7, 0.699) == 1.0);
  CHECK(k.eval(0.5, 0.5) == 0.0);  // s >= t
  CHECK(k.eval(0.5, 0.9) == 0.0);
}

TEST_CASE("fbm kernel variance identity int K^2 = t^{2H}") {
  for (double H : {0.3, 0.5, 0.7}) {
    Kernel k = fbm_kernel(H);
    for (double t : {0.25, 0.5, 1.0}) {
      const double var = quad::singular(
          [&](double s) {
            const double v = k.eval(t, s);
            return v * v;
          },
          0.0, t, std::min(2.0 * k.sing.at_zero, 0.95),
          std::min(2.0 * k.sing.at_diag, 0.95), 1e-9);
      CHECK(var == doctest::Approx(std::pow(t, 2.0 * H)).epsilon(2e-4));
    }
  }
}

TEST_CASE("fbm kernel diagonal blow-up iff H < 1/2") {
  Kernel k3 = fbm_kernel(0.3);
  Kernel k7 = fbm_kernel(0.7);
  const double t = 1.0;
  double prev3 = 0.0;
  for (int kk = 1; kk <= 6; ++kk) {
    const double s = t * (1.0 - std::pow(10.0, -kk));
    const double v3 = k3.eval(t, s);
    CHECK(v3 > prev3);
    prev3 = v3;
    CHECK(k7.eval(t, s) < 2.0);
  }
  CHECK(prev3 > 10.0);
}

TEST_CASE("fbm kernel H out of range") {
  CHECK_THROWS_AS(fbm_kernel(0.0), std::invalid_argument);
  CHECK_THROWS_AS(fbm_kernel(1.0), std::invalid_argument);
}
