#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "vsk/quadrature.hpp"
#include "vsk/resolvent.hpp"

using namespace vsk;

TEST_CASE("iterated kernels: n=1 is the kernel itself") {
  Grid g = make_grid(1.0, 16, GridKind::Uniform);
  auto tables = iterated_kernels(constant_kernel(2.0), g, 1);
  REQUIRE(tables.size() == 1);
  for (std::size_t i = 0; i < tables[0].rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      CHECK(tables[0].at(i, j) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("iterated kernels of the constant kernel") {
  const double c = 1.5;
  Grid g = make_grid(1.0, 128, GridKind::Uniform);
  auto tables = iterated_kernels(constant_kernel(c), g, 4);
  for (int n = 1; n <= 4; ++n) {
    const auto& tab = tables[n - 1];
    // check at a few well-separated pairs
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{128, 0},
                        {128, 64}, {96, 32}}) {
      const double want =
          oracle::constant_iterated(c, n, g.nodes[i], g.nodes[j]);
      CHECK(tab.at(i, j) == doctest::Approx(want).epsilon(0.05));
    }
  }
}

TEST_CASE("iterated kernels converge under refinement") {
  const double c = 1.5;
  double prev_err = 0.0;
  for (std::size_t N : {64, 128}) {
    Grid g = make_grid(1.0, N, GridKind::Uniform);
    auto tables = iterated_kernels(constant_kernel(c), g, 3);
    const double got = tables[2].at(N, 0);
    const double want = oracle::constant_iterated(c, 3, 1.0, 0.0);
    const double err = std::fabs(got - want);
    if (prev_err > 0.0) CHECK(err < 0.7 * prev_err);
    prev_err = err;
  }
}

TEST_CASE("separable second iterate matches quadrature oracle") {
  Profile h = exp_profile(1.0);
  Grid g = make_grid(1.0, 128, GridKind::Uniform);
  auto tables = iterated_kernels(separable_kernel(h), g, 2);
  for (auto [i, j] : {std::pair<std::size_t, std::size_t>{128, 0}, {96, 32}}) {
    const double t = g.nodes[i], s = g.nodes[j];
    const double want =
        h.eval(s) * quad::adaptive(h.eval, s, t);  // h(s) int_s^t h
    CHECK(tables[1].at(i, j) == doctest::Approx(want).epsilon(0.05));
  }
}

TEST_CASE("constant kernel resolvent closed form") {
  const double c = 1.0;
  Grid g = make_grid(1.0, 256, GridKind::Uniform);
  auto R = resolvent_sum(constant_kernel(c), g, 1e-12);
  for (auto [i, j] : {std::pair<std::size_t, std::size_t>{256, 0}, {200, 100},
                      {64, 32}}) {
    const double want = c * std::exp(c * (g.nodes[i] - g.nodes[j]));
    CHECK(R.table.at(i, j) == doctest::Approx(want).epsilon(0.02));
  }
  CHECK(R.tail_bound < 1e-12);
  // decay record eventually decreasing
  bool decreasing = true;
  for (std::size_t n = 3; n < R.decay_record.size(); ++n)
    decreasing = decreasing && R.decay_record[n] < R.decay_record[n - 1];
  CHECK(decreasing);
}

TEST_CASE("separable constant-profile resolvent closed form") {
  const double c = 0.8;
  Grid g = make_grid(1.0, 256, GridKind::Uniform);
  auto R = resolvent_sum(separable_kernel(constant_profile(c)), g, 1e-12);
  const double want = c * std::exp(c * (1.0 - 0.25));
  CHECK(R.table.at(256, 64) == doctest::Approx(want).epsilon(0.02));
}

TEST_CASE("parallel and serial resolvents agree bitwise") {
  Grid g = make_grid(1.0, 64, GridKind::Uniform);
  Kernel k = power_kernel(0.5, 0.3, 0.2);
  auto a = resolvent_sum(k, g, 1e-10);
  auto b = resolvent_sum_serial(k, g, 1e-10);
  REQUIRE(a.table.values.size() == b.table.values.size());
  for (std::size_t idx = 0; idx < a.table.values.size(); ++idx)
    CHECK(a.table.values[idx] == b.table.values[idx]);
}

TEST_CASE("circle kernel series: subcritical converges, critical fails") {
  Grid g = make_grid(1.0, 128, GridKind::Uniform);
  auto R = resolvent_sum(circle_kernel(0.5), g, 1e-9, 400);
  // int_0^t r(t,s) ds stays bounded
  for (std::size_t i = 1; i <= 128; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j)
      acc += R.table.at(i, j) * g.width(j);
    CHECK(acc < 10.0);
  }
  CHECK_THROWS_AS(resolvent_sum(circle_kernel(1.0), g, 1e-9, 60),
                  ConvergenceError);
}

TEST_CASE("zero kernel: resolvent and identity residual vanish") {
  Grid g = make_grid(1.0, 32, GridKind::Uniform);
  auto R = resolvent_sum(constant_kernel(0.0), g, 1e-15, 5);
  for (double v : R.table.values) CHECK(v == 0.0);
  CHECK(identity_residual(constant_kernel(0.0), R) == 0.0);
}

TEST_CASE("identity residual shrinks under refinement") {
  Kernel k = constant_kernel(1.0);
  Grid g = make_grid(1.0, 32, GridKind::Uniform);
  const double r1 = identity_residual(k, resolvent_sum(k, g, 1e-12));
  const double r2 = identity_residual(k, resolvent_sum(k, refine(g, 2), 1e-12));
  CHECK(r2 < r1 / 1.5);
  CHECK(r1 < 0.2);
}

TEST_CASE("convolution resolvent: exponential closed form") {
  Grid g = make_grid(1.0, 512, GridKind::Uniform);
  for (double c : {0.25, 0.5, 0.9}) {
    auto res = convolution_resolvent(exp_profile(c), g);
    CHECK(!res.blew_up);
    for (std::size_t i = 0; i <= 512; i += 64) {
      const double want = c * std::exp(-(1.0 - c) * g.nodes[i]);
      CHECK(res.a[i] == doctest::Approx(want).epsilon(0.01));
    }
  }
}

TEST_CASE("convolution resolvent: zero profile and supercritical growth") {
  Grid g = make_grid(1.0, 64, GridKind::Uniform);
  auto zero = convolution_resolvent(constant_profile(0.0), g);
  for (double v : zero.a) CHECK(v == 0.0);

  Grid glong = make_grid(60.0, 1024, GridKind::Uniform);
  auto grow = convolution_resolvent(exp_profile(1.1), glong);
  CHECK(grow.a[1024] > grow.a[512]);
  CHECK(grow.a[1024] > 10.0);
}

TEST_CASE("gronwall bound closed form and domination") {
  const double c = 1.0;
  Grid g = make_grid(1.0, 256, GridKind::Uniform);
  auto R = resolvent_sum(constant_kernel(c), g, 1e-13);

  std::vector<double> zero(257, 0.0), one(257, 1.0);
  for (double v : gronwall_bound(zero, R)) CHECK(v == 0.0);

  auto b = gronwall_bound(one, R);
  for (std::size_t i = 0; i <= 256; i += 32)
    CHECK(b[i] == doctest::Approx(std::exp(c * g.nodes[i])).epsilon(0.02));

  // equality case: the bound dominates and tracks the forward-substitution
  // solution to discretization order
  auto x = linear_volterra_solve(one, constant_kernel(c), g);
  for (std::size_t i = 0; i <= 256; ++i) {
    CHECK(b[i] == doctest::Approx(x[i]).epsilon(2e-3));
    CHECK(b[i] >= x[i] - 1e-9);
  }
}

TEST_CASE("seeded fixed points of the singular examples") {
  // circle C0=1: x(t)=t survives the sweeps
  Grid g = make_grid(1.0, 128, GridKind::Uniform);
  std::vector<double> gzero(129, 0.0), seed(129);
  for (std::size_t i = 0; i <= 128; ++i) seed[i] = g.nodes[i];
  auto fp = fixed_point_volterra(gzero, circle_kernel(1.0), g, seed, 0.5, 1e-4);
  for (std::size_t i = 16; i <= 128; i += 16)
    CHECK(fp.x[i] == doctest::Approx(g.nodes[i]).epsilon(0.05));

  // power(1/2,1/2,1/2): x(t)=sqrt(t)
  Grid gg = make_grid(1.0, 128, GridKind::Graded, 2.0);
  std::vector<double> gz(129, 0.0), seed2(129);
  for (std::size_t i = 0; i <= 128; ++i) seed2[i] = std::sqrt(gg.nodes[i]);
  auto fp2 = fixed_point_volterra(gz, power_kernel(0.5, 0.5, 0.5), gg, seed2,
                                  0.5, 1e-4);
  for (std::size_t i = 16; i <= 128; i += 16)
    CHECK(fp2.x[i] == doctest::Approx(std::sqrt(gg.nodes[i])).epsilon(0.05));

  // contraction case a+b<1: any bounded seed collapses to zero
  std::vector<double> ones(129, 1.0);
  auto fp3 = fixed_point_volterra(gz, power_kernel(0.5, 0.3, 0.2), gg, ones,
                                  0.5, 1e-8, 2000);
  for (double v : fp3.x) CHECK(std::fabs(v) < 1e-4);
}

TEST_CASE("material resolvent: ODE and trivial cases") {
  Grid g = make_grid(1.0, 256, GridKind::Uniform);
  auto s1 = material_resolvent(frac_profile(1.0), 2.0, g);  // a == 1
  for (std::size_t i = 0; i <= 256; i += 32)
    CHECK(s1[i] == doctest::Approx(std::exp(-2.0 * g.nodes[i])).epsilon(0.02));

  auto s0 = material_resolvent(frac_profile(0.5), 0.0, g);
  for (double v : s0) CHECK(v == 1.0);
}

TEST_CASE("material resolvent: Mittag-Leffler") {
  Grid g = make_grid(1.0, 512, GridKind::Graded, 2.0);
  auto s = material_resolvent(frac_profile(0.5), 1.0, g);
  for (std::size_t i = 1; i <= 512; i += 37) {
    const double want =
        oracle::mittag_leffler(0.5, -std::sqrt(g.nodes[i]));
    CHECK(s[i] == doctest::Approx(want).epsilon(0.02));
  }
}
