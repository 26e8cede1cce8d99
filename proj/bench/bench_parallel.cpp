#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vsk/noise.hpp"
#include "vsk/resolvent.hpp"

using namespace vsk;
using clk = std::chrono::steady_clock;

static double seconds(clk::time_point a, clk::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

int main() {
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled\n");
#endif

  {
    const Grid g = make_grid(1.0, 384, GridKind::Uniform);
    const Kernel k = power_kernel(1.0, 0.3, 0.2);
    auto t0 = clk::now();
    const auto rs = resolvent_sum_serial(k, g);
    auto t1 = clk::now();
    const auto rp = resolvent_sum(k, g);
    auto t2 = clk::now();
    double diff = 0.0;
    for (std::size_t i = 0; i < rs.table.values.size(); ++i)
      diff = std::max(diff,
                      std::abs(rs.table.values[i] - rp.table.values[i]));
    std::printf("resolvent N=384:  serial %.3fs  parallel %.3fs  speedup %.2fx  maxdiff %.2e\n",
                seconds(t0, t1), seconds(t1, t2),
                seconds(t0, t1) / seconds(t1, t2), diff);
  }

  {
    const Grid g = make_grid(1.0, 256, GridKind::Uniform);
    const auto w = sample_wiener(g, 1, 2000, 42);
    auto t0 = clk::now();
    const auto fs = fbm_from_wiener_serial(w, 0.7);
    auto t1 = clk::now();
    const auto fp = fbm_from_wiener(w, 0.7);
    auto t2 = clk::now();
    double diff = 0.0;
    for (std::size_t p = 0; p < fs.paths; ++p)
      for (std::size_t i = 0; i < fs.increments[p].size(); ++i)
        diff = std::max(diff, std::abs(fs.increments[p][i] - fp.increments[p][i]));
    std::printf("fbm transform N=256 P=2000:  serial %.3fs  parallel %.3fs  speedup %.2fx  maxdiff %.2e\n",
                seconds(t0, t1), seconds(t1, t2),
                seconds(t0, t1) / seconds(t1, t2), diff);
  }

  {
    const Grid g = make_grid(1.0, 768, GridKind::Uniform);
    const Kernel k = circle_kernel(0.5);
    auto t0 = clk::now();
    const auto ws = kernel_weights_serial(k, g);
    auto t1 = clk::now();
    const auto wp = kernel_weights(k, g);
    auto t2 = clk::now();
    double diff = 0.0;
    for (std::size_t i = 0; i < ws.values.size(); ++i)
      diff = std::max(diff, std::abs(ws.values[i] - wp.values[i]));
    std::printf("cell weights N=768:  serial %.3fs  parallel %.3fs  speedup %.2fx  maxdiff %.2e\n",
                seconds(t0, t1), seconds(t1, t2),
                seconds(t0, t1) / seconds(t1, t2), diff);
  }
  return 0;
}
