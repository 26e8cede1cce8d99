#include "vsk/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vsk/tritable.hpp"

namespace vsk {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// one substream per (seed, path); engine state advances via splitmix64
struct PathRng {
  std::uint64_t state;
  bool have_spare = false;
  double spare = 0.0;

  PathRng(std::uint64_t seed, std::uint64_t path) {
    std::uint64_t s = seed ^ (0xd1342543de82ef95ULL * (path + 1));
    // warm up so nearby path ids decorrelate
    state = s;
    splitmix64(state);
    splitmix64(state);
  }

  double uniform() {  // in (0,1)
    return (static_cast<double>(splitmix64(state) >> 11) + 0.5) * 0x1.0p-53;
  }

  double gaussian() {  // Box-Muller
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare = r * std::sin(a);
    have_spare = true;
    return r * std::cos(a);
  }
};

}  // namespace

NoiseEnsemble sample_wiener(const Grid& grid, std::size_t m, std::size_t P,
                            std::uint64_t seed) {
  if (m < 1 || P < 1)
    throw std::invalid_argument("sample_wiener: need m >= 1, P >= 1");
  NoiseEnsemble e;
  e.grid = grid;
  e.dims = m;
  e.paths = P;
  e.seed = seed;
  e.kind = NoiseKind::Wiener;
  const std::size_t N = grid.cells();
  e.increments.assign(P, {});
  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(P);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < np; ++p) {
    PathRng rng(seed, static_cast<std::uint64_t>(p));
    auto& row = e.increments[p];
    row.resize(N * m);
    for (std::size_t j = 0; j < N; ++j) {
      const double sd = std::sqrt(grid.width(j));
      for (std::size_t k = 0; k < m; ++k) row[j * m + k] = sd * rng.gaussian();
    }
  }
  return e;
}

namespace {

NoiseEnsemble fbm_impl(const NoiseEnsemble& e, double H, bool parallel) {
  if (e.kind != NoiseKind::Wiener)
    throw std::invalid_argument("fbm_from_wiener: input must be a wiener ensemble");
  if (!(H > 0.0 && H < 1.0))
    throw std::invalid_argument("fbm_from_wiener: H must be in (0,1)");

  const Grid& grid = e.grid;
  const std::size_t N = grid.cells();
  const std::size_t m = e.dims;
  const Kernel kh = fbm_kernel(H);

  // cell-averaged kernel: A(i,j) = (1/dt_j) int_{cell j} K_H(t_i, s) ds
  TriTable A(grid, "fbm cell averages");
  const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(N);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 1; i <= nn; ++i) {
    const double t = grid.nodes[i];
    for (std::ptrdiff_t j = 0; j < i; ++j)
      A.at(i, j) =
          cell_integral(kh, t, grid.nodes[j], grid.nodes[j + 1]) / grid.width(j);
  }

  NoiseEnsemble out;
  out.grid = grid;
  out.dims = m;
  out.paths = e.paths;
  out.seed = e.seed;
  out.kind = NoiseKind::Fbm;
  out.hurst = H;
  out.base = std::make_shared<NoiseEnsemble>(e);
  out.increments.assign(e.paths, {});

  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(e.paths);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t p = 0; p < np; ++p) {
    auto& row = out.increments[p];
    row.resize(N * m);
    std::vector<double> prev(m, 0.0);
    for (std::size_t i = 1; i <= N; ++i) {
      for (std::size_t k = 0; k < m; ++k) {
        double wh = 0.0;
        for (std::size_t j = 0; j < i; ++j)
          wh += A.at(i, j) * e.dW(p, j, k);
        row[(i - 1) * m + k] = wh - prev[k];
        prev[k] = wh;
      }
    }
  }
  return out;
}

}  // namespace

NoiseEnsemble fbm_from_wiener(const NoiseEnsemble& e, double H) {
  return fbm_impl(e, H, true);
}
NoiseEnsemble fbm_from_wiener_serial(const NoiseEnsemble& e, double H) {
  return fbm_impl(e, H, false);
}

NoiseEnsemble refine_brownian_bridge(const NoiseEnsemble& e,
                                     std::uint64_t bridge_seed) {
  if (e.kind != NoiseKind::Wiener)
    throw std::invalid_argument("refine_brownian_bridge: wiener input required");
  NoiseEnsemble out;
  out.grid = refine(e.grid, 2);
  out.dims = e.dims;
  out.paths = e.paths;
  out.seed = e.seed;
  out.kind = NoiseKind::Wiener;
  const std::size_t N = e.grid.cells();
  const std::size_t m = e.dims;
  out.increments.assign(e.paths, {});
  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(e.paths);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < np; ++p) {
    PathRng rng(bridge_seed, static_cast<std::uint64_t>(p));
    auto& row = out.increments[p];
    row.resize(2 * N * m);
    for (std::size_t j = 0; j < N; ++j) {
      const double w0 = out.grid.width(2 * j);
      const double w1 = out.grid.width(2 * j + 1);
      for (std::size_t k = 0; k < m; ++k) {
        const double dw = e.dW(p, j, k);
        // conditional split of dw across the two half-cells
        const double mean0 = dw * w0 / (w0 + w1);
        const double var0 = w0 * w1 / (w0 + w1);
        const double d0 = mean0 + std::sqrt(var0) * rng.gaussian();
        row[(2 * j) * m + k] = d0;
        row[(2 * j + 1) * m + k] = dw - d0;
      }
    }
  }
  return out;
}

CovarianceResult empirical_covariance(const NoiseEnsemble& e,
                                      const std::vector<std::size_t>& nodes) {
  if (e.paths < 100)
    throw std::invalid_argument("empirical_covariance: need at least 100 paths");
  const std::size_t q = nodes.size();
  const std::size_t n = e.paths * e.dims;
  // path values at requested nodes, one sample per (path, dim)
  std::vector<std::vector<double>> vals(q, std::vector<double>(n));
  for (std::size_t a = 0; a < q; ++a) {
    std::size_t idx = 0;
    for (std::size_t p = 0; p < e.paths; ++p)
      for (std::size_t k = 0; k < e.dims; ++k)
        vals[a][idx++] = e.value(p, nodes[a], k);
  }
  CovarianceResult res;
  res.nodes = nodes;
  res.cov.assign(q, std::vector<double>(q, 0.0));
  res.se.assign(q, std::vector<double>(q, 0.0));
  std::vector<double> mean(q, 0.0);
  for (std::size_t a = 0; a < q; ++a) {
    for (double v : vals[a]) mean[a] += v;
    mean[a] /= static_cast<double>(n);
  }
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t b = a; b < q; ++b) {
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double prod = (vals[a][i] - mean[a]) * (vals[b][i] - mean[b]);
        s1 += prod;
        s2 += prod * prod;
      }
      const double c = s1 / static_cast<double>(n - 1);
      const double var_prod =
          s2 / static_cast<double>(n) - (s1 / static_cast<double>(n)) * (s1 / static_cast<double>(n));
      res.cov[a][b] = res.cov[b][a] = c;
      res.se[a][b] = res.se[b][a] =
          std::sqrt(std::max(var_prod, 0.0) / static_cast<double>(n));
    }
  }
  return res;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p in (0,1)");
  // Acklam's approximation, |rel err| < 1.2e-9
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double qq = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * qq + c[1]) * qq + c[2]) * qq + c[3]) * qq + c[4]) * qq + c[5]) /
           ((((d[0] * qq + d[1]) * qq + d[2]) * qq + d[3]) * qq + 1.0);
  }
  if (p > 1.0 - plow) return -normal_quantile(1.0 - p);
  const double qq = p - 0.5;
  const double r = qq * qq;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * qq /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double ks_statistic_standard_normal(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-samples[i] / std::sqrt(2.0));
    d = std::max(d, std::fabs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - cdf));
  }
  return d;
}

}  // namespace vsk
