#include <cmath>
#include <stdexcept>

#include "vsk/resolvent.hpp"
#include "vsk/sde.hpp"

namespace vsk {

MomentReport moment_report(const PathResult& r, const Coefficients& c,
                           const std::vector<double>& p_list) {
  for (double p : p_list)
    if (p < 2.0)
      throw std::invalid_argument("moment_report: exponents must be >= 2");
  const std::size_t N = r.grid.cells();
  MomentReport rep;
  rep.p_list = p_list;
  rep.moment.assign(p_list.size(), std::vector<double>(N + 1, 0.0));
  rep.se.assign(p_list.size(), std::vector<double>(N + 1, 0.0));
  rep.omitted.assign(N + 1, 0);
  for (std::size_t i = 0; i < r.start_index; ++i) rep.omitted[i] = 1;

  for (std::size_t i = r.start_index; i <= N; ++i) {
    std::size_t n = 0;
    for (std::size_t p = 0; p < r.paths; ++p)
      if (r.tau_index[p] > i) ++n;
    if (n < 100) {
      rep.omitted[i] = 1;
      continue;
    }
    for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
      double s1 = 0.0, s2 = 0.0;
      for (std::size_t p = 0; p < r.paths; ++p) {
        if (r.tau_index[p] <= i) continue;
        const double v = std::pow(r.norm_at(p, i), p_list[pi]);
        s1 += v;
        s2 += v * v;
      }
      const double mean = s1 / static_cast<double>(n);
      const double var =
          std::max(0.0, s2 / static_cast<double>(n) - mean * mean);
      rep.moment[pi][i] = mean;
      rep.se[pi][i] = std::sqrt(var / static_cast<double>(n));
    }
  }

  if (c.kappa1) {
    // envelope b = c0 (1 + int kappa1 b) with c0 fitted on the early nodes
    double c0 = 0.0;
    std::size_t seen = 0;
    for (std::size_t i = r.start_index; i <= N && seen < std::max<std::size_t>(1, N / 10); ++i) {
      if (rep.omitted[i]) continue;
      c0 = std::max(c0, rep.moment[0][i]);
      ++seen;
    }
    if (c0 == 0.0) c0 = 1.0;
    std::vector<double> g(N + 1, c0);
    rep.bound = linear_volterra_solve(g, *c.kappa1, r.grid);
    for (std::size_t i = r.start_index; i <= N; ++i) {
      if (rep.omitted[i]) continue;
      if (rep.moment[0][i] > 10.0 * rep.bound[i]) rep.bounded = false;
    }
  }
  return rep;
}

HolderReport holder_report(const PathResult& r, double p,
                           std::size_t max_level) {
  if (r.grid.kind != GridKind::Uniform)
    throw std::invalid_argument("holder_report: uniform grid required");
  const std::size_t N = r.grid.cells();
  if (N < 256 || r.paths < 100)
    throw std::invalid_argument("holder_report: need N >= 256 and P >= 100");

  HolderReport rep;
  const double dt = r.grid.width(0);
  for (std::size_t lev = 0; lev <= max_level; ++lev) {
    const std::size_t lag = std::size_t{1} << lev;
    if (lag > N / 8) break;
    double acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t q = 0; q < r.paths; ++q) {
      for (std::size_t i = r.start_index; i + lag <= N; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < r.d; ++k) {
          const double d = r.at(q, i + lag, k) - r.at(q, i, k);
          s += d * d;
        }
        acc += std::pow(std::sqrt(s), p);
        ++cnt;
      }
    }
    rep.lags.push_back(lag * dt);
    rep.mean_pow.push_back(acc / static_cast<double>(cnt));
  }

  // least-squares slope of log mean_pow against log lag, divided by p
  const std::size_t n = rep.lags.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(rep.lags[i]);
    const double y = std::log(std::max(rep.mean_pow[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(n);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  rep.exponent = slope / p;
  double sse = 0.0;
  const double intercept = (sy - slope * sx) / nn;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(rep.lags[i]);
    const double y = std::log(std::max(rep.mean_pow[i], 1e-300));
    const double e = y - (intercept + slope * x);
    sse += e * e;
  }
  const double sxx_c = sxx - sx * sx / nn;
  rep.ci_halfwidth =
      n > 2 ? 2.0 * std::sqrt(sse / (nn - 2.0) / sxx_c) / p : 0.0;
  return rep;
}

std::vector<DependenceRow> dependence_experiment(
    const std::vector<Coefficients>& c_seq, const Coefficients& c,
    const NoiseEnsemble& noise, const SolveConfig& cfg,
    const std::vector<double>& eps_levels) {
  const PathResult base = cfg.scheme == Scheme::Picard
                              ? picard_solve(c, noise, cfg)
                              : euler_solve(c, noise, cfg);
  const std::size_t N = noise.grid.cells();
  std::vector<DependenceRow> out;
  for (std::size_t mi = 0; mi < c_seq.size(); ++mi) {
    const PathResult xm = cfg.scheme == Scheme::Picard
                              ? picard_solve(c_seq[mi], noise, cfg)
                              : euler_solve(c_seq[mi], noise, cfg);
    DependenceRow row;
    row.m = mi + 1;
    for (double eps : eps_levels) {
      std::size_t hits = 0;
      for (std::size_t p = 0; p < noise.paths; ++p) {
        double sup = 0.0;
        for (std::size_t i = base.start_index; i <= N; ++i) {
          double s = 0.0;
          for (std::size_t k = 0; k < c.d; ++k) {
            const double d = xm.at(p, i, k) - base.at(p, i, k);
            s += d * d;
          }
          sup = std::max(sup, std::sqrt(s));
        }
        if (sup >= eps) ++hits;
      }
      row.exceedance.push_back(static_cast<double>(hits) /
                               static_cast<double>(noise.paths));
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<NonexplosionRow> nonexplosion_report(
    const Coefficients& c, const NoiseEnsemble& noise,
    const std::vector<double>& radii, const SolveConfig& cfg) {
  if (!c.kappa1)
    throw std::invalid_argument(
        "nonexplosion_report: linear-growth kernel metadata required");
  const std::size_t N = noise.grid.cells();
  std::vector<NonexplosionRow> out;
  for (double R : radii) {
    SolveConfig c2 = cfg;
    c2.stop_radius = R;
    const PathResult r = euler_solve(c, noise, c2);
    std::size_t stopped = 0;
    for (std::size_t p = 0; p < noise.paths; ++p)
      if (r.tau_index[p] <= N) ++stopped;
    out.push_back({R, static_cast<double>(stopped) /
                          static_cast<double>(noise.paths)});
  }
  return out;
}

}  // namespace vsk
