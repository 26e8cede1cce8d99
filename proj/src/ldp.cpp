#include "vsk/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vsk {

double control_norm(const Control& h) { return std::sqrt(h.norm_sq()); }

namespace {

// coarse parameter vector theta (M cells x m dims) -> control on the solve grid
Control expand_control(const std::vector<double>& theta, std::size_t M,
                       std::size_t m, const Grid& grid) {
  Control h = zero_control(grid, m);
  const double cw = grid.horizon / static_cast<double>(M);
  for (std::size_t j = 0; j < grid.cells(); ++j) {
    const double mid = 0.5 * (grid.nodes[j] + grid.nodes[j + 1]);
    std::size_t cell = std::min(M - 1, static_cast<std::size_t>(mid / cw));
    for (std::size_t k = 0; k < m; ++k)
      h.hdot[j * m + k] = theta[cell * m + k];
  }
  return h;
}

double coarse_norm_sq(const std::vector<double>& theta, std::size_t M,
                      std::size_t m, double T) {
  double s = 0.0;
  for (double v : theta) s += v * v;
  return s * T / static_cast<double>(M);
}

// standard Nelder-Mead simplex; returns best point, records best-so-far trace
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double scale,
                                std::size_t max_evals, double tol,
                                std::size_t& evals, std::vector<double>* trace) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += scale;
  for (std::size_t i = 0; i <= n; ++i) {
    fv[i] = f(pts[i]);
    ++evals;
  }
  auto record = [&]() {
    if (trace) trace->push_back(*std::min_element(fv.begin(), fv.end()));
  };
  record();
  while (evals < max_evals) {
    // order
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    if (fv[idx[n]] - fv[idx[0]] < tol) break;
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[idx[i]][k];
    for (auto& v : centroid) v /= static_cast<double>(n);
    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k)
        p[k] = centroid[k] + t * (centroid[k] - pts[idx[n]][k]);
      return p;
    };
    const auto xr = blend(1.0);
    const double fr = f(xr);
    ++evals;
    if (fr < fv[idx[0]]) {
      const auto xe = blend(2.0);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[idx[n]] = xe;
        fv[idx[n]] = fe;
      } else {
        pts[idx[n]] = xr;
        fv[idx[n]] = fr;
      }
    } else if (fr < fv[idx[n - 1]]) {
      pts[idx[n]] = xr;
      fv[idx[n]] = fr;
    } else {
      const auto xc = blend(fr < fv[idx[n]] ? 0.5 : -0.5);
      const double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, fv[idx[n]])) {
        pts[idx[n]] = xc;
        fv[idx[n]] = fc;
      } else {  // shrink toward the best vertex
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k)
            pts[idx[i]][k] = 0.5 * (pts[idx[i]][k] + pts[idx[0]][k]);
          fv[idx[i]] = f(pts[idx[i]]);
          ++evals;
        }
      }
    }
    record();
  }
  const std::size_t best =
      std::min_element(fv.begin(), fv.end()) - fv.begin();
  return pts[best];
}

struct Skeleton {
  const Coefficients& c;
  const Grid& grid;
  std::size_t M;

  Vec terminal(const std::vector<double>& theta) const {
    const Control h = expand_control(theta, M, c.m, grid);
    const PathResult r = controlled_solve(c, h, nullptr, 0.0, {});
    Vec out(c.d);
    for (std::size_t k = 0; k < c.d; ++k)
      out[k] = r.at(0, grid.cells(), k);
    return out;
  }
};

double target_residual(const Vec& terminal, const TerminalTarget& tg) {
  double s = 0.0;
  for (std::size_t k = 0; k < tg.y.size(); ++k) {
    const double d = terminal[k] - tg.y[k];
    s += d * d;
  }
  return std::max(0.0, std::sqrt(s) - tg.tolerance);
}

}  // namespace

RateEstimate rate_minimize(const Coefficients& c, const Grid& grid,
                           const TerminalTarget& target, std::size_t M,
                           const OptimizerConfig& opt) {
  if (M < 1) throw std::invalid_argument("rate_minimize: M >= 1");
  Skeleton sk{c, grid, M};
  const std::size_t dim = M * c.m;
  const double T = grid.horizon;

  RateEstimate est;
  est.h_star = zero_control(grid, c.m);

  // coarse pre-scan over constant controls along each noise axis
  std::vector<double> best0(dim, 0.0);
  double best_norm_sq = std::numeric_limits<double>::infinity();
  double best_res = target_residual(sk.terminal(std::vector<double>(dim, 0.0)),
                                    target);
  ++est.evaluations;
  double i_guess = 0.5;
  for (std::size_t k = 0; k < c.m; ++k) {
    for (double v = -6.0; v <= 6.0 + 1e-12; v += 0.25) {
      std::vector<double> theta(dim, 0.0);
      for (std::size_t cell = 0; cell < M; ++cell) theta[cell * c.m + k] = v;
      const double res = target_residual(sk.terminal(theta), target);
      ++est.evaluations;
      const double nsq = v * v * T;
      if (res == 0.0 && nsq < best_norm_sq) {
        best_norm_sq = nsq;
        best0 = theta;
        best_res = 0.0;
      } else if (best_res > 0.0 && res < best_res) {
        best_res = res;
        best0 = theta;
      }
    }
  }
  if (std::isfinite(best_norm_sq)) i_guess = 0.5 * best_norm_sq;
  const double ball =
      opt.ball_norm > 0.0
          ? opt.ball_norm
          : std::max(4.0 * std::sqrt(2.0 * i_guess), 2.0);

  double mu = 10.0;
  std::vector<double> theta = best0;
  const double accept = target.tolerance / 10.0;
  for (int round = 0; round < 12 && est.evaluations < opt.max_evals; ++round) {
    auto objective = [&](const std::vector<double>& th) {
      const double r = target_residual(sk.terminal(th), target);
      return 0.5 * coarse_norm_sq(th, M, c.m, T) + mu * r * r;
    };
    double scale = 0.0;
    for (double v : theta) scale = std::max(scale, std::fabs(v));
    scale = std::max(0.25, 0.2 * scale);
    theta = nelder_mead(objective, theta, scale, opt.max_evals, opt.tol,
                        est.evaluations, &est.best_trace);
    const double res = target_residual(sk.terminal(theta), target);
    ++est.evaluations;
    const double nrm = std::sqrt(coarse_norm_sq(theta, M, c.m, T));
    if (res < accept && nrm <= ball) {
      est.feasible = true;
      est.I = 0.5 * nrm * nrm;
      est.penalty_residual = res;
      est.h_star = expand_control(theta, M, c.m, grid);
      break;
    }
    mu *= 10.0;
  }
  return est;
}

RateEstimate variational_minimize(const Coefficients& c, const Grid& grid,
                                  const PathFunctional& G, std::size_t M,
                                  const OptimizerConfig& opt) {
  Skeleton sk{c, grid, M};
  const std::size_t dim = M * c.m;
  const double T = grid.horizon;
  RateEstimate est;

  auto objective = [&](const std::vector<double>& th) {
    const Control h = expand_control(th, M, c.m, grid);
    const PathResult r = controlled_solve(c, h, nullptr, 0.0, {});
    return G(r, 0) + 0.5 * coarse_norm_sq(th, M, c.m, T);
  };
  // pre-scan over constant controls
  std::vector<double> theta(dim, 0.0);
  double best = objective(theta);
  ++est.evaluations;
  for (std::size_t k = 0; k < c.m; ++k) {
    for (double v = -6.0; v <= 6.0 + 1e-12; v += 0.5) {
      std::vector<double> t2(dim, 0.0);
      for (std::size_t cell = 0; cell < M; ++cell) t2[cell * c.m + k] = v;
      const double f = objective(t2);
      ++est.evaluations;
      if (f < best) {
        best = f;
        theta = t2;
      }
    }
  }
  theta = nelder_mead(objective, theta, 0.5, opt.max_evals, opt.tol,
                      est.evaluations, &est.best_trace);
  est.feasible = true;
  est.I = objective(theta);
  ++est.evaluations;
  est.h_star = expand_control(theta, M, c.m, grid);
  return est;
}

std::vector<SmallNoiseRow> small_noise_estimate(
    const Coefficients& c, const Grid& grid,
    const std::vector<double>& eps_list,
    const std::function<bool(const Vec& terminal)>& event, std::size_t P,
    std::uint64_t seed) {
  std::vector<SmallNoiseRow> rows;
  const Control h0 = zero_control(grid, c.m);
  const std::size_t N = grid.cells();
  std::size_t level = 0;
  bool any = false;
  for (double eps : eps_list) {
    const auto noise =
        sample_wiener(grid, c.m, P, seed + 0x9e3779b97f4a7c15ULL * level++);
    const auto r = controlled_solve(c, h0, &noise, eps, {});
    std::size_t hits = 0;
    Vec terminal(c.d);
    for (std::size_t p = 0; p < P; ++p) {
      for (std::size_t k = 0; k < c.d; ++k) terminal[k] = r.at(p, N, k);
      if (event(terminal)) ++hits;
    }
    SmallNoiseRow row;
    row.eps = eps;
    if (hits < 10) {
      row.skipped = true;
      rows.push_back(row);
      continue;
    }
    any = true;
    const double n = static_cast<double>(P);
    const double p_hat = static_cast<double>(hits) / n;
    row.p_hat = p_hat;
    row.eps_log_p = eps * std::log(p_hat);
    const double z = 1.959963985;
    const double denom = 1.0 + z * z / n;
    const double center = (p_hat + z * z / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p_hat * (1.0 - p_hat) / n + z * z / (4.0 * n * n)) /
        denom;
    row.ci_lo = eps * std::log(center + half);  // larger p -> larger eps*log p
    row.ci_hi = eps * std::log(std::max(center - half, 1e-300));
    if (row.ci_lo > row.ci_hi) std::swap(row.ci_lo, row.ci_hi);
    rows.push_back(row);
  }
  if (!any)
    throw std::runtime_error("small_noise_estimate: every level was skipped");
  return rows;
}

std::vector<LaplaceRow> laplace_estimate(const Coefficients& c,
                                         const Grid& grid,
                                         const PathFunctional& G,
                                         double g_bound,
                                         const std::vector<double>& eps_list,
                                         std::size_t P, std::uint64_t seed) {
  std::vector<LaplaceRow> rows;
  const Control h0 = zero_control(grid, c.m);
  std::size_t level = 0;
  for (double eps : eps_list) {
    const auto noise =
        sample_wiener(grid, c.m, P, seed + 0x9e3779b97f4a7c15ULL * level++);
    const auto r = controlled_solve(c, h0, &noise, eps, {});
    LaplaceRow row;
    row.eps = eps;
    std::vector<double> expo(P);
    double emax = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < P; ++p) {
      const double g = G(r, p);
      if (!std::isfinite(g) || std::fabs(g) > g_bound + 1e-9) {
        row.overflow = true;
        break;
      }
      expo[p] = -g / eps;
      emax = std::max(emax, expo[p]);
    }
    if (!row.overflow) {
      double acc = 0.0;
      for (double e : expo) acc += std::exp(e - emax);
      row.estimate =
          eps * (emax + std::log(acc / static_cast<double>(P)));
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vsk
