#include "vsk/sde.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>

#include "vsk/resolvent.hpp"
#include "vsk/tritable.hpp"

namespace vsk {

double PathResult::norm_at(std::size_t p, std::size_t i) const {
  double s = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double v = at(p, i, c);
    s += v * v;
  }
  return std::sqrt(s);
}

void verify_separable(const Coefficients& c, const Grid& grid,
                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto check = [&](double direct, double declared) {
    const double scale = std::max({std::fabs(direct), std::fabs(declared), 1e-12});
    if (std::fabs(direct - declared) > 1e-8 * scale)
      throw std::logic_error("separable declaration disagrees with direct evaluation");
  };
  for (int trial = 0; trial < 32; ++trial) {
    const double t = grid.horizon * (0.05 + 0.95 * unit(rng));
    const double s = t * (0.05 + 0.9 * unit(rng));
    Vec x(c.d);
    for (auto& v : x) v = 2.0 * unit(rng) - 1.0;
    if (c.kappa_A && c.A) {
      const Vec direct = c.A(t, s, x);
      const Vec part = c.a(s, x);
      const double kv = c.kappa_A->eval(t, s);
      for (std::size_t i = 0; i < c.d; ++i) check(direct[i], kv * part[i]);
    }
    if (c.kappa_B && c.B) {
      const Mat direct = c.B(t, s, x);
      const Mat part = c.b(s, x);
      const double kv = c.kappa_B->eval(t, s);
      for (std::size_t i = 0; i < c.d * c.m; ++i) check(direct[i], kv * part[i]);
    }
  }
}

Control zero_control(const Grid& grid, std::size_t dims) {
  Control h;
  h.grid = grid;
  h.dims = dims;
  h.hdot.assign(grid.cells() * dims, 0.0);
  return h;
}

namespace {

// shared per-solve tables: exact cell weights for declared kernel factors
struct Prep {
  const Coefficients& c;
  const Grid& grid;
  std::unique_ptr<TriTable> WA;  // drift kernel cell weights
  std::unique_ptr<TriTable> WB;  // diffusion kernel cell weights

  Prep(const Coefficients& cc, const Grid& g) : c(cc), grid(g) {
    if (cc.kappa_A) WA = std::make_unique<TriTable>(kernel_weights(*cc.kappa_A, g));
    if (cc.kappa_B) WB = std::make_unique<TriTable>(kernel_weights(*cc.kappa_B, g));
  }
};

// one explicit step: X_i from the frozen states X_0..X_{i-1} of `state`
void assemble_node(const Prep& pr, const std::vector<double>& state,
                   std::size_t i, std::size_t start,
                   const NoiseEnsemble* noise, std::size_t path, double root_eps,
                   const Control* h, std::vector<double>& out) {
  const Coefficients& c = pr.c;
  const Grid& g = pr.grid;
  const double ti = g.nodes[i];
  out = c.g ? c.g(ti) : Vec(c.d, 0.0);
  Vec xj(c.d);
  for (std::size_t j = start; j < i; ++j) {
    const double tj = g.nodes[j];
    const double dt = g.width(j);
    for (std::size_t k = 0; k < c.d; ++k) xj[k] = state[j * c.d + k];

    if (pr.WA) {
      const Vec av = c.a(tj, xj);
      const double w = pr.WA->at(i, j);
      for (std::size_t k = 0; k < c.d; ++k) out[k] += w * av[k];
    } else if (c.A) {
      const Vec av = c.A(ti, tj, xj);
      for (std::size_t k = 0; k < c.d; ++k) out[k] += dt * av[k];
    }

    const bool have_b = pr.WB || c.B;
    if (!have_b) continue;
    const bool have_inc = noise != nullptr && root_eps != 0.0;
    const bool have_ctrl = h != nullptr;
    if (!have_inc && !have_ctrl) continue;
    Mat bv;
    double scale = 1.0;
    if (pr.WB) {
      bv = c.b(tj, xj);
      scale = pr.WB->at(i, j) / dt;  // cell-averaged kernel factor
    } else {
      bv = c.B(ti, tj, xj);
    }
    for (std::size_t k = 0; k < c.m; ++k) {
      double inc = 0.0;
      if (have_inc) inc += root_eps * noise->dW(path, j, k);
      if (have_ctrl) inc += h->hdot[j * h->dims + k] * dt;
      if (inc == 0.0) continue;
      for (std::size_t r = 0; r < c.d; ++r)
        out[r] += scale * bv[r * c.m + k] * inc;
    }
  }
}

bool finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

PathResult solve_paths(const Coefficients& c, const NoiseEnsemble* noise,
                       const Control* h, double eps, const SolveConfig& cfg,
                       const Grid& grid, std::size_t paths) {
  if (!(cfg.stop_radius > 0.0))
    throw std::invalid_argument("solve: stop_radius must be positive");
  verify_separable(c, grid);
  Prep pr(c, grid);
  const std::size_t N = grid.cells();
  const std::size_t start = cfg.start_index;
  const double root_eps = std::sqrt(eps);

  PathResult res;
  res.grid = grid;
  res.d = c.d;
  res.paths = paths;
  res.start_index = start;
  res.X.assign(paths, std::vector<double>((N + 1) * c.d, 0.0));
  res.tau_index.assign(paths, N + 1);
  res.exploded.assign(paths, 0);

  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(paths);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < np; ++p) {
    auto& row = res.X[p];
    if (start == 0 && c.g) {
      const Vec g0 = c.g(0.0);
      for (std::size_t k = 0; k < c.d; ++k) row[k] = g0[k];
    }
    Vec xi;
    for (std::size_t i = start == 0 ? 1 : start; i <= N; ++i) {
      assemble_node(pr, row, i, start, noise, static_cast<std::size_t>(p),
                    root_eps, h, xi);
      for (std::size_t k = 0; k < c.d; ++k) row[i * c.d + k] = xi[k];
      if (!finite(xi)) {
        res.exploded[p] = 1;
        res.tau_index[p] = i;
        // freeze at the last finite value
        for (std::size_t j = i; j <= N; ++j)
          for (std::size_t k = 0; k < c.d; ++k)
            row[j * c.d + k] = row[(i - 1) * c.d + k];
        break;
      }
      double nrm = 0.0;
      for (double v : xi) nrm += v * v;
      if (std::sqrt(nrm) > cfg.stop_radius) {
        res.tau_index[p] = i;
        for (std::size_t j = i + 1; j <= N; ++j)
          for (std::size_t k = 0; k < c.d; ++k)
            row[j * c.d + k] = xi[k];
        break;
      }
    }
  }
  return res;
}

void apply_stopping(PathResult& res, double R) {
  const std::size_t N = res.grid.cells();
  for (std::size_t p = 0; p < res.paths; ++p) {
    for (std::size_t i = res.start_index; i <= N; ++i) {
      if (res.norm_at(p, i) > R) {
        res.tau_index[p] = i;
        for (std::size_t j = i + 1; j <= N; ++j)
          for (std::size_t k = 0; k < res.d; ++k)
            res.X[p][j * res.d + k] = res.X[p][i * res.d + k];
        break;
      }
    }
  }
}

}  // namespace

PathResult euler_solve(const Coefficients& c, const NoiseEnsemble& noise,
                       const SolveConfig& cfg) {
  return solve_paths(c, &noise, nullptr, 1.0, cfg, noise.grid, noise.paths);
}

PathResult controlled_solve(const Coefficients& c, const Control& h,
                            const NoiseEnsemble* noise, double eps,
                            const SolveConfig& cfg) {
  if (eps > 0.0 && noise == nullptr)
    throw std::invalid_argument("controlled_solve: eps > 0 needs noise");
  const Grid& grid = noise ? noise->grid : h.grid;
  const std::size_t paths = noise ? noise->paths : 1;
  return solve_paths(c, noise, &h, eps, cfg, grid, paths);
}

PathResult picard_solve(const Coefficients& c, const NoiseEnsemble& noise,
                        const SolveConfig& cfg, PicardReport* report) {
  verify_separable(c, noise.grid);
  Prep pr(c, noise.grid);
  const Grid& grid = noise.grid;
  const std::size_t N = grid.cells();
  const std::size_t start = cfg.start_index;
  const std::size_t paths = noise.paths;

  // X^(1) = g at every node
  std::vector<double> gvals((N + 1) * c.d, 0.0);
  for (std::size_t i = start; i <= N; ++i) {
    const Vec gi = c.g ? c.g(grid.nodes[i]) : Vec(c.d, 0.0);
    for (std::size_t k = 0; k < c.d; ++k) gvals[i * c.d + k] = gi[k];
  }
  std::vector<std::vector<double>> prev(paths, gvals), next(paths, gvals);

  PicardReport rep;
  for (std::size_t sweep = 0; sweep < cfg.picard_iters; ++sweep) {
    double dist = 0.0;
    const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(paths);
#pragma omp parallel for schedule(static) reduction(max : dist)
    for (std::ptrdiff_t p = 0; p < np; ++p) {
      Vec xi;
      auto& nrow = next[p];
      const auto& prow = prev[p];
      for (std::size_t i = start == 0 ? 1 : start; i <= N; ++i) {
        assemble_node(pr, prow, i, start, &noise, static_cast<std::size_t>(p),
                      1.0, nullptr, xi);
        for (std::size_t k = 0; k < c.d; ++k) {
          const double old = prow[i * c.d + k];
          nrow[i * c.d + k] = xi[k];
          const double dd = std::fabs(xi[k] - old);
          if (std::isfinite(dd))
            dist = std::max(dist, dd);
          else
            dist = std::max(dist, 1e300);
        }
      }
    }
    rep.sweep_distance.push_back(dist);
    prev.swap(next);
    if (dist < cfg.picard_tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged)
    throw ConvergenceError("picard_solve: sweeps did not contract",
                           rep.sweep_distance);
  if (report) *report = rep;

  PathResult res;
  res.grid = grid;
  res.d = c.d;
  res.paths = paths;
  res.start_index = start;
  res.X = std::move(prev);
  res.tau_index.assign(paths, N + 1);
  res.exploded.assign(paths, 0);
  for (std::size_t p = 0; p < paths; ++p)
    if (!finite(res.X[p])) res.exploded[p] = 1;
  if (std::isfinite(cfg.stop_radius)) apply_stopping(res, cfg.stop_radius);
  return res;
}

}  // namespace vsk
