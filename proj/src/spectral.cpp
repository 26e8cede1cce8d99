#include "vsk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vsk/resolvent.hpp"

namespace vsk {

double SpectralModel::lambda(std::size_t k) const {
  const double kp = static_cast<double>(k) * M_PI;
  return mu + kp * kp;
}

SpectralState semigroup_apply(const SpectralModel& model,
                              const SpectralState& s, double t) {
  if (t < 0.0) throw std::invalid_argument("semigroup_apply: t >= 0");
  SpectralState out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k)
    out[k] = std::exp(-model.lambda(k + 1) * t) * s[k];
  return out;
}

double frac_norm(const SpectralModel& model, const SpectralState& s,
                 double alpha) {
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k)
    acc += std::pow(model.lambda(k + 1), 2.0 * alpha) * s[k] * s[k];
  return std::sqrt(acc);
}

std::vector<double> to_physical(const SpectralModel& model,
                                const SpectralState& s) {
  const std::size_t n = model.physical_points();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    for (std::size_t k = 0; k < s.size(); ++k)
      out[i] += s[k] * std::sqrt(2.0) * std::sin((k + 1) * M_PI * x);
  }
  return out;
}

SpectralState to_modes(const SpectralModel& model,
                       const std::vector<double>& phys) {
  const std::size_t n = model.physical_points();
  SpectralState out(model.K, 0.0);
  for (std::size_t k = 0; k < model.K; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i + 1) / static_cast<double>(n + 1);
      acc += phys[i] * std::sin((k + 1) * M_PI * x);
    }
    out[k] = acc * std::sqrt(2.0) / static_cast<double>(n + 1);
  }
  return out;
}

std::vector<SemigroupBoundRow> semigroup_bound_report(
    const SpectralModel& model, const std::vector<double>& alpha_list,
    const std::vector<double>& t_grid) {
  std::vector<SemigroupBoundRow> rows;
  for (double a : alpha_list) {
    SemigroupBoundRow row;
    row.alpha = a;
    row.decay_envelope = a == 0.0 ? 1.0 : std::pow(a / M_E, a);
    // sup over u > 0 of (1 - e^{-u}) / u^a: coarse log scan, then a ternary
    // refinement around the unimodal peak
    auto f = [a](double lu) {
      const double u = std::exp(lu);
      return -std::expm1(-u) / std::pow(u, a);
    };
    double best_lu = 0.0, env = 0.0;
    for (double lu = -30.0; lu <= 30.0; lu += 0.01) {
      const double v = f(lu);
      if (v > env) {
        env = v;
        best_lu = lu;
      }
    }
    double lo = best_lu - 0.02, hi = best_lu + 0.02;
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (f(m1) < f(m2))
        lo = m1;
      else
        hi = m2;
    }
    env = std::max(env, f(0.5 * (lo + hi)));
    row.smooth_envelope = a <= 0.0 ? 1.0 : (a >= 1.0 ? 1.0 : env);
    for (std::size_t k = 1; k <= model.K; ++k) {
      const double lam = model.lambda(k);
      for (double t : t_grid) {
        if (t <= 0.0) continue;
        const double u = lam * t;
        row.decay_max = std::max(row.decay_max, std::pow(u, a) * std::exp(-u));
        row.smooth_max =
            std::max(row.smooth_max, -std::expm1(-u) / std::pow(u, a));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

NoiseOperator NoiseOperator::diagonal(const std::vector<double>& sigma) {
  NoiseOperator op;
  op.K = op.m = sigma.size();
  op.b.assign(op.K * op.m, 0.0);
  for (std::size_t k = 0; k < op.K; ++k) op.b[k * op.m + k] = sigma[k];
  return op;
}

double NoiseOperator::hs_norm() const {
  double s = 0.0;
  for (double v : b) s += v * v;
  return std::sqrt(s);
}

PathResult mild_solve(const SpectralModel& model, const SpectralState& x0,
                      const std::function<double(double)>& Phi,
                      const NoiseOperator& Psi, const NoiseEnsemble& noise,
                      const SolveConfig& cfg) {
  const std::size_t K = model.K;
  if (x0.size() != K) throw std::invalid_argument("mild_solve: x0 size != K");
  if (Psi.b.size() != K * noise.dims)
    throw std::invalid_argument("mild_solve: noise operator shape mismatch");
  if (!(cfg.stop_radius > 0.0))
    throw std::invalid_argument("mild_solve: stop_radius must be positive");
  const Grid& grid = noise.grid;
  const std::size_t N = grid.cells();
  const std::size_t m = noise.dims;
  const double R = cfg.stop_radius;

  PathResult res;
  res.grid = grid;
  res.d = K;
  res.paths = noise.paths;
  res.X.assign(noise.paths, std::vector<double>((N + 1) * K, 0.0));
  res.tau_index.assign(noise.paths, N + 1);
  res.exploded.assign(noise.paths, 0);

  const std::ptrdiff_t np = static_cast<std::ptrdiff_t>(noise.paths);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < np; ++p) {
    auto& row = res.X[p];
    std::vector<std::vector<double>> phi_modes(N);  // Phi at frozen states
    for (std::size_t k = 0; k < K; ++k) row[k] = x0[k];
    SpectralState xi(K);
    for (std::size_t i = 1; i <= N; ++i) {
      // nonlinearity at the newly frozen state of the previous node
      if (Phi) {
        SpectralState prev(K);
        for (std::size_t k = 0; k < K; ++k) prev[k] = row[(i - 1) * K + k];
        auto phys = to_physical(model, prev);
        for (auto& u : phys) u = Phi(std::clamp(u, -R, R));
        phi_modes[i - 1] = to_modes(model, phys);
      }
      const double ti = grid.nodes[i];
      bool ok = true;
      for (std::size_t k = 0; k < K; ++k) {
        const double lam = model.lambda(k + 1);
        double acc = std::exp(-lam * ti) * x0[k];
        for (std::size_t j = 0; j < i; ++j) {
          if (Phi) {
            // exact cell integral of the semigroup kernel
            const double w = (std::exp(-lam * (ti - grid.nodes[j + 1])) -
                              std::exp(-lam * (ti - grid.nodes[j]))) /
                             lam;
            acc += w * phi_modes[j][k];
          }
          double inc = 0.0;
          for (std::size_t q = 0; q < m; ++q)
            inc += Psi.b[k * m + q] * noise.dW(p, j, q);
          if (inc != 0.0) acc += std::exp(-lam * (ti - grid.nodes[j])) * inc;
        }
        xi[k] = acc;
        if (!std::isfinite(acc)) ok = false;
      }
      for (std::size_t k = 0; k < K; ++k) row[i * K + k] = xi[k];
      if (!ok) {
        res.exploded[p] = 1;
        res.tau_index[p] = i;
        for (std::size_t j = i; j <= N; ++j)
          for (std::size_t k = 0; k < K; ++k)
            row[j * K + k] = row[(i - 1) * K + k];
        break;
      }
      double nrm = 0.0;
      for (double v : xi) nrm += v * v;
      if (std::sqrt(nrm) > R) {
        res.tau_index[p] = i;
        for (std::size_t j = i + 1; j <= N; ++j)
          for (std::size_t k = 0; k < K; ++k) row[j * K + k] = xi[k];
        break;
      }
    }
  }
  return res;
}

std::vector<double> strong_residual(const SpectralModel& model,
                                    const PathResult& r,
                                    const SpectralState& x0,
                                    const std::function<double(double)>& Phi,
                                    const NoiseOperator& Psi,
                                    const NoiseEnsemble& noise) {
  const std::size_t K = model.K;
  const Grid& grid = r.grid;
  const std::size_t N = grid.cells();
  const double R = 1e300;
  std::vector<double> out(r.paths, 0.0);
  for (std::size_t p = 0; p < r.paths; ++p) {
    std::vector<double> acc(K, 0.0);  // running left-point sums
    double sup = 0.0;
    const std::size_t stop = std::min(r.tau_index[p], N);
    for (std::size_t i = 1; i <= stop; ++i) {
      const std::size_t j = i - 1;
      const double dt = grid.width(j);
      SpectralState xj(K);
      for (std::size_t k = 0; k < K; ++k) xj[k] = r.at(p, j, k);
      std::vector<double> phi_modes;
      if (Phi) {
        auto phys = to_physical(model, xj);
        for (auto& u : phys) u = Phi(std::clamp(u, -R, R));
        phi_modes = to_modes(model, phys);
      }
      for (std::size_t k = 0; k < K; ++k) {
        acc[k] -= model.lambda(k + 1) * xj[k] * dt;
        if (Phi) acc[k] += phi_modes[k] * dt;
        double inc = 0.0;
        for (std::size_t q = 0; q < noise.dims; ++q)
          inc += Psi.b[k * noise.dims + q] * noise.dW(p, j, q);
        acc[k] += inc;
      }
      double nrm = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double res = r.at(p, i, k) - x0[k] - acc[k];
        nrm += res * res;
      }
      sup = std::max(sup, std::sqrt(nrm));
    }
    out[p] = sup;
  }
  return out;
}

TriTable fbm_convolution_kernel(double lambda, double psi, double H,
                                const Grid& grid) {
  const Kernel kh = fbm_kernel(H);  // validates H
  const std::size_t N = grid.cells();
  // cell-averaged K_H with the sampled diagonal convention
  const TriTable W = kernel_weights(kh, grid);
  TriTable khat = sample_kernel(kh, grid);
  TriTable out(grid, "fbm convolution kernel");
  const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(N);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 1; i <= nn; ++i) {
    const double ti = grid.nodes[i];
    for (std::ptrdiff_t j = 0; j < i; ++j) {
      double conv = 0.0;  // int_s^t K_H(u,s) e^{-lambda(t-u)} du, cells l >= j
      for (std::ptrdiff_t l = j; l < i; ++l) {
        const double e = lambda == 0.0
                             ? 0.0
                             : (std::exp(-lambda * (ti - grid.nodes[l + 1])) -
                                std::exp(-lambda * (ti - grid.nodes[l]))) /
                                   lambda;
        conv += e * khat.at(l, j);
      }
      out.at(i, j) = psi * (W.at(i, j) / grid.width(j) - lambda * conv);
    }
  }
  return out;
}

}  // namespace vsk
