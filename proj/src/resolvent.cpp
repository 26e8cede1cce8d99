#include "vsk/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "vsk/quadrature.hpp"

namespace vsk {

namespace {

TriTable kernel_weights_impl(const Kernel& k, const Grid& grid, bool parallel) {
  TriTable W(grid, "weights");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(grid.nodes.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 1; i < n; ++i) {
    const double t = grid.nodes[i];
    for (std::ptrdiff_t l = 0; l < i; ++l)
      W.at(i, l) = cell_integral(k, t, grid.nodes[l], grid.nodes[l + 1]);
  }
  return W;
}

// integral of kappa(., t_j) in its first argument over cell l (l >= j),
// needed for the swapped order of the resolvent identity
double first_arg_cell_integral(const Kernel& k, const Grid& grid,
                               std::size_t l, std::size_t j) {
  const double s = grid.nodes[j];
  const double a = grid.nodes[l], b = grid.nodes[l + 1];
  const double exp_left = (l == j) ? k.sing.at_diag : 0.0;
  return quad::singular([&, s](double u) { return k.eval(u, s); },
                        std::max(a, s), b, exp_left, 0.0, 1e-9, 1e-13);
}

}  // namespace

TriTable kernel_weights(const Kernel& k, const Grid& grid) {
  return kernel_weights_impl(k, grid, true);
}
TriTable kernel_weights_serial(const Kernel& k, const Grid& grid) {
  return kernel_weights_impl(k, grid, false);
}

TriTable sample_kernel(const Kernel& k, const Grid& grid) {
  const TriTable W = kernel_weights(k, grid);
  const std::size_t N = grid.cells();
  TriTable K(grid, "kernel");
  for (std::size_t i = 1; i <= N; ++i)
    for (std::size_t j = 0; j < i; ++j)
      K.at(i, j) = W.at(i, j) / grid.width(j);
  // diagonal: cell average seen from the next row
  for (std::size_t j = 0; j < N; ++j)
    K.at(j, j) = W.at(j + 1, j) / grid.width(j);
  K.at(N, N) = W.at(N, N - 1) / grid.width(N - 1);
  return K;
}

namespace {

// one series step r_next(i,j) = sum_{l=j}^{i-1} W(i,l) r(l,j)
void compose(const TriTable& W, const TriTable& r, TriTable& out,
             bool parallel) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(r.rows());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (std::ptrdiff_t l = j; l < i; ++l)
        acc += W.at(i, l) * r.at(l, j);
      out.at(i, j) = acc;
    }
  }
}

double integrated_sup(const TriTable& r) {
  double sup = 0.0;
  for (std::size_t i = 1; i < r.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j) acc += r.at(i, j) * r.grid.width(j);
    sup = std::max(sup, acc);
  }
  return sup;
}

ResolventTable resolvent_sum_impl(const Kernel& k, const Grid& grid, double tol,
                                  std::size_t n_cap, bool parallel) {
  const TriTable W = kernel_weights_impl(k, grid, parallel);
  TriTable term = sample_kernel(k, grid);
  ResolventTable R(grid);
  R.table.values = term.values;
  R.decay_record.push_back(integrated_sup(term));

  TriTable next(grid);
  for (std::size_t n = 2; n <= n_cap; ++n) {
    compose(W, term, next, parallel);
    std::swap(term, next);
    const double d = integrated_sup(term);
    R.decay_record.push_back(d);
    for (std::size_t idx = 0; idx < term.values.size(); ++idx)
      R.table.values[idx] += term.values[idx];
    if (d < tol) {
      R.terms_used = n;
      R.tail_bound = d;
      return R;
    }
    // no decay: the last three integrated terms are non-decreasing
    const auto& dr = R.decay_record;
    if (dr.size() >= 4 && dr[dr.size() - 1] >= dr[dr.size() - 2] &&
        dr[dr.size() - 2] >= dr[dr.size() - 3] && dr.back() > 1.0)
      throw ConvergenceError("resolvent_sum: series shows no decay", dr);
  }
  throw ConvergenceError("resolvent_sum: n_cap reached before tolerance",
                         R.decay_record);
}

}  // namespace

std::vector<TriTable> iterated_kernels(const Kernel& k, const Grid& grid,
                                       std::size_t n_max) {
  if (n_max < 1) throw std::invalid_argument("iterated_kernels: n_max >= 1");
  const TriTable W = kernel_weights(k, grid);
  std::vector<TriTable> out;
  out.push_back(sample_kernel(k, grid));
  for (std::size_t n = 1; n < n_max; ++n) {
    TriTable next(grid);
    compose(W, out.back(), next, true);
    out.push_back(std::move(next));
  }
  return out;
}

ResolventTable resolvent_sum(const Kernel& k, const Grid& grid, double tol,
                             std::size_t n_cap) {
  return resolvent_sum_impl(k, grid, tol, n_cap, true);
}
ResolventTable resolvent_sum_serial(const Kernel& k, const Grid& grid,
                                    double tol, std::size_t n_cap) {
  return resolvent_sum_impl(k, grid, tol, n_cap, false);
}

double identity_residual(const Kernel& k, const ResolventTable& R) {
  const Grid& grid = R.table.grid;
  const std::size_t N = grid.cells();
  const TriTable W = kernel_weights(k, grid);
  const std::size_t j0 = (k.sing.at_zero > 0.0) ? 1 : 0;

  // first-argument weights for the swapped identity
  TriTable V(grid, "first-arg weights");
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(N);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t l = 0; l < n; ++l)
    for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(j0); j <= l; ++j)
      V.at(l, j) = first_arg_cell_integral(k, grid, l, j);

  // Singular kernels carry a fixed standoff from their singular sets: the
  // pointwise identity only converges under refinement at a positive distance
  // from the blow-up, so the sup is taken over cells at least T/16 away.
  const double T = grid.nodes.back();
  const double diag_off = (k.sing.at_diag > 0.0) ? T / 16.0 : 0.0;
  const double zero_off = (k.sing.at_zero > 0.0) ? T / 16.0 : 0.0;

  double worst = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : worst)
  for (std::ptrdiff_t i = 2; i <= static_cast<std::ptrdiff_t>(N); ++i) {
    for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(j0); j + 2 <= i; ++j) {
      if (grid.nodes[i] - grid.nodes[j] < diag_off ||
          grid.nodes[j] < zero_off)
        continue;
      const double kappa = k.eval(grid.nodes[i], grid.nodes[j]);
      double conv_left = 0.0;   // kappa * r
      double conv_right = 0.0;  // r * kappa
      for (std::ptrdiff_t l = j; l < i; ++l) {
        conv_left += W.at(i, l) * R.table.at(l, j);
        conv_right += R.table.at(i, l) * V.at(l, j);
      }
      const double r_ij = R.table.at(i, j);
      worst = std::max(worst, std::fabs(r_ij - kappa - conv_left));
      worst = std::max(worst, std::fabs(r_ij - kappa - conv_right));
    }
  }
  return worst;
}

ConvolutionResolvent convolution_resolvent(const Profile& h, const Grid& grid,
                                           double overflow_guard) {
  const std::size_t N = grid.cells();
  ConvolutionResolvent out;
  out.a.assign(N + 1, 0.0);

  auto seg = [&](double lo, double hi) {
    if (h.has_exact()) return h.exact_integral(lo, hi);
    return quad::singular(h.eval, lo, hi, lo <= 0.0 ? h.sing_at_zero : 0.0,
                          0.0, 1e-10);
  };

  const bool singular0 = h.sing_at_zero > 0.0;
  out.a[0] = singular0 ? std::numeric_limits<double>::infinity() : h.eval(0.0);

  for (std::size_t i = 1; i <= N; ++i) {
    const double t = grid.nodes[i];
    double acc = h.eval(t);
    std::size_t l0 = 0;
    if (singular0) {
      // cell 0 freezes a at its right node: the term lands on the diagonal
      // of the forward substitution and is solved implicitly below
      l0 = 1;
    }
    for (std::size_t l = l0; l < i; ++l)
      acc += seg(t - grid.nodes[l + 1], t - grid.nodes[l]) * out.a[l];
    if (singular0) {
      const double c0 = seg(t - grid.nodes[1], t);
      if (i == 1)
        acc = acc / (1.0 - c0);
      else
        acc += c0 * out.a[1];
    }
    out.a[i] = acc;
    if (!std::isfinite(acc) || std::fabs(acc) > overflow_guard) {
      out.blew_up = true;
      for (std::size_t m = i + 1; m <= N; ++m) out.a[m] = acc;
      break;
    }
  }
  return out;
}

std::vector<double> gronwall_bound(const std::vector<double>& g,
                                   const ResolventTable& R, bool skip_node0) {
  const Grid& grid = R.table.grid;
  const std::size_t N = grid.cells();
  std::vector<double> out(N + 1);
  out[0] = g[0];
  const std::size_t j0 = skip_node0 ? 1 : 0;
  for (std::size_t i = 1; i <= N; ++i) {
    double acc = g[i];
    for (std::size_t j = j0; j < i; ++j)
      acc += R.table.at(i, j) * g[j] * grid.width(j);
    out[i] = acc;
  }
  return out;
}

std::vector<double> linear_volterra_solve(const std::vector<double>& g,
                                          const Kernel& k, const Grid& grid) {
  const TriTable W = kernel_weights(k, grid);
  const std::size_t N = grid.cells();
  std::vector<double> x(N + 1);
  x[0] = g[0];
  for (std::size_t i = 1; i <= N; ++i) {
    double acc = g[i];
    for (std::size_t j = 0; j < i; ++j) acc += W.at(i, j) * x[j];
    x[i] = acc;
  }
  return x;
}

FixedPointResult fixed_point_volterra(const std::vector<double>& g,
                                      const Kernel& k, const Grid& grid,
                                      std::vector<double> seed, double damping,
                                      double tol, std::size_t max_sweeps) {
  const TriTable W = kernel_weights(k, grid);
  const std::size_t N = grid.cells();
  FixedPointResult res;
  res.x = std::move(seed);
  std::vector<double> next(N + 1);
  for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    next[0] = g[0];
    double change = std::fabs(next[0] - res.x[0]);
    for (std::size_t i = 1; i <= N; ++i) {
      double acc = g[i];
      // trapezoidal freezing keeps exact fixed points of the continuous
      // equation near-stationary under the sweep
      for (std::size_t l = 0; l < i; ++l)
        acc += W.at(i, l) * 0.5 * (res.x[l] + res.x[l + 1]);
      const double xi = (1.0 - damping) * res.x[i] + damping * acc;
      change = std::max(change, std::fabs(xi - res.x[i]));
      next[i] = xi;
    }
    res.x.swap(next);
    res.sweeps = sweep;
    const double prev_change = res.last_change;
    res.last_change = change;
    double scale = 1.0;
    for (double v : res.x) scale = std::max(scale, std::fabs(v));
    if (!std::isfinite(change) || change > 1e8)
      throw ConvergenceError("fixed_point_volterra: sweeps diverged",
                             {res.last_change});
    if (change < tol * scale) break;
    // near-unit geometric decay of the update: the iterate sits in a neutral
    // direction of the discrete operator (the non-unique regime); further
    // sweeps would only drain it through discretization leakage
    if (sweep >= 10 && change < 0.05 * scale && prev_change > 0.0 &&
        change > 0.9 * prev_change)
      break;
  }
  return res;
}

std::vector<double> material_resolvent(const Profile& a, double lam,
                                       const Grid& grid) {
  const std::size_t N = grid.cells();
  auto seg = [&](double lo, double hi) {
    if (a.has_exact()) return a.exact_integral(lo, hi);
    return quad::singular(a.eval, lo, hi, lo <= 0.0 ? a.sing_at_zero : 0.0,
                          0.0, 1e-10);
  };
  std::vector<double> s(N + 1);
  s[0] = 1.0;
  for (std::size_t i = 1; i <= N; ++i) {
    const double t = grid.nodes[i];
    double acc = 1.0;
    for (std::size_t l = 0; l < i; ++l)
      acc -= lam * seg(t - grid.nodes[l + 1], t - grid.nodes[l]) * s[l];
    s[i] = acc;
  }
  return s;
}

}  // namespace vsk
