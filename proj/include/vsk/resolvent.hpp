#pragma once

#include <stdexcept>
#include <vector>

#include "vsk/grid.hpp"
#include "vsk/kernel.hpp"
#include "vsk/tritable.hpp"

namespace vsk {

struct ConvergenceError : std::runtime_error {
  std::vector<double> decay_record;
  ConvergenceError(const std::string& msg, std::vector<double> record)
      : std::runtime_error(msg), decay_record(std::move(record)) {}
};

// Product-integration weights W(i,l) = int over cell l of kappa(t_i, .),
// the shared discrete form of every int kappa(t,s) f(s) ds below.
TriTable kernel_weights(const Kernel& k, const Grid& grid);
TriTable kernel_weights_serial(const Kernel& k, const Grid& grid);

// Kernel sampled on the grid; diagonal entries take the cell-averaged value
// so singular kernels stay finite in the table.
TriTable sample_kernel(const Kernel& k, const Grid& grid);

// r_1 = kappa, r_{n+1}(t_i,t_j) = sum_{l} W(i,l) r_n(t_l,t_j); returns
// r_1..r_{n_max}.
std::vector<TriTable> iterated_kernels(const Kernel& k, const Grid& grid,
                                       std::size_t n_max);

struct ResolventTable {
  TriTable table;
  std::size_t terms_used = 0;
  double tail_bound = 0.0;
  std::vector<double> decay_record;  // sup_i int_0^{t_i} r_n(t_i,s) ds per n

  explicit ResolventTable(Grid g) : table(std::move(g), "resolvent") {}
};

// Sum of the iterated-kernel series, truncated when the integrated n-th term
// drops below tol. Throws ConvergenceError when no decay shows up by n_cap.
ResolventTable resolvent_sum(const Kernel& k, const Grid& grid,
                             double tol = 1e-10, std::size_t n_cap = 200);
ResolventTable resolvent_sum_serial(const Kernel& k, const Grid& grid,
                                    double tol = 1e-10, std::size_t n_cap = 200);

// Max residual of the two-sided resolvent identity
// r = kappa + kappa*r = kappa + r*kappa, evaluated away from the diagonal
// and, for kernels with declared singularities, at least T/16 away from the
// singular sets (the pointwise identity does not converge on top of them).
double identity_residual(const Kernel& k, const ResolventTable& R);

// Scalar convolution resolvent a = h + h*a by forward stepping. A blow-up
// past the overflow guard is reported in the flag, not thrown.
struct ConvolutionResolvent {
  std::vector<double> a;   // a(t_i)
  bool blew_up = false;
};
ConvolutionResolvent convolution_resolvent(const Profile& h, const Grid& grid,
                                           double overflow_guard = 1e12);

// t_i -> g(t_i) + sum_j r(t_i,t_j) g(t_j) dt_j (the Volterra-Gronwall
// majorant). Node 0 may carry g(0)=inf; set skip_node0 in that case.
std::vector<double> gronwall_bound(const std::vector<double>& g,
                                   const ResolventTable& R,
                                   bool skip_node0 = false);

// Forward substitution for x = g + int kappa x. For non-unique problems use
// the seeded fixed-point variant below.
std::vector<double> linear_volterra_solve(const std::vector<double>& g,
                                          const Kernel& k, const Grid& grid);

struct FixedPointResult {
  std::vector<double> x;
  std::size_t sweeps = 0;
  double last_change = 0.0;
};

// Damped fixed-point sweeps x <- (1-damping) x + damping (g + K x) from a
// caller-supplied seed, with trapezoidal freezing of x inside the product
// integrals. Reports the fixed point reached; never claims uniqueness.
FixedPointResult fixed_point_volterra(const std::vector<double>& g,
                                      const Kernel& k, const Grid& grid,
                                      std::vector<double> seed,
                                      double damping = 0.5,
                                      double tol = 1e-4,
                                      std::size_t max_sweeps = 500);

// s(t) = 1 - lam * int_0^t a(t-u) s(u) du, product-integration forward
// substitution; a may be singular at 0 (e.g. the fractional kernel).
std::vector<double> material_resolvent(const Profile& a, double lam,
                                       const Grid& grid);

}  // namespace vsk
