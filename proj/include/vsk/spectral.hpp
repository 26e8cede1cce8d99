#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "vsk/sde.hpp"
#include "vsk/tritable.hpp"

namespace vsk {

// Truncated 1-D Dirichlet model: eigenvalues mu + (k pi)^2, basis
// sqrt(2) sin(k pi x) on (0,1), k = 1..K, with a physical grid of interior
// points for pointwise nonlinearities.
struct SpectralModel {
  std::size_t K = 8;
  double mu = 1.0;
  std::size_t Mx = 0;  // 0 = default 2K+1 interior points

  std::size_t physical_points() const { return Mx ? Mx : 2 * K + 1; }
  double lambda(std::size_t k) const;  // k = 1..K
};

using SpectralState = std::vector<double>;  // coefficients, index 0 = mode 1

SpectralState semigroup_apply(const SpectralModel& model,
                              const SpectralState& s, double t);

// (sum_k lambda_k^{2 alpha} x_k^2)^{1/2}
double frac_norm(const SpectralModel& model, const SpectralState& s,
                 double alpha);

// mode coefficients -> values at the interior physical points, and back
std::vector<double> to_physical(const SpectralModel& model,
                                const SpectralState& s);
SpectralState to_modes(const SpectralModel& model,
                       const std::vector<double>& phys);

struct SemigroupBoundRow {
  double alpha = 0.0;
  double decay_max = 0.0;      // max of t^a lam^a e^{-lam t} over modes, t
  double decay_envelope = 0.0;  // (a/e)^a
  double smooth_max = 0.0;      // max of (1-e^{-lam t})/(lam t)^a
  double smooth_envelope = 0.0;
};

std::vector<SemigroupBoundRow> semigroup_bound_report(
    const SpectralModel& model, const std::vector<double>& alpha_list,
    const std::vector<double>& t_grid);

// mode amplitudes of the driving dims: K x m, row-major
struct NoiseOperator {
  std::size_t K = 0;
  std::size_t m = 0;
  std::vector<double> b;

  static NoiseOperator diagonal(const std::vector<double>& sigma);
  double hs_norm() const;
};

// Mild solve of dX + LX dt = Phi(X) dt + Psi dW in mode space: per-mode
// semigroup kernels with exact cell integration for the drift, left-point
// increments for the noise. Phi acts pointwise on the physical grid through
// the sine-transform round trip, clipped in sup-norm at cfg.stop_radius.
PathResult mild_solve(const SpectralModel& model, const SpectralState& x0,
                      const std::function<double(double)>& Phi,
                      const NoiseOperator& Psi, const NoiseEnsemble& noise,
                      const SolveConfig& cfg);

// Sup-node residual per path of the integrated strong-form identity
// X(t) - x0 + sum L X dt - sum Phi dt - sum Psi dW, in the plain L2 norm.
std::vector<double> strong_residual(const SpectralModel& model,
                                    const PathResult& r,
                                    const SpectralState& x0,
                                    const std::function<double(double)>& Phi,
                                    const NoiseOperator& Psi,
                                    const NoiseEnsemble& noise);

// Cell-averaged table of the fractional-noise convolution kernel
// psi [ K_H(t,s) - lambda int_s^t K_H(u,s) e^{-lambda(t-u)} du ]
// assembled by product integration; reduces to psi e^{-lambda(t-s)} at H=1/2.
TriTable fbm_convolution_kernel(double lambda, double psi, double H,
                                const Grid& grid);

}  // namespace vsk
