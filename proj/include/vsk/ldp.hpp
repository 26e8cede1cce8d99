#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "vsk/sde.hpp"

namespace vsk {

double control_norm(const Control& h);

// terminal-set descriptor: paths whose endpoint lies within tolerance of y
struct TerminalTarget {
  Vec y;
  double tolerance = 0.05;
};

struct OptimizerConfig {
  std::size_t max_evals = 4000;
  double tol = 1e-6;
  double ball_norm = 0.0;  // 0 = choose from a coarse pre-scan
};

struct RateEstimate {
  Control h_star;
  double I = std::numeric_limits<double>::infinity();
  double penalty_residual = 0.0;
  std::size_t evaluations = 0;
  std::vector<double> best_trace;  // best objective after each evaluation batch
  bool feasible = false;
};

// Minimize (1/2)||h||^2 over piecewise-constant controls with M cells whose
// skeleton endpoint lands in the target set, by penalty continuation around a
// derivative-free simplex search.
RateEstimate rate_minimize(const Coefficients& c, const Grid& grid,
                           const TerminalTarget& target, std::size_t M,
                           const OptimizerConfig& opt = {});

// path functional: evaluates one path of a result
using PathFunctional = std::function<double(const PathResult&, std::size_t)>;

// Minimize G(skeleton(h)) + (1/2)||h||^2 (no constraint).
RateEstimate variational_minimize(const Coefficients& c, const Grid& grid,
                                  const PathFunctional& G, std::size_t M,
                                  const OptimizerConfig& opt = {});

struct SmallNoiseRow {
  double eps = 0.0;
  double p_hat = 0.0;
  double eps_log_p = 0.0;
  double ci_lo = 0.0;  // Wilson interval mapped through eps*log
  double ci_hi = 0.0;
  bool skipped = false;
};

// Monte Carlo eps * log P(X_eps terminal in event) per noise level. Levels
// whose hit count would be below 10 expected hits are skipped with a flag.
std::vector<SmallNoiseRow> small_noise_estimate(
    const Coefficients& c, const Grid& grid,
    const std::vector<double>& eps_list,
    const std::function<bool(const Vec& terminal)>& event, std::size_t P,
    std::uint64_t seed);

struct LaplaceRow {
  double eps = 0.0;
  double estimate = 0.0;  // eps * log mean exp(-G/eps)
  bool overflow = false;
};

// Monte Carlo Laplace functionals for a bounded path functional G; g_bound
// is the declared sup bound used to spot violations.
std::vector<LaplaceRow> laplace_estimate(const Coefficients& c,
                                         const Grid& grid,
                                         const PathFunctional& G,
                                         double g_bound,
                                         const std::vector<double>& eps_list,
                                         std::size_t P, std::uint64_t seed);

}  // namespace vsk
