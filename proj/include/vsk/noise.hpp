#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "vsk/grid.hpp"
#include "vsk/kernel.hpp"

namespace vsk {

enum class NoiseKind { Wiener, Fbm };

// Monte Carlo ensemble of driving-noise increments: paths x cells x dims.
// Each path draws from its own counter-derived substream, so path p is the
// same no matter how many paths are sampled or how many workers run.
// Immutable after construction.
struct NoiseEnsemble {
  Grid grid;
  std::size_t dims = 1;
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  NoiseKind kind = NoiseKind::Wiener;
  double hurst = 0.5;
  // increments[p][j*dims + k]
  std::vector<std::vector<double>> increments;
  // the wiener increments an fbm ensemble was derived from
  std::shared_ptr<const NoiseEnsemble> base;

  double dW(std::size_t p, std::size_t j, std::size_t k) const {
    return increments[p][j * dims + k];
  }
  // path value at node i (cumulative sum of increments)
  double value(std::size_t p, std::size_t i, std::size_t k) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < i; ++j) acc += dW(p, j, k);
    return acc;
  }
};

NoiseEnsemble sample_wiener(const Grid& grid, std::size_t m, std::size_t P,
                            std::uint64_t seed);

// W_H(t_i) = sum_j (cell-averaged K_H(t_i,.) on cell j) * dW_j; stored as
// increments of W_H, with the driving wiener ensemble kept alongside.
NoiseEnsemble fbm_from_wiener(const NoiseEnsemble& e, double H);
NoiseEnsemble fbm_from_wiener_serial(const NoiseEnsemble& e, double H);

// Conditional midpoint refinement of a wiener ensemble onto the factor-2
// finer grid; coarse-node path values are preserved exactly.
NoiseEnsemble refine_brownian_bridge(const NoiseEnsemble& e,
                                     std::uint64_t bridge_seed);

struct CovarianceResult {
  std::vector<std::size_t> nodes;
  std::vector<std::vector<double>> cov;  // [a][b] over requested nodes
  std::vector<std::vector<double>> se;   // standard errors
};

// Sample covariance of path values at the requested nodes, pooled over the
// independent dims. Requires at least 100 paths.
CovarianceResult empirical_covariance(const NoiseEnsemble& e,
                                      const std::vector<std::size_t>& nodes);

// standard normal quantile function (Acklam's rational approximation)
double normal_quantile(double p);
// two-sided Kolmogorov-Smirnov distance of the samples to a standard normal
double ks_statistic_standard_normal(std::vector<double> samples);

}  // namespace vsk
