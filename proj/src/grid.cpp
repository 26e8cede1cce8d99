#include "vsk/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace vsk {

Grid make_grid(double T, std::size_t N, GridKind kind, double exponent) {
  if (!(T > 0.0)) throw std::invalid_argument("make_grid: horizon must be positive");
  if (N == 0) throw std::invalid_argument("make_grid: need at least one cell");
  if (kind == GridKind::Graded && !(exponent >= 1.0))
    throw std::invalid_argument("make_grid: grading exponent must be >= 1");

  Grid g;
  g.horizon = T;
  g.kind = kind;
  g.exponent = (kind == GridKind::Graded) ? exponent : 1.0;
  g.nodes.resize(N + 1);
  for (std::size_t i = 0; i <= N; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(N);
    g.nodes[i] = (kind == GridKind::Uniform || exponent == 1.0)
                     ? T * frac
                     : T * std::pow(frac, exponent);
  }
  g.nodes[0] = 0.0;
  g.nodes[N] = T;
  return g;
}

Grid refine(const Grid& g, std::size_t factor) {
  if (factor < 2) throw std::invalid_argument("refine: factor must be >= 2");
  return make_grid(g.horizon, g.cells() * factor, g.kind, g.exponent);
}

double default_grading_exponent(double beta) {
  if (beta <= 0.0) return 1.0;
  if (beta >= 1.0) throw std::invalid_argument("grading: beta must be < 1");
  return 1.0 / (1.0 - beta);
}

}  // namespace vsk
