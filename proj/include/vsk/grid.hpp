#pragma once

#include <cstddef>
#include <vector>

namespace vsk {

enum class GridKind { Uniform, Graded };

// Time discretization of [0,T]. Nodes are stored explicitly so every module
// indexes cells by integer. A graded grid has t_i = T*(i/N)^p with p >= 1;
// p = 1 reproduces the uniform grid node-for-node.
struct Grid {
  double horizon = 0.0;
  GridKind kind = GridKind::Uniform;
  double exponent = 1.0;            // meaningful for Graded only
  std::vector<double> nodes;        // t_0 = 0 < t_1 < ... < t_N = T

  std::size_t cells() const { return nodes.size() - 1; }
  double node(std::size_t i) const { return nodes[i]; }
  double width(std::size_t j) const { return nodes[j + 1] - nodes[j]; }
};

Grid make_grid(double T, std::size_t N, GridKind kind, double exponent = 1.0);

// Same kind and horizon, N*factor cells; every node of the input grid is a
// node of the output (index i maps to i*factor).
Grid refine(const Grid& g, std::size_t factor);

// Suggested grading exponent for a kernel with a declared s^{-beta}
// singularity at s = 0.
double default_grading_exponent(double beta);

}  // namespace vsk
