#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vsk/grid.hpp"

namespace vsk {

// Lower-triangular table of values v(t_i, t_j), 0 <= j <= i <= N, stored
// packed row by row.
struct TriTable {
  Grid grid;
  std::vector<double> values;
  std::string tag;

  explicit TriTable(Grid g, std::string t = {})
      : grid(std::move(g)), tag(std::move(t)) {
    const std::size_t n = grid.nodes.size();
    values.assign(n * (n + 1) / 2, 0.0);
  }

  static std::size_t index(std::size_t i, std::size_t j) {
    return i * (i + 1) / 2 + j;
  }
  double& at(std::size_t i, std::size_t j) { return values[index(i, j)]; }
  double at(std::size_t i, std::size_t j) const { return values[index(i, j)]; }
  std::size_t rows() const { return grid.nodes.size(); }
};

}  // namespace vsk
