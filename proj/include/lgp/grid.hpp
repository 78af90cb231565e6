#pragma once

#include <cmath>
#include <cstddef>

#include "lgp/geometry.hpp"

namespace lgp {

/// Uniform grid of square cells [x, x+h) × [y, y+h), row-major (j * nx + i).
struct GridSpec {
  Vec2 origin;
  double h = 1.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  /// n × n cells over the bounding box of the domain, padded by a hair so that
  /// boundary points fall strictly inside the grid.
  static GridSpec covering(const ConvexDomain& domain, std::size_t n);

  std::size_t cell_count() const { return nx * ny; }
  Vec2 cell_center(std::size_t i, std::size_t j) const {
    return {origin.x + (static_cast<double>(i) + 0.5) * h, origin.y + (static_cast<double>(j) + 0.5) * h};
  }
  Vec2 vertex(std::size_t i, std::size_t j) const {
    return {origin.x + static_cast<double>(i) * h, origin.y + static_cast<double>(j) * h};
  }
  bool contains(Vec2 p) const {
    return p.x >= origin.x && p.y >= origin.y && p.x <= origin.x + h * static_cast<double>(nx) &&
           p.y <= origin.y + h * static_cast<double>(ny);
  }
};

}  // namespace lgp
