#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lgp::detail {

struct TransportFlow {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
};

struct TransportSolution {
  std::vector<TransportFlow> flows;  // positive flows, sorted by (source, target)
  // Dual variables with u[i] - v[j] <= cost(i, j), equality on the support.
  std::vector<double> u;
  std::vector<double> v;
  std::size_t pivots = 0;
};

/// Primal network simplex on the complete bipartite graph. `cost` is row-major
/// with supply.size() rows. Supplies and demands must balance up to rounding.
TransportSolution network_simplex(std::span<const double> supply, std::span<const double> demand,
                                  std::span<const double> cost);

}  // namespace lgp::detail
