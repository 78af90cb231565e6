#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lgp/grid.hpp"
#include "lgp/ot.hpp"

namespace lgp {

/// Transport density σ and the vector measure p of a discrete plan, stored as
/// per-cell measures. Segments lying on a flat piece of ∂Ω contribute to
/// boundary_mass instead of the cells.
struct DensityGrid {
  GridSpec grid;
  std::vector<double> sigma;
  std::vector<Vec2> p_vec;
  double boundary_mass = 0.0;

  double cell_sigma(std::size_t i, std::size_t j) const { return sigma[j * grid.nx + i]; }
  double total_sigma() const;
};

/// Walk each plan segment through the grid cells it crosses. With a domain,
/// segments on ∂Ω are routed to boundary_mass. Throws GridTooSmall when an
/// endpoint falls outside the grid.
DensityGrid rasterize_density(const TransportPlan& plan, const GridSpec& grid,
                              const ConvexDomain* domain = nullptr);

/// Σ mass · H¹([x, y] ∩ ∂Ω).
double boundary_mass(const TransportPlan& plan, const ConvexDomain& domain);

/// Per-edge split of boundary_mass for polygons (empty for discs).
std::vector<double> boundary_mass_by_edge(const TransportPlan& plan, const ConvexDomain& domain);

/// Length of the part of segment [a, b] lying on ∂Ω.
double segment_boundary_overlap(Vec2 a, Vec2 b, const ConvexDomain& domain);

struct PlanFragment {
  std::vector<PlanPair> pairs;
  double cost = 0.0;
};

/// Pairs grouped by (source tag, target tag): atomic→atomic, atomic→diffuse,
/// diffuse→atomic, diffuse→diffuse.
struct SbvSplit {
  std::array<PlanFragment, 4> fragments;

  const PlanFragment& jump_to_jump() const { return fragments[0]; }
  const PlanFragment& jump_to_diffuse() const { return fragments[1]; }
  const PlanFragment& diffuse_to_jump() const { return fragments[2]; }
  const PlanFragment& diffuse_to_diffuse() const { return fragments[3]; }
  double total_cost() const;
};

SbvSplit sbv_split(const TransportPlan& plan, const CostNorm& cost = CostNorm::euclidean());

struct ExclusionDisc {
  Vec2 center;
  double radius = 0.0;
};

struct DensityNorms {
  double lp = 0.0;
  double linf = 0.0;
};

/// Lᵖ and L∞ norms of the density σ/h², skipping cells that meet any
/// exclusion disc.
DensityNorms density_norms(const DensityGrid& grid, double p,
                           const std::vector<ExclusionDisc>& excluded = {});

}  // namespace lgp
