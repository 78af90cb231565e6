#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lgp/reconstruct.hpp"

namespace lgp {

struct StabilityRecord {
  double level = 0.0;           // n for data stability, ε for domain approximation
  double datum_variation = 0.0; // |Dg_n|(∂Ω_n)
  double plan_cost = 0.0;
  double l1_distance = 0.0;
  double tv = 0.0;
  double tv_gap = 0.0;          // |TV_n − TV_ref|
  // Domain approximation only.
  double variation_identity_error = 0.0;  // | |Dg_n|(∂Ω_n) − |Dg|(∂Ω) |
  double pushforward_error = 0.0;      // largest atom mismatch after projecting back
  double hausdorff = 0.0;
};

struct StabilityReport {
  std::vector<StabilityRecord> records;
  double reference_tv = 0.0;
  bool l1_non_increasing = false;   // within the slack band
  bool tv_gap_non_increasing = false;
  bool l1_strictly_decreasing = false;
  double slack = 0.10;
  std::size_t eval_grid = 256;
};

/// Piecewise-constant version of g taking n equally spaced values between
/// min g and max g (nearest level). Two-valued data are left unchanged.
BoundaryBV quantize(const BoundaryBV& g, std::size_t levels);

/// Values of u at the centres of the eval_grid² cells covering Ω (NaN outside).
/// Points on the jump set are nudged off it.
std::vector<double> sample_solution(const PlanarSolution& sol, const ConvexDomain& domain,
                                    std::size_t eval_grid);

/// h² · Σ |a − b| over cells inside Ω.
double l1_distance(const std::vector<double>& a, const std::vector<double>& b, const ConvexDomain& domain,
                   std::size_t eval_grid);

/// Quantize, rescale to |Dg|, solve and compare with the finest level.
StabilityReport run_data_stability(const ConvexDomain& domain, const BoundaryBV& g,
                                   const std::vector<std::size_t>& schedule,
                                   const CostNorm& cost = CostNorm::euclidean(), std::size_t eval_grid = 256);

/// Solve on the dilated discs (1 + ε)Ω with the datum transported along the
/// radial projection, and compare the restriction to Ω with the direct solution.
StabilityReport run_domain_approx(const ConvexDomain& domain, const BoundaryBV& g,
                                  const std::vector<double>& eps_schedule, std::size_t n_diffuse,
                                  const CostNorm& cost = CostNorm::euclidean(), std::size_t eval_grid = 256);

struct MonotoneVerdict {
  bool monotone = false;
  std::optional<std::size_t> violating_edge;
  std::string violation;
  double boundary_mass = 0.0;
  std::optional<std::size_t> mass_edge;  // edge carrying most boundary mass
  bool solution_exists = false;
  std::optional<PlanarSolution> solution;
  std::string message;
};

/// Edge-wise monotonicity of g on a polygon, followed by the solve and the
/// boundary-mass test.
MonotoneVerdict check_monotone_polygon(const ConvexDomain& domain, const BoundaryBV& g, std::size_t n_diffuse,
                                       const CostNorm& cost = CostNorm::euclidean());

enum class BrothersQuantity { U1, Z1, Phi1, U2 };

/// Closed-form values of the cos 2θ example on the unit disc and of its
/// discontinuous modification (U2 uses `lambda` on the central square).
/// Throws OnCaseBoundary on a region boundary and OutsideDomain off the disc.
std::variant<double, Vec2> brothers_reference(BrothersQuantity which, Vec2 p, double lambda = 0.0);

/// The second Kantorovich potential of the example (distance to the two
/// diagonal corners inside the square).
double brothers_phi2(Vec2 p);

/// g(θ) = cos 2θ on the unit circle, sampled with `intervals` sub-intervals.
BoundaryBV brothers_g1(std::size_t intervals = 4096);
/// cos 2θ + 1 where |x| > √2/2 and cos 2θ − 1 where |y| > √2/2.
BoundaryBV brothers_g2(std::size_t intervals_per_piece = 1024);

}  // namespace lgp
