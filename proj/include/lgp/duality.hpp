#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lgp/grid.hpp"
#include "lgp/ot.hpp"

namespace lgp {

/// Kantorovich potential on the atoms, in the convention
/// φ(x) − φ(y) = c(y − x) on every transported pair, φ(first source) = 0.
struct Potential {
  std::vector<Vec2> source_points;
  std::vector<double> source_values;
  std::vector<Vec2> target_points;
  std::vector<double> target_values;

  Potential shifted(double c) const;
};

/// Dual variables of the transportation problem, recovered from an optimal
/// plan by complementary slackness. Throws NotOptimal when no feasible dual
/// is saturated on the plan's support.
Potential dual_potentials(const TransportPlan& plan, const BoundaryMeasurePair& mu,
                          const CostNorm& cost);

/// Infimal-convolution extension φ̂(z) = min over atoms a of φ(a) + c(z − a).
class ExtendedPotential {
 public:
  ExtendedPotential(Potential phi, CostNorm cost);
  double operator()(Vec2 z) const;
  const Potential& atoms() const { return phi_; }

 private:
  Potential phi_;
  CostNorm cost_;
  std::vector<Vec2> points_;
  std::vector<double> values_;
};

ExtendedPotential extend_potential(const Potential& phi, const CostNorm& cost);

/// z = R_{π/2}∇φ̂ per grid cell; cells whose center lies outside Ω are inactive.
struct DualField {
  GridSpec grid;
  std::vector<Vec2> z;
  std::vector<char> active;
  std::vector<char> flagged;  // ‖z‖ > 1 + 1e-6 (kinks of φ̂)
  double max_norm = 0.0;
  std::size_t flagged_count = 0;
  // Flux of z out of each interior dual cell divided by its area.
  double max_divergence = 0.0;
  double mean_divergence = 0.0;

  Vec2 at(std::size_t i, std::size_t j) const { return z[j * grid.nx + i]; }
};

/// Any scalar field works; typically an ExtendedPotential.
DualField dual_field_z(const std::function<double(Vec2)>& phi_hat, const ConvexDomain& domain,
                       const GridSpec& grid);

/// |plan.cost − (Σ φ(x)·m⁺ − Σ φ(y)·m⁻)|.
double duality_report(const TransportPlan& plan, const Potential& phi, const BoundaryMeasurePair& mu);

/// Largest |φ(x) − φ(y) − c(y − x)| over plan pairs.
double saturation_residual(const TransportPlan& plan, const Potential& phi,
                           const BoundaryMeasurePair& mu, const CostNorm& cost);

/// Largest violation of |φ(a) − φ(b)| ≤ c(b − a) over all atom pairs.
double lipschitz_violation(const Potential& phi, const CostNorm& cost);

}  // namespace lgp
