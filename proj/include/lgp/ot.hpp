#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lgp/boundary.hpp"

namespace lgp {

enum class NormKind { Euclidean, PluggableStrictlyConvex };

/// Transport cost c(x, y) = ‖x − y‖ for a strictly convex norm.
class CostNorm {
 public:
  static CostNorm euclidean();
  /// Wraps a user norm after spot-checking the norm axioms and strict
  /// convexity on a fixed set of sample vectors; throws InvalidNorm.
  static CostNorm pluggable(std::string name, std::function<double(Vec2)> evaluator);
  /// ℓ^p norm, p > 1 (strictly convex).
  static CostNorm lp(double p);

  NormKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double operator()(Vec2 d) const {
    return kind_ == NormKind::Euclidean ? norm(d) : evaluator_(d);
  }
  double cost(Vec2 from, Vec2 to) const { return (*this)(to - from); }

 private:
  NormKind kind_ = NormKind::Euclidean;
  std::string name_ = "euclidean";
  std::function<double(Vec2)> evaluator_;
};

struct PlanPair {
  BoundaryPoint source;
  BoundaryPoint target;
  double mass = 0.0;
  AtomTag source_tag = AtomTag::Atomic;
  AtomTag target_tag = AtomTag::Atomic;
  std::size_t source_atom = 0;  // index into BoundaryMeasurePair::positive
  std::size_t target_atom = 0;  // index into BoundaryMeasurePair::negative
};

/// Finitely supported transport plan between boundary atoms.
struct TransportPlan {
  std::vector<PlanPair> pairs;
  double cost = 0.0;
  double source_mass = 0.0;
  double target_mass = 0.0;
};

/// Sum of mass · cost over pairs.
double plan_cost(const std::vector<PlanPair>& pairs, const CostNorm& cost);
TransportPlan make_plan(std::vector<PlanPair> pairs, const CostNorm& cost);

/// Fills source_atom / target_atom of every pair by matching endpoint
/// locations against the atoms of mu (tolerance 1e-9 · scale). Throws
/// InvalidArgument for unmatched endpoints.
void attach_atom_indices(TransportPlan& plan, const BoundaryMeasurePair& mu);

/// Exact optimal basic solution of the transportation problem between the
/// atoms of mu, computed by network simplex. Deterministic: pairs are sorted by
/// (source index, target index).
TransportPlan solve_kantorovich(const BoundaryMeasurePair& mu, const CostNorm& cost);

/// The optimal plan of least Σ mass². A basic solution sits at an arbitrary
/// vertex when the optimum is degenerate; this one is unique, so it keeps the
/// symmetries of the data and is reversed exactly when f⁺ and f⁻ swap.
TransportPlan central_optimal_plan(const BoundaryMeasurePair& mu, const CostNorm& cost);

struct OracleResult {
  double cost = 0.0;
  TransportPlan plan;
};

inline constexpr std::size_t kOracleMaxAtoms = 6;

/// Exhaustive minimum over all spanning-tree basic feasible solutions; for at
/// most kOracleMaxAtoms atoms per side. Throws TooLarge otherwise.
OracleResult brute_force_oracle(const BoundaryMeasurePair& mu, const CostNorm& cost);

struct PlanReport {
  double max_marginal_residual = 0.0;
  std::size_t crossing_count = 0;
  // Largest distance from a crossing point to the nearer endpoint of either
  // segment; 0 when nothing crosses.
  double max_crossing_depth = 0.0;
  std::size_t pair_count = 0;
};

PlanReport plan_diagnostics(const TransportPlan& plan, const BoundaryMeasurePair& mu);

/// True when the closed segments [a0,a1] and [b0,b1] meet anywhere other than
/// a shared endpoint (tolerance tol); depth receives the crossing depth.
/// Collinear overlap counts only for opposite orientations.
bool segments_cross(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double tol, double* depth = nullptr);

}  // namespace lgp
