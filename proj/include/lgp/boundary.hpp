#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lgp/geometry.hpp"

namespace lgp {

enum class PieceKind { Constant, Samples };

/// One smooth arc [from, to) of a boundary datum. Sampled pieces hold values at
/// a uniform grid including both endpoints and are linear in between.
struct BoundaryPiece {
  double from = 0.0;
  double to = 0.0;
  PieceKind kind = PieceKind::Constant;
  double value = 0.0;
  std::vector<double> samples;

  double left_limit() const { return kind == PieceKind::Constant ? value : samples.back(); }
  double right_limit() const { return kind == PieceKind::Constant ? value : samples.front(); }
  double value_at(double s) const;
  // Exact integral of the piecewise-linear datum over [a, b] ⊂ [from, to].
  double integral(double a, double b) const;
  double variation() const;
};

struct BoundaryJump {
  double s = 0.0;
  double left = 0.0;
  double right = 0.0;

  double height() const { return right - left; }
};

/// A BV function on the boundary curve of length L: a partition of [0, L) into
/// smooth pieces plus the jump list at piece endpoints. Evaluation uses the
/// good representative (mean of one-sided limits at jumps).
class BoundaryBV {
 public:
  // Jumps are derived from the piece limits. Pieces must partition [0, L).
  BoundaryBV(double length, std::vector<BoundaryPiece> pieces);

  static BoundaryBV constant(double length, double c);
  /// A single sampled piece over [0, L) with `intervals` uniform sub-intervals.
  static BoundaryBV sampled(double length, const std::function<double(double)>& f,
                            std::size_t intervals);

  double length() const { return length_; }
  const std::vector<BoundaryPiece>& pieces() const { return pieces_; }
  const std::vector<BoundaryJump>& jumps() const { return jumps_; }

  double value(double s) const;
  double left_limit(double s) const;
  double right_limit(double s) const;
  /// Mean value over the counterclockwise arc from a to a + len.
  double mean_over(double a, double len) const;
  double min_value() const;
  double max_value() const;

  BoundaryBV scaled(double factor) const;
  BoundaryBV shifted(double c) const;
  /// Same values on a boundary whose arc coordinates are multiplied by factor.
  BoundaryBV reparametrized(double factor) const;

  /// Throws InvalidDatum unless every listed jump sits at a piece endpoint and
  /// matches the piece limits there.
  void check_jumps(const std::vector<BoundaryJump>& listed) const;

 private:
  std::size_t piece_index(double s) const;
  double integral_from_zero(double s) const;

  double length_;
  std::vector<BoundaryPiece> pieces_;
  std::vector<BoundaryJump> jumps_;
};

struct MeasureAtom {
  double s = 0.0;
  double mass = 0.0;  // signed
};

/// Piecewise-constant signed density over [from, to) on uniform sub-intervals.
struct DensityRun {
  double from = 0.0;
  double to = 0.0;
  std::vector<double> density;

  double step() const { return (to - from) / static_cast<double>(density.size()); }
};

/// Signed measure on the boundary: atoms plus absolutely continuous part.
struct SignedBoundaryMeasure {
  double length = 0.0;
  std::vector<MeasureAtom> atoms;
  std::vector<DensityRun> densities;

  double total_variation() const;
  double net_mass() const;
};

enum class AtomTag { Atomic, Diffuse };

struct Atom {
  BoundaryPoint location;
  double mass = 0.0;
  AtomTag tag = AtomTag::Atomic;
};

/// Balanced positive measures (f⁺, f⁻) on the boundary, as finite atom lists
/// sorted by arc coordinate.
struct BoundaryMeasurePair {
  std::vector<Atom> positive;
  std::vector<Atom> negative;
  double total_mass = 0.0;

  /// Throws Unbalanced / InvalidArgument when an invariant fails.
  void validate(double length) const;
  double max_diffuse_mass() const;
};

struct AtomSpec {
  double s = 0.0;
  double mass = 0.0;
  AtomTag tag = AtomTag::Atomic;
};

BoundaryMeasurePair make_measure_pair(const ConvexDomain& domain,
                                      const std::vector<AtomSpec>& positive,
                                      const std::vector<AtomSpec>& negative);

SignedBoundaryMeasure tangential_derivative(const BoundaryBV& g);

/// Lump a signed boundary measure into balanced atoms. Exact atoms are kept as
/// Atomic; each sign-constant arc of each density run is cut into n_diffuse
/// equal cells, each lumped at its mass centroid as a Diffuse atom.
BoundaryMeasurePair discretize(const ConvexDomain& domain, const SignedBoundaryMeasure& f,
                               std::size_t n_diffuse);

double total_variation_boundary(const BoundaryBV& g);

BoundaryBV rescale_to_tv(const BoundaryBV& g, double target_tv);

}  // namespace lgp
