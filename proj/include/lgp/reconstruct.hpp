#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lgp/boundary.hpp"
#include "lgp/ot.hpp"

namespace lgp {

/// Counterclockwise boundary arc starting at arc coordinate `from`.
struct ArcSpan {
  double from = 0.0;
  double length = 0.0;
};

struct ArrangementChord {
  Vec2 a;
  Vec2 b;
  std::size_t va = 0;  // boundary vertex ids
  std::size_t vb = 0;
  double mass = 0.0;   // transported mass summed over merged pairs
  std::size_t left_face = 0;   // face on the left of a → b
  std::size_t right_face = 0;
  double length() const { return distance(a, b); }
};

/// Chord side of a face boundary: the face lies to the left of from → to.
struct FaceChord {
  std::size_t chord = 0;
  Vec2 from;
  Vec2 to;
};

struct Face {
  std::vector<ArcSpan> arcs;
  std::vector<FaceChord> chords;
  std::vector<Vec2> outline;  // counterclockwise, arcs sampled
  double area = 0.0;
  Box box;
  bool enclosed = false;
  double value = 0.0;
  double lo = 0.0;  // feasible value interval (enclosed faces)
  double hi = 0.0;
};

/// Subdivision of Ω by non-crossing plan chords. Every face is convex: it is
/// Ω intersected with the left half-planes of its chords.
struct Arrangement {
  std::optional<ConvexDomain> domain;
  std::vector<double> vertex_s;   // boundary vertices, increasing arc coordinate
  std::vector<Vec2> vertex_xy;
  std::vector<ArrangementChord> chords;
  std::vector<Face> faces;
};

/// Throws CrossingSegments when two chords cross and BoundaryMass when a chord
/// runs along a flat piece of ∂Ω.
Arrangement build_arrangement(const TransportPlan& plan, const ConvexDomain& domain);

/// Arrangement plus per-face values: the reconstructed least gradient function.
class PlanarSolution {
 public:
  PlanarSolution() = default;
  explicit PlanarSolution(Arrangement arrangement) : arr_(std::move(arrangement)) {}

  const Arrangement& arrangement() const { return arr_; }
  Arrangement& arrangement() { return arr_; }
  const std::vector<Face>& faces() const { return arr_.faces; }
  const std::vector<ArrangementChord>& chords() const { return arr_.chords; }

  /// Index of the face containing p; throws OnJumpSet within tol of a chord
  /// and OutsideDomain outside Ω.
  std::size_t locate(Vec2 p, double tol = -1.0) const;
  double value(Vec2 p) const { return arr_.faces[locate(p)].value; }

  /// Jump |value(left) − value(right)| across chord k.
  double jump(std::size_t k) const;

 private:
  Arrangement arr_;
};

/// Face values from the boundary trace; enclosed faces take the midpoint of
/// their weighted-median interval. `diffuse_tolerance` bounds the admissible
/// spread of trace means on one face (2 · largest diffuse atom).
PlanarSolution assign_face_values(Arrangement arrangement, const BoundaryBV& g,
                                  double diffuse_tolerance = 0.0);

double evaluate_u(const PlanarSolution& sol, Vec2 p);

/// Σ over chords of |jump| · length.
double total_variation_solution(const PlanarSolution& sol);

/// Full pipeline output for one datum.
struct LeastGradientResult {
  std::optional<BoundaryMeasurePair> measure;  // empty when g is constant
  TransportPlan plan;
  PlanarSolution solution;
  double boundary_variation = 0.0;
};

/// ∂τg → atoms → optimal plan → arrangement → face values. A constant g
/// yields the single-face constant solution.
LeastGradientResult solve_least_gradient(const ConvexDomain& domain, const BoundaryBV& g,
                                         std::size_t n_diffuse, const CostNorm& cost = CostNorm::euclidean());

}  // namespace lgp
