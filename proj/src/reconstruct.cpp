#include "lgp/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lgp {

namespace {

struct Weighted {
  double value;
  double weight;
};

// Interval of minimisers of Σ w·|x − v|.
std::pair<double, double> weighted_median_interval(std::vector<Weighted> items) {
  std::sort(items.begin(), items.end(), [](const Weighted& a, const Weighted& b) { return a.value < b.value; });
  double total = 0.0;
  for (const Weighted& w : items) total += w.weight;
  const double half = 0.5 * total;
  const double tol = 1e-12 * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    acc += items[k].weight;
    if (acc > half + tol) return {items[k].value, items[k].value};
    if (acc >= half - tol) {
      const double hi = k + 1 < items.size() ? items[k + 1].value : items[k].value;
      return {items[k].value, hi};
    }
  }
  return {items.back().value, items.back().value};
}

}  // namespace

PlanarSolution assign_face_values(Arrangement arrangement, const BoundaryBV& g, double diffuse_tolerance) {
  Arrangement& arr = arrangement;
  const double scale = std::max({1.0, std::abs(g.min_value()), std::abs(g.max_value())});
  std::vector<char> known(arr.faces.size(), 0);
  for (std::size_t k = 0; k < arr.faces.size(); ++k) {
    Face& f = arr.faces[k];
    if (f.enclosed) continue;
    double sum = 0.0;
    double len = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const ArcSpan& a : f.arcs) {
      const double mean = g.mean_over(a.from, a.length);
      sum += mean * a.length;
      len += a.length;
      lo = std::min(lo, mean);
      hi = std::max(hi, mean);
    }
    if (hi - lo > diffuse_tolerance + 1e-9 * scale) {
      throw Error(ErrorCode::InconsistentTrace, "one face touches boundary arcs with different data values");
    }
    f.value = sum / len;
    f.lo = f.value;
    f.hi = f.value;
    known[k] = 1;
  }

  // Enclosed faces: weighted median of the neighbours across their chords,
  // resolved outward-in until nothing changes.
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t k = 0; k < arr.faces.size(); ++k) {
      if (known[k]) continue;
      std::vector<Weighted> items;
      for (const FaceChord& fc : arr.faces[k].chords) {
        const ArrangementChord& c = arr.chords[fc.chord];
        const std::size_t other = c.left_face == k ? c.right_face : c.left_face;
        if (known[other]) items.push_back({arr.faces[other].value, c.length()});
      }
      if (items.empty()) continue;
      const auto [lo, hi] = weighted_median_interval(std::move(items));
      Face& f = arr.faces[k];
      f.lo = lo;
      f.hi = hi;
      f.value = 0.5 * (lo + hi);
      known[k] = 1;
      progress = true;
    }
  }
  for (std::size_t k = 0; k < arr.faces.size(); ++k) {
    if (!known[k]) throw Error(ErrorCode::NumericFailure, "an enclosed face has no resolvable neighbour");
  }
  return PlanarSolution(std::move(arrangement));
}

double evaluate_u(const PlanarSolution& sol, Vec2 p) { return sol.value(p); }

double total_variation_solution(const PlanarSolution& sol) {
  double tv = 0.0;
  for (std::size_t k = 0; k < sol.chords().size(); ++k) tv += sol.jump(k) * sol.chords()[k].length();
  return tv;
}

LeastGradientResult solve_least_gradient(const ConvexDomain& domain, const BoundaryBV& g,
                                         std::size_t n_diffuse, const CostNorm& cost) {
  LeastGradientResult out;
  out.boundary_variation = total_variation_boundary(g);
  if (out.boundary_variation == 0.0) {
    Arrangement arr = build_arrangement(TransportPlan{}, domain);
    out.solution = assign_face_values(std::move(arr), g);
    return out;
  }
  const SignedBoundaryMeasure f = tangential_derivative(g);
  out.measure = discretize(domain, f, n_diffuse);
  out.plan = central_optimal_plan(*out.measure, cost);
  Arrangement arr = build_arrangement(out.plan, domain);
  out.solution = assign_face_values(std::move(arr), g, 2.0 * out.measure->max_diffuse_mass());
  return out;
}

}  // namespace lgp
