#include "lgp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lgp/fields.hpp"
#include "lgp/grid.hpp"

namespace lgp {

namespace {

BoundaryPiece constant_piece(double from, double to, double value) {
  BoundaryPiece p;
  p.from = from;
  p.to = to;
  p.value = value;
  return p;
}

bool non_increasing(const std::vector<double>& v, double slack) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[k - 1] * (1.0 + slack) + 1e-12) return false;
  }
  return true;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] < v[k - 1])) return false;
  }
  return true;
}

std::string format_mass(double m) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", m);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

BoundaryBV quantize(const BoundaryBV& g, std::size_t levels) {
  if (levels < 2) throw Error(ErrorCode::InvalidArgument, "quantization needs at least two levels");
  const double lo = g.min_value();
  const double hi = g.max_value();
  if (!(hi > lo)) return g;
  const double step = (hi - lo) / static_cast<double>(levels - 1);
  auto level_of = [&](double v) {
    const double k = std::round((v - lo) / step);
    return static_cast<long>(std::clamp(k, 0.0, static_cast<double>(levels - 1)));
  };
  auto level_value = [&](long k) { return k == static_cast<long>(levels - 1) ? hi : lo + static_cast<double>(k) * step; };

  struct Run {
    double from;
    long level;
  };
  std::vector<Run> runs;
  auto push = [&](double s, long level) {
    if (!runs.empty() && runs.back().level == level) return;
    if (!runs.empty() && s <= runs.back().from) {
      runs.back().level = level;
      return;
    }
    runs.push_back({s, level});
  };
  for (const BoundaryPiece& p : g.pieces()) {
    if (p.kind == PieceKind::Constant) {
      push(p.from, level_of(p.value));
      continue;
    }
    const std::size_t intervals = p.samples.size() - 1;
    const double h = (p.to - p.from) / static_cast<double>(intervals);
    push(p.from, level_of(p.samples.front()));
    for (std::size_t k = 0; k < intervals; ++k) {
      const double v0 = p.samples[k];
      const double v1 = p.samples[k + 1];
      const long l0 = level_of(v0);
      const long l1 = level_of(v1);
      if (l0 == l1) continue;
      const double s0 = p.from + static_cast<double>(k) * h;
      // Cross every rounding threshold between the two levels in order.
      const long dir = l1 > l0 ? 1 : -1;
      for (long l = l0; l != l1; l += dir) {
        const double threshold = lo + (static_cast<double>(l) + 0.5 * static_cast<double>(dir)) * step;
        const double t = std::clamp((threshold - v0) / (v1 - v0), 0.0, 1.0);
        push(s0 + t * h, l + dir);
      }
    }
  }
  const double L = g.length();
  // Merge a last run that matches the first across arc coordinate 0.
  std::vector<BoundaryPiece> pieces;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const double to = k + 1 < runs.size() ? runs[k + 1].from : L;
    if (to - runs[k].from <= 1e-12 * L) continue;
    const double v = level_value(runs[k].level);
    if (!pieces.empty() && pieces.back().value == v) {
      pieces.back().to = to;
    } else {
      pieces.push_back(constant_piece(pieces.empty() ? 0.0 : runs[k].from, to, v));
    }
  }
  pieces.front().from = 0.0;
  pieces.back().to = L;
  return BoundaryBV(L, std::move(pieces));
}

std::vector<double> sample_solution(const PlanarSolution& sol, const ConvexDomain& domain, std::size_t eval_grid) {
  const GridSpec grid = GridSpec::covering(domain, eval_grid);
  std::vector<double> out(grid.cell_count(), std::numeric_limits<double>::quiet_NaN());
  const double nudge = 1e-6 * domain.scale();
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const Vec2 c = grid.cell_center(i, j);
      if (!(domain.signed_distance(c) < 0.0)) continue;
      double v = 0.0;
      bool done = false;
      for (int attempt = 0; attempt < 4 && !done; ++attempt) {
        const double a = 0.7 + 1.6 * attempt;
        const Vec2 p = attempt == 0 ? c : c + nudge * Vec2{std::cos(a), std::sin(a)};
        try {
          v = sol.value(p);
          done = true;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::OnJumpSet) throw;
        }
      }
      if (!done) throw Error(ErrorCode::NumericFailure, "evaluation point stays on the jump set");
      out[j * grid.nx + i] = v;
    }
  }
  return out;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b, const ConvexDomain& domain,
                   std::size_t eval_grid) {
  const GridSpec grid = GridSpec::covering(domain, eval_grid);
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::isnan(a[k]) || std::isnan(b[k])) continue;
    acc += std::abs(a[k] - b[k]);
  }
  return acc * grid.h * grid.h;
}

StabilityReport run_data_stability(const ConvexDomain& domain, const BoundaryBV& g,
                                   const std::vector<std::size_t>& schedule, const CostNorm& cost,
                                   std::size_t eval_grid) {
  if (schedule.empty()) throw Error(ErrorCode::InvalidArgument, "empty schedule");
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    if (schedule[k] <= schedule[k - 1]) throw Error(ErrorCode::InvalidArgument, "schedule must increase");
  }
  StabilityReport report;
  report.eval_grid = eval_grid;
  const double dg = total_variation_boundary(g);
  report.records.resize(schedule.size());
  if (dg == 0.0) {
    for (std::size_t k = 0; k < schedule.size(); ++k) report.records[k].level = static_cast<double>(schedule[k]);
    report.l1_non_increasing = report.tv_gap_non_increasing = true;
    report.l1_strictly_decreasing = false;
    return report;
  }
  std::vector<std::vector<double>> samples(schedule.size());
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const BoundaryBV gn = rescale_to_tv(quantize(g, schedule[k]), dg);
    const LeastGradientResult res = solve_least_gradient(domain, gn, 1, cost);
    StabilityRecord& r = report.records[k];
    r.level = static_cast<double>(schedule[k]);
    r.datum_variation = total_variation_boundary(gn);
    r.plan_cost = res.plan.cost;
    r.tv = total_variation_solution(res.solution);
    samples[k] = sample_solution(res.solution, domain, eval_grid);
  }
  report.reference_tv = report.records.back().tv;
  std::vector<double> l1, gaps;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    StabilityRecord& r = report.records[k];
    r.l1_distance = l1_distance(samples[k], samples.back(), domain, eval_grid);
    r.tv_gap = std::abs(r.tv - report.reference_tv);
    l1.push_back(r.l1_distance);
    gaps.push_back(r.tv_gap);
  }
  report.l1_non_increasing = non_increasing(l1, report.slack);
  report.tv_gap_non_increasing = non_increasing(gaps, report.slack);
  report.l1_strictly_decreasing = strictly_decreasing(l1);
  return report;
}

StabilityReport run_domain_approx(const ConvexDomain& domain, const BoundaryBV& g,
                                  const std::vector<double>& eps_schedule, std::size_t n_diffuse,
                                  const CostNorm& cost, std::size_t eval_grid) {
  if (domain.kind() != DomainKind::Disc) {
    throw Error(ErrorCode::NotStrictlyConvex, "outer approximation needs a strictly convex (disc) domain");
  }
  for (double e : eps_schedule) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw Error(ErrorCode::InvalidArgument, "eps must be nonnegative");
  }
  StabilityReport report;
  report.eval_grid = eval_grid;
  const double dg = total_variation_boundary(g);
  const LeastGradientResult direct = solve_least_gradient(domain, g, n_diffuse, cost);
  report.reference_tv = total_variation_solution(direct.solution);
  const std::vector<double> reference = sample_solution(direct.solution, domain, eval_grid);

  std::vector<double> l1, gaps;
  for (double eps : eps_schedule) {
    StabilityRecord r;
    r.level = eps;
    const ConvexDomain outer = domain.scaled(1.0 + eps);
    const BoundaryBV gn = g.reparametrized(1.0 + eps);
    r.datum_variation = total_variation_boundary(gn);
    r.variation_identity_error = std::abs(r.datum_variation - dg);
    r.hausdorff = hausdorff_boundary_distance(domain, outer);
    const LeastGradientResult res = solve_least_gradient(outer, gn, n_diffuse, cost);
    r.plan_cost = res.plan.cost;
    r.tv = total_variation_solution(res.solution);
    r.tv_gap = std::abs(r.tv - report.reference_tv);

    // Projecting the atoms of the outer problem back onto ∂Ω must give the
    // atoms of the direct problem.
    if (res.measure && direct.measure) {
      auto compare = [&](const std::vector<Atom>& outer_atoms, const std::vector<Atom>& inner_atoms) {
        if (outer_atoms.size() != inner_atoms.size()) {
          r.pushforward_error = std::numeric_limits<double>::infinity();
          return;
        }
        for (std::size_t k = 0; k < outer_atoms.size(); ++k) {
          const Vec2 p = project_to_boundary(domain, outer_atoms[k].location.xy).xy;
          r.pushforward_error = std::max({r.pushforward_error, distance(p, inner_atoms[k].location.xy),
                                          std::abs(outer_atoms[k].mass - inner_atoms[k].mass)});
        }
      };
      compare(res.measure->positive, direct.measure->positive);
      compare(res.measure->negative, direct.measure->negative);
    } else if (res.measure.has_value() != direct.measure.has_value()) {
      r.pushforward_error = std::numeric_limits<double>::infinity();
    }

    // Restriction to Ω: the outer solution evaluated on the same sample points.
    const GridSpec grid = GridSpec::covering(domain, eval_grid);
    std::vector<double> restricted(grid.cell_count(), std::numeric_limits<double>::quiet_NaN());
    const double nudge = 1e-6 * domain.scale();
    for (std::size_t j = 0; j < grid.ny; ++j) {
      for (std::size_t i = 0; i < grid.nx; ++i) {
        const std::size_t k = j * grid.nx + i;
        if (std::isnan(reference[k])) continue;
        const Vec2 c = grid.cell_center(i, j);
        for (int attempt = 0; attempt < 4; ++attempt) {
          const double a = 0.7 + 1.6 * attempt;
          const Vec2 p = attempt == 0 ? c : c + nudge * Vec2{std::cos(a), std::sin(a)};
          try {
            restricted[k] = res.solution.value(p);
            break;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::OnJumpSet || attempt == 3) throw;
          }
        }
      }
    }
    r.l1_distance = l1_distance(restricted, reference, domain, eval_grid);
    l1.push_back(r.l1_distance);
    gaps.push_back(r.tv_gap);
    report.records.push_back(r);
  }
  report.l1_non_increasing = non_increasing(l1, report.slack);
  report.tv_gap_non_increasing = non_increasing(gaps, report.slack);
  report.l1_strictly_decreasing = strictly_decreasing(l1);
  return report;
}

MonotoneVerdict check_monotone_polygon(const ConvexDomain& domain, const BoundaryBV& g, std::size_t n_diffuse,
                                       const CostNorm& cost) {
  if (domain.kind() != DomainKind::Polygon) {
    throw Error(ErrorCode::InvalidDomain, "monotonicity check needs a polygon");
  }
  MonotoneVerdict v;
  v.monotone = true;
  const double L = domain.boundary_length();
  const double tol = 1e-9 * L;
  const std::size_t edges = domain.edge_count();
  const double dg = total_variation_boundary(g);
  const double mass_tol = 1e-12 * std::max(1.0, dg);
  const SignedBoundaryMeasure f = tangential_derivative(g);

  for (std::size_t e = 0; e < edges && v.monotone; ++e) {
    const double s0 = domain.vertex_s(e);
    const double s1 = e + 1 < edges ? domain.vertex_s(e + 1) : L;
    double up = 0.0;
    double down = 0.0;
    for (const MeasureAtom& a : f.atoms) {
      if (std::abs(a.s - s0) <= tol || std::abs(a.s - s0 - L) <= tol) {
        v.monotone = false;
        v.violating_edge = e;
        v.violation = "datum jumps at vertex " + std::to_string(e) + " (start of edge l" + std::to_string(e) + ")";
        break;
      }
      if (a.s > s0 + tol && a.s < s1 - tol) (a.mass > 0.0 ? up : down) += std::abs(a.mass);
    }
    if (!v.monotone) break;
    for (const DensityRun& run : f.densities) {
      const double h = run.step();
      for (std::size_t k = 0; k < run.density.size(); ++k) {
        const double lo = std::max(s0, run.from + static_cast<double>(k) * h);
        const double hi = std::min(s1, run.from + static_cast<double>(k + 1) * h);
        if (hi <= lo) continue;
        const double m = run.density[k] * (hi - lo);
        (m > 0.0 ? up : down) += std::abs(m);
      }
    }
    if (up > mass_tol && down > mass_tol) {
      v.monotone = false;
      v.violating_edge = e;
      v.violation = "datum is not monotone on edge l" + std::to_string(e);
    }
  }

  if (dg == 0.0) {
    v.solution_exists = true;
    v.solution = solve_least_gradient(domain, g, n_diffuse, cost).solution;
    v.message = "constant datum: constant solution";
    return v;
  }
  const BoundaryMeasurePair mu = discretize(domain, f, n_diffuse);
  const TransportPlan plan = central_optimal_plan(mu, cost);
  v.boundary_mass = boundary_mass(plan, domain);
  const std::vector<double> per_edge = boundary_mass_by_edge(plan, domain);
  if (v.boundary_mass > 1e-9 * std::max(1.0, plan.cost)) {
    const auto it = std::max_element(per_edge.begin(), per_edge.end());
    v.mass_edge = static_cast<std::size_t>(it - per_edge.begin());
    v.solution_exists = false;
    v.message = "no least gradient solution: boundary mass " + format_mass(v.boundary_mass) + " on edge l" +
                std::to_string(*v.mass_edge);
    return v;
  }
  Arrangement arr = build_arrangement(plan, domain);
  v.solution = assign_face_values(std::move(arr), g, 2.0 * mu.max_diffuse_mass());
  v.solution_exists = true;
  v.message = v.monotone ? "datum is monotone on every edge; solution reconstructed"
                         : "datum is not edge-monotone but the plan avoids the boundary; solution reconstructed";
  return v;
}

}  // namespace lgp
