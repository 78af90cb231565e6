#include "lgp/fields.hpp"

#include <algorithm>
#include <cmath>

namespace lgp {

double DensityGrid::total_sigma() const {
  double s = 0.0;
  for (double v : sigma) s += v;
  return s;
}

namespace {

// Overlap of [a, b] with polygon edge e, or 0 when the segment is not on its line.
double edge_overlap(Vec2 a, Vec2 b, Vec2 e0, Vec2 e1, double tol) {
  const double le = distance(e0, e1);
  const Vec2 d = (e1 - e0) / le;
  if (std::abs(cross(d, a - e0)) > tol || std::abs(cross(d, b - e0)) > tol) return 0.0;
  const double ta = dot(a - e0, d);
  const double tb = dot(b - e0, d);
  const double lo = std::max(0.0, std::min(ta, tb));
  const double hi = std::min(le, std::max(ta, tb));
  return std::max(0.0, hi - lo);
}

std::vector<double> overlaps_by_edge(Vec2 a, Vec2 b, const ConvexDomain& domain) {
  std::vector<double> out;
  if (domain.kind() != DomainKind::Polygon) return out;
  const auto v = domain.vertices();
  const double tol = 1e-9 * domain.diameter();
  out.resize(v.size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    out[k] = edge_overlap(a, b, v[k], v[(k + 1) % v.size()], tol);
  }
  return out;
}

}  // namespace

double segment_boundary_overlap(Vec2 a, Vec2 b, const ConvexDomain& domain) {
  double total = 0.0;
  for (double o : overlaps_by_edge(a, b, domain)) total += o;
  return total;
}

double boundary_mass(const TransportPlan& plan, const ConvexDomain& domain) {
  double total = 0.0;
  for (const PlanPair& p : plan.pairs) total += p.mass * segment_boundary_overlap(p.source.xy, p.target.xy, domain);
  return total;
}

std::vector<double> boundary_mass_by_edge(const TransportPlan& plan, const ConvexDomain& domain) {
  std::vector<double> out(domain.kind() == DomainKind::Polygon ? domain.edge_count() : 0, 0.0);
  for (const PlanPair& p : plan.pairs) {
    const auto o = overlaps_by_edge(p.source.xy, p.target.xy, domain);
    for (std::size_t k = 0; k < o.size(); ++k) out[k] += p.mass * o[k];
  }
  return out;
}

DensityGrid rasterize_density(const TransportPlan& plan, const GridSpec& grid,
                              const ConvexDomain* domain) {
  DensityGrid out;
  out.grid = grid;
  out.sigma.assign(grid.cell_count(), 0.0);
  out.p_vec.assign(grid.cell_count(), Vec2{});
  std::vector<double> cuts;
  for (const PlanPair& pair : plan.pairs) {
    const Vec2 a = pair.source.xy;
    const Vec2 b = pair.target.xy;
    if (!grid.contains(a) || !grid.contains(b)) {
      throw Error(ErrorCode::GridTooSmall, "plan endpoint lies outside the grid");
    }
    const double len = distance(a, b);
    if (len == 0.0) continue;
    if (domain) {
      const double on_boundary = segment_boundary_overlap(a, b, *domain);
      if (on_boundary > 0.0) {
        // In a convex domain a chord touching a flat edge in more than a point lies on it.
        out.boundary_mass += pair.mass * len;
        continue;
      }
    }
    // Parameters where the segment crosses grid lines; consecutive cuts bound
    // the piece inside one half-open cell.
    cuts.clear();
    cuts.push_back(0.0);
    cuts.push_back(1.0);
    const Vec2 d = b - a;
    auto add_lines = [&](double p0, double dp, double o) {
      if (dp == 0.0) return;
      const double lo = std::min(p0, p0 + dp);
      const double hi = std::max(p0, p0 + dp);
      const auto k0 = static_cast<long>(std::ceil((lo - o) / grid.h));
      const auto k1 = static_cast<long>(std::floor((hi - o) / grid.h));
      for (long k = k0; k <= k1; ++k) {
        const double t = (o + static_cast<double>(k) * grid.h - p0) / dp;
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
      }
    };
    add_lines(a.x, d.x, grid.origin.x);
    add_lines(a.y, d.y, grid.origin.y);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double dt = cuts[k + 1] - cuts[k];
      if (dt <= 0.0) continue;
      const Vec2 mid = a + (0.5 * (cuts[k] + cuts[k + 1])) * d;
      auto ci = static_cast<long>(std::floor((mid.x - grid.origin.x) / grid.h));
      auto cj = static_cast<long>(std::floor((mid.y - grid.origin.y) / grid.h));
      ci = std::clamp<long>(ci, 0, static_cast<long>(grid.nx) - 1);
      cj = std::clamp<long>(cj, 0, static_cast<long>(grid.ny) - 1);
      const std::size_t cell = static_cast<std::size_t>(cj) * grid.nx + static_cast<std::size_t>(ci);
      out.sigma[cell] += pair.mass * len * dt;
      out.p_vec[cell] += (pair.mass * dt) * d;
    }
  }
  return out;
}

double SbvSplit::total_cost() const {
  double c = 0.0;
  for (const PlanFragment& f : fragments) c += f.cost;
  return c;
}

SbvSplit sbv_split(const TransportPlan& plan, const CostNorm& cost) {
  SbvSplit split;
  for (const PlanPair& p : plan.pairs) {
    const std::size_t k = (p.source_tag == AtomTag::Diffuse ? 2 : 0) + (p.target_tag == AtomTag::Diffuse ? 1 : 0);
    split.fragments[k].pairs.push_back(p);
    split.fragments[k].cost += p.mass * cost.cost(p.source.xy, p.target.xy);
  }
  return split;
}

DensityNorms density_norms(const DensityGrid& grid, double p, const std::vector<ExclusionDisc>& excluded) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidArgument, "density norm exponent must be at least 1");
  const GridSpec& g = grid.grid;
  const double area = g.h * g.h;
  DensityNorms out;
  double acc = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double s = grid.sigma[j * g.nx + i];
      if (s == 0.0) continue;
      const Vec2 lo = g.vertex(i, j);
      const Vec2 hi = g.vertex(i + 1, j + 1);
      bool skip = false;
      for (const ExclusionDisc& e : excluded) {
        const Vec2 nearest{std::clamp(e.center.x, lo.x, hi.x), std::clamp(e.center.y, lo.y, hi.y)};
        if (distance(nearest, e.center) < e.radius) {
          skip = true;
          break;
        }
      }
      if (skip) continue;
      const double density = s / area;
      acc += std::pow(density, p) * area;
      out.linf = std::max(out.linf, density);
    }
  }
  out.lp = std::pow(acc, 1.0 / p);
  return out;
}

}  // namespace lgp
