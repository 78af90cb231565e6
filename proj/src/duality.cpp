#include "lgp/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace lgp {

Potential Potential::shifted(double c) const {
  Potential out = *this;
  for (double& v : out.source_values) v += c;
  for (double& v : out.target_values) v += c;
  return out;
}

namespace {

TransportPlan indexed_copy(const TransportPlan& plan, const BoundaryMeasurePair& mu) {
  TransportPlan copy = plan;
  const bool in_range = std::all_of(copy.pairs.begin(), copy.pairs.end(), [&](const PlanPair& p) {
    return p.source_atom < mu.positive.size() && p.target_atom < mu.negative.size() &&
           distance(mu.positive[p.source_atom].location.xy, p.source.xy) == 0.0 &&
           distance(mu.negative[p.target_atom].location.xy, p.target.xy) == 0.0;
  });
  if (!in_range) attach_atom_indices(copy, mu);
  return copy;
}

}  // namespace

Potential dual_potentials(const TransportPlan& plan, const BoundaryMeasurePair& mu,
                          const CostNorm& cost) {
  const std::size_t m = mu.positive.size();
  const std::size_t n = mu.negative.size();
  Potential phi;
  for (const Atom& a : mu.positive) phi.source_points.push_back(a.location.xy);
  for (const Atom& a : mu.negative) phi.target_points.push_back(a.location.xy);
  phi.source_values.assign(m, 0.0);
  phi.target_values.assign(n, 0.0);
  if (m == 0 || n == 0) return phi;

  const TransportPlan indexed = indexed_copy(plan, mu);
  std::vector<double> c(m * n);
  double max_cost = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = cost.cost(phi.source_points[i], phi.target_points[j]);
      max_cost = std::max(max_cost, c[i * n + j]);
    }
  }
  const double tol = 1e-9 * std::max(1.0, max_cost);

  // Nodes: sources [0, m), targets [m, m + n). Support edges fix differences.
  std::vector<std::vector<std::size_t>> adj(m + n);
  for (const PlanPair& p : indexed.pairs) {
    adj[p.source_atom].push_back(m + p.target_atom);
    adj[m + p.target_atom].push_back(p.source_atom);
  }
  std::vector<double> value(m + n, 0.0);
  std::vector<long> component(m + n, -1);
  std::size_t components = 0;
  for (std::size_t start = 0; start < m + n; ++start) {
    if (component[start] >= 0) continue;
    const auto id = static_cast<long>(components++);
    component[start] = id;
    value[start] = 0.0;
    std::queue<std::size_t> q;
    q.push(start);
    while (!q.empty()) {
      const std::size_t a = q.front();
      q.pop();
      for (std::size_t b : adj[a]) {
        // φ(source) − φ(target) = c on the support.
        const double cab = a < m ? c[a * n + (b - m)] : c[b * n + (a - m)];
        const double vb = a < m ? value[a] - cab : value[a] + cab;
        if (component[b] < 0) {
          component[b] = id;
          value[b] = vb;
          q.push(b);
        } else if (std::abs(value[b] - vb) > tol) {
          throw Error(ErrorCode::NotOptimal, "plan support contains a cycle with nonzero cost imbalance");
        }
      }
    }
  }

  // Component offsets t: for a source in A and a target in B,
  // (value_i + t_A) − (value_j + t_B) ≤ c_ij, i.e. t_A ≤ t_B + w(B → A).
  std::vector<double> w(components * components, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto a = static_cast<std::size_t>(component[i]);
      const auto b = static_cast<std::size_t>(component[m + j]);
      const double slack = c[i * n + j] - value[i] + value[m + j];
      if (a == b) {
        if (slack < -tol) throw Error(ErrorCode::NotOptimal, "dual constraint violated inside a support component");
        continue;
      }
      w[b * components + a] = std::min(w[b * components + a], slack);
    }
  }
  std::vector<double> offset(components, 0.0);
  for (std::size_t round = 0; round <= components; ++round) {
    bool changed = false;
    for (std::size_t b = 0; b < components; ++b) {
      for (std::size_t a = 0; a < components; ++a) {
        const double wt = w[b * components + a];
        if (std::isfinite(wt) && offset[b] + wt < offset[a] - tol * 1e-3) {
          offset[a] = offset[b] + wt;
          changed = true;
        }
      }
    }
    if (!changed) break;
    if (round == components) throw Error(ErrorCode::NotOptimal, "no dual solution is saturated on the plan support");
  }
  for (std::size_t k = 0; k < m + n; ++k) value[k] += offset[static_cast<std::size_t>(component[k])];

  const double base = value[0];
  for (std::size_t i = 0; i < m; ++i) phi.source_values[i] = value[i] - base;
  for (std::size_t j = 0; j < n; ++j) phi.target_values[j] = value[m + j] - base;

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (phi.source_values[i] - phi.target_values[j] > c[i * n + j] + tol) {
        throw Error(ErrorCode::NotOptimal, "complementary slackness fails for this plan");
      }
    }
  }
  return phi;
}

ExtendedPotential::ExtendedPotential(Potential phi, CostNorm cost)
    : phi_(std::move(phi)), cost_(std::move(cost)) {
  points_ = phi_.source_points;
  points_.insert(points_.end(), phi_.target_points.begin(), phi_.target_points.end());
  values_ = phi_.source_values;
  values_.insert(values_.end(), phi_.target_values.begin(), phi_.target_values.end());
}

double ExtendedPotential::operator()(Vec2 z) const {
  if (points_.empty()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  if (cost_.kind() == NormKind::Euclidean) {
    for (std::size_t k = 0; k < points_.size(); ++k) {
      const double dx = z.x - points_[k].x;
      const double dy = z.y - points_[k].y;
      best = std::min(best, values_[k] + std::sqrt(dx * dx + dy * dy));
    }
    return best;
  }
  for (std::size_t k = 0; k < points_.size(); ++k) best = std::min(best, values_[k] + cost_(z - points_[k]));
  return best;
}

ExtendedPotential extend_potential(const Potential& phi, const CostNorm& cost) {
  return ExtendedPotential(phi, cost);
}

DualField dual_field_z(const std::function<double(Vec2)>& phi_hat, const ConvexDomain& domain,
                       const GridSpec& grid) {
  DualField f;
  f.grid = grid;
  const std::size_t cells = grid.cell_count();
  f.z.assign(cells, Vec2{});
  f.active.assign(cells, 0);
  f.flagged.assign(cells, 0);
  const double h = grid.h;
  const double half = 0.5 * h;
  for (std::size_t j = 0; j < grid.ny; ++j) {
    for (std::size_t i = 0; i < grid.nx; ++i) {
      const Vec2 c = grid.cell_center(i, j);
      if (!domain.contains(c)) continue;
      const std::size_t k = j * grid.nx + i;
      f.active[k] = 1;
      const double center = phi_hat(c);
      auto partial = [&](Vec2 e) {
        const Vec2 fwd = c + half * e;
        const Vec2 bwd = c - half * e;
        const bool has_fwd = domain.contains(fwd);
        const bool has_bwd = domain.contains(bwd);
        if (has_fwd && has_bwd) return (phi_hat(fwd) - phi_hat(bwd)) / h;
        if (has_fwd) return (phi_hat(fwd) - center) / half;
        if (has_bwd) return (center - phi_hat(bwd)) / half;
        return 0.0;
      };
      const Vec2 grad{partial({1.0, 0.0}), partial({0.0, 1.0})};
      f.z[k] = rotate_quarter(grad);
      const double nz = norm(f.z[k]);
      f.max_norm = std::max(f.max_norm, nz);
      if (nz > 1.0 + 1e-6) {
        f.flagged[k] = 1;
        ++f.flagged_count;
      }
    }
  }

  // Dual cell around each grid vertex whose four neighbouring cells are active.
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 1; j < grid.ny; ++j) {
    for (std::size_t i = 1; i < grid.nx; ++i) {
      const std::size_t sw = (j - 1) * grid.nx + (i - 1);
      const std::size_t se = sw + 1;
      const std::size_t nw = sw + grid.nx;
      const std::size_t ne = nw + 1;
      if (!f.active[sw] || !f.active[se] || !f.active[nw] || !f.active[ne]) continue;
      const double flux_x = 0.5 * (f.z[se].x + f.z[ne].x) - 0.5 * (f.z[sw].x + f.z[nw].x);
      const double flux_y = 0.5 * (f.z[nw].y + f.z[ne].y) - 0.5 * (f.z[sw].y + f.z[se].y);
      const double div = std::abs((flux_x + flux_y) * h) / (h * h);
      f.max_divergence = std::max(f.max_divergence, div);
      sum += div;
      ++count;
    }
  }
  f.mean_divergence = count ? sum / static_cast<double>(count) : 0.0;
  return f;
}

double duality_report(const TransportPlan& plan, const Potential& phi, const BoundaryMeasurePair& mu) {
  double dual = 0.0;
  for (std::size_t i = 0; i < mu.positive.size(); ++i) dual += phi.source_values[i] * mu.positive[i].mass;
  for (std::size_t j = 0; j < mu.negative.size(); ++j) dual -= phi.target_values[j] * mu.negative[j].mass;
  return std::abs(plan.cost - dual);
}

double saturation_residual(const TransportPlan& plan, const Potential& phi,
                           const BoundaryMeasurePair& mu, const CostNorm& cost) {
  const TransportPlan indexed = indexed_copy(plan, mu);
  double worst = 0.0;
  for (const PlanPair& p : indexed.pairs) {
    const double gap = phi.source_values[p.source_atom] - phi.target_values[p.target_atom] -
                       cost.cost(p.source.xy, p.target.xy);
    worst = std::max(worst, std::abs(gap));
  }
  return worst;
}

double lipschitz_violation(const Potential& phi, const CostNorm& cost) {
  std::vector<Vec2> pts = phi.source_points;
  pts.insert(pts.end(), phi.target_points.begin(), phi.target_points.end());
  std::vector<double> vals = phi.source_values;
  vals.insert(vals.end(), phi.target_values.begin(), phi.target_values.end());
  double worst = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      worst = std::max(worst, std::abs(vals[a] - vals[b]) - cost.cost(pts[a], pts[b]));
    }
  }
  return std::max(0.0, worst);
}

}  // namespace lgp
