#include "lgp/ot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "network_simplex.hpp"

namespace lgp {

CostNorm CostNorm::euclidean() { return CostNorm{}; }

CostNorm CostNorm::pluggable(std::string name, std::function<double(Vec2)> evaluator) {
  if (!evaluator) throw Error(ErrorCode::InvalidNorm, "norm evaluator is empty");
  // Deterministic probe set: 24 directions at three lengths.
  std::vector<Vec2> probes;
  for (int k = 0; k < 24; ++k) {
    const double t = 0.1 + k * std::numbers::pi / 12.0;
    for (double r : {0.3, 1.0, 2.5}) probes.push_back({r * std::cos(t), r * std::sin(t)});
  }
  const double zero = evaluator(Vec2{});
  if (std::abs(zero) > 1e-12) throw Error(ErrorCode::InvalidNorm, "norm of the zero vector is not 0");
  for (const Vec2& u : probes) {
    const double nu = evaluator(u);
    if (!(nu > 0.0) || !std::isfinite(nu)) throw Error(ErrorCode::InvalidNorm, "norm is not positive");
    for (double t : {-2.0, -1.0, 0.5, 3.0}) {
      if (std::abs(evaluator(t * u) - std::abs(t) * nu) > 1e-9 * std::abs(t) * nu) {
        throw Error(ErrorCode::InvalidNorm, "norm is not absolutely homogeneous");
      }
    }
    for (const Vec2& v : probes) {
      const double nv = evaluator(v);
      const double sum = evaluator(u + v);
      if (sum > nu + nv + 1e-9 * (nu + nv)) {
        throw Error(ErrorCode::InvalidNorm, "norm violates the triangle inequality");
      }
      const double sine = std::abs(cross(u, v)) / (norm(u) * norm(v));
      if (sine > 0.2 && sum >= (nu + nv) * (1.0 - 1e-9)) {
        throw Error(ErrorCode::InvalidNorm, "norm is not strictly convex");
      }
    }
  }
  CostNorm c;
  c.kind_ = NormKind::PluggableStrictlyConvex;
  c.name_ = std::move(name);
  c.evaluator_ = std::move(evaluator);
  return c;
}

CostNorm CostNorm::lp(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidNorm, "l^p cost needs 1 < p < inf");
  return pluggable("l" + std::to_string(p), [p](Vec2 d) {
    const double ax = std::abs(d.x);
    const double ay = std::abs(d.y);
    const double m = std::max(ax, ay);
    if (m == 0.0) return 0.0;
    return m * std::pow(std::pow(ax / m, p) + std::pow(ay / m, p), 1.0 / p);
  });
}

double plan_cost(const std::vector<PlanPair>& pairs, const CostNorm& cost) {
  double c = 0.0;
  for (const PlanPair& p : pairs) c += p.mass * cost.cost(p.source.xy, p.target.xy);
  return c;
}

TransportPlan make_plan(std::vector<PlanPair> pairs, const CostNorm& cost) {
  TransportPlan plan;
  plan.pairs = std::move(pairs);
  plan.cost = plan_cost(plan.pairs, cost);
  for (const PlanPair& p : plan.pairs) {
    plan.source_mass += p.mass;
    plan.target_mass += p.mass;
  }
  return plan;
}

namespace {

std::size_t match_atom(const std::vector<Atom>& atoms, Vec2 p, double tol) {
  std::size_t best = atoms.size();
  double best_d = tol;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double d = distance(atoms[k].location.xy, p);
    if (d <= best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

double measure_scale(const BoundaryMeasurePair& mu) {
  double s = 1.0;
  for (const Atom& a : mu.positive) s = std::max({s, std::abs(a.location.xy.x), std::abs(a.location.xy.y)});
  for (const Atom& a : mu.negative) s = std::max({s, std::abs(a.location.xy.x), std::abs(a.location.xy.y)});
  return s;
}

}  // namespace

void attach_atom_indices(TransportPlan& plan, const BoundaryMeasurePair& mu) {
  const double tol = 1e-9 * measure_scale(mu);
  for (PlanPair& p : plan.pairs) {
    const std::size_t i = match_atom(mu.positive, p.source.xy, tol);
    const std::size_t j = match_atom(mu.negative, p.target.xy, tol);
    if (i == mu.positive.size() || j == mu.negative.size()) {
      throw Error(ErrorCode::InvalidArgument, "plan endpoint does not match any atom");
    }
    p.source_atom = i;
    p.target_atom = j;
  }
}

TransportPlan solve_kantorovich(const BoundaryMeasurePair& mu, const CostNorm& cost) {
  if (mu.positive.empty() || mu.negative.empty()) {
    throw Error(ErrorCode::InvalidArgument, "need at least one atom on each side");
  }
  double pos = 0.0;
  double neg = 0.0;
  for (const Atom& a : mu.positive) pos += a.mass;
  for (const Atom& a : mu.negative) neg += a.mass;
  if (std::abs(pos - neg) > 1e-12 * std::max(pos, neg)) {
    throw Error(ErrorCode::Unbalanced, "positive and negative masses differ");
  }
  const std::size_t m = mu.positive.size();
  const std::size_t n = mu.negative.size();
  std::vector<double> supply(m), demand(n), c(m * n);
  for (std::size_t i = 0; i < m; ++i) supply[i] = mu.positive[i].mass;
  for (std::size_t j = 0; j < n; ++j) demand[j] = mu.negative[j].mass;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = cost.cost(mu.positive[i].location.xy, mu.negative[j].location.xy);
    }
  }
  const detail::TransportSolution sol = detail::network_simplex(supply, demand, c);
  std::vector<PlanPair> pairs;
  pairs.reserve(sol.flows.size());
  for (const detail::TransportFlow& f : sol.flows) {
    const Atom& x = mu.positive[f.source];
    const Atom& y = mu.negative[f.target];
    pairs.push_back({x.location, y.location, f.mass, x.tag, y.tag, f.source, f.target});
  }
  return make_plan(std::move(pairs), cost);
}

namespace {

// Bridges of an undirected multigraph given as an edge list (iterative DFS).
std::vector<char> find_bridges(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nodes);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].first].push_back({edges[e].second, e});
    adj[edges[e].second].push_back({edges[e].first, e});
  }
  std::vector<char> bridge(edges.size(), 0);
  std::vector<std::size_t> tin(nodes, 0), low(nodes, 0);
  std::size_t timer = 0;
  struct Frame {
    std::size_t node, via, next;
  };
  const std::size_t none = edges.size();
  for (std::size_t root = 0; root < nodes; ++root) {
    if (tin[root]) continue;
    std::vector<Frame> stack{{root, none, 0}};
    tin[root] = low[root] = ++timer;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.node].size()) {
        const auto [to, e] = adj[f.node][f.next++];
        if (e == f.via) continue;
        if (tin[to]) {
          low[f.node] = std::min(low[f.node], tin[to]);
        } else {
          tin[to] = low[to] = ++timer;
          stack.push_back({to, e, 0});
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        Frame& parent = stack.back();
        low[parent.node] = std::min(low[parent.node], low[done.node]);
        if (low[done.node] > tin[parent.node]) bridge[done.via] = 1;
      }
    }
  }
  return bridge;
}

// Least Σ m² flow with prescribed node throughputs on one block, by exact
// coordinate ascent on the node duals: m_e = max(0, y_a + y_b).
bool least_norm_block(const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::vector<double> need,
                      std::vector<double>& flow) {
  const std::size_t nodes = need.size();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nodes);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].first].push_back({edges[e].second, e});
    adj[edges[e].second].push_back({edges[e].first, e});
  }
  double total = 0.0;
  for (double r : need) total += r;
  std::vector<double> y(nodes, 0.0);
  std::vector<double> kinks;
  for (int sweep = 0; sweep < 200000; ++sweep) {
    for (std::size_t v = 0; v < nodes; ++v) {
      // Solve Σ max(0, y_v + y_w) = need_v for y_v; the left side is
      // piecewise linear and nondecreasing with breakpoints at −y_w.
      kinks.clear();
      for (const auto& [w, e] : adj[v]) kinks.push_back(-y[w]);
      std::sort(kinks.begin(), kinks.end());
      if (need[v] <= 0.0) {
        y[v] = kinks.front();
        continue;
      }
      double sum_other = 0.0;
      for (std::size_t k = 0; k < kinks.size(); ++k) {
        sum_other += -kinks[k];
        const double count = static_cast<double>(k + 1);
        const double t = (need[v] - sum_other) / count;
        if (k + 1 == kinks.size() || t <= kinks[k + 1]) {
          y[v] = t;
          break;
        }
      }
    }
    double worst = 0.0;
    for (std::size_t v = 0; v < nodes; ++v) {
      double through = 0.0;
      for (const auto& [w, e] : adj[v]) through += std::max(0.0, y[v] + y[w]);
      worst = std::max(worst, std::abs(through - need[v]));
    }
    if (worst <= 1e-14 * std::max(1.0, total)) {
      flow.assign(edges.size(), 0.0);
      for (std::size_t e = 0; e < edges.size(); ++e) flow[e] = std::max(0.0, y[edges[e].first] + y[edges[e].second]);
      return true;
    }
  }
  return false;
}

}  // namespace

TransportPlan central_optimal_plan(const BoundaryMeasurePair& mu, const CostNorm& cost) {
  const TransportPlan basic = solve_kantorovich(mu, cost);
  const std::size_t m = mu.positive.size();
  const std::size_t n = mu.negative.size();
  std::vector<double> supply(m), demand(n), c(m * n);
  double max_cost = 0.0;
  for (std::size_t i = 0; i < m; ++i) supply[i] = mu.positive[i].mass;
  for (std::size_t j = 0; j < n; ++j) demand[j] = mu.negative[j].mass;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = cost.cost(mu.positive[i].location.xy, mu.negative[j].location.xy);
      max_cost = std::max(max_cost, c[i * n + j]);
    }
  }
  const detail::TransportSolution sol = detail::network_simplex(supply, demand, c);

  // Every plan carried by the tight edges of an optimal dual is optimal.
  const double tol = 1e-12 * std::max(1.0, max_cost);
  std::vector<std::pair<std::size_t, std::size_t>> tight;  // (source, m + target)
  std::map<std::pair<std::size_t, std::size_t>, double> basic_flow;
  for (const detail::TransportFlow& f : sol.flows) basic_flow[{f.source, f.target}] = f.mass;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (c[i * n + j] - (sol.u[i] - sol.v[j]) <= tol || basic_flow.count({i, j})) tight.push_back({i, m + j});
    }
  }
  if (tight.size() == sol.flows.size()) return basic;

  const std::vector<char> bridge = find_bridges(m + n, tight);
  std::vector<double> flow(tight.size(), 0.0);
  std::vector<double> need(m + n);
  for (std::size_t i = 0; i < m; ++i) need[i] = supply[i];
  for (std::size_t j = 0; j < n; ++j) need[m + j] = demand[j];
  for (std::size_t e = 0; e < tight.size(); ++e) {
    if (!bridge[e]) continue;
    // A bridge carries the same mass in every plan on this edge set.
    const auto it = basic_flow.find({tight[e].first, tight[e].second - m});
    flow[e] = it == basic_flow.end() ? 0.0 : it->second;
    need[tight[e].first] -= flow[e];
    need[tight[e].second] -= flow[e];
  }

  // Group the remaining edges into blocks joined through shared nodes.
  std::vector<std::size_t> parent(m + n);
  for (std::size_t v = 0; v < m + n; ++v) parent[v] = v;
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t e = 0; e < tight.size(); ++e) {
    if (!bridge[e]) parent[find(tight[e].first)] = find(tight[e].second);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t e = 0; e < tight.size(); ++e) {
    if (!bridge[e]) groups[find(tight[e].first)].push_back(e);
  }
  for (const auto& [root, ids] : groups) {
    std::map<std::size_t, std::size_t> local;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t e : ids) {
      const std::size_t a = local.emplace(tight[e].first, local.size()).first->second;
      const std::size_t b = local.emplace(tight[e].second, local.size()).first->second;
      edges.push_back({a, b});
    }
    std::vector<double> block_need(local.size());
    for (const auto& [v, k] : local) block_need[k] = std::max(0.0, need[v]);
    std::vector<double> block_flow;
    if (least_norm_block(edges, block_need, block_flow)) {
      for (std::size_t k = 0; k < ids.size(); ++k) flow[ids[k]] = block_flow[k];
    } else {
      for (std::size_t e : ids) {
        const auto it = basic_flow.find({tight[e].first, tight[e].second - m});
        flow[e] = it == basic_flow.end() ? 0.0 : it->second;
      }
    }
  }

  double total = 0.0;
  for (double s : supply) total += s;
  std::vector<PlanPair> pairs;
  for (std::size_t e = 0; e < tight.size(); ++e) {
    if (flow[e] <= 1e-15 * total) continue;
    const std::size_t i = tight[e].first;
    const std::size_t j = tight[e].second - m;
    const Atom& x = mu.positive[i];
    const Atom& y = mu.negative[j];
    pairs.push_back({x.location, y.location, flow[e], x.tag, y.tag, i, j});
  }
  std::sort(pairs.begin(), pairs.end(), [](const PlanPair& a, const PlanPair& b) {
    return std::pair(a.source_atom, a.target_atom) < std::pair(b.source_atom, b.target_atom);
  });
  return make_plan(std::move(pairs), cost);
}

bool segments_cross(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1, double tol, double* depth) {
  auto interior_depth = [](Vec2 p, Vec2 s0, Vec2 s1) {
    return std::min(distance(p, s0), distance(p, s1));
  };
  auto report = [depth](double d) {
    if (depth) *depth = d;
    return true;
  };
  if (depth) *depth = 0.0;
  const double la = distance(a0, a1);
  const double lb = distance(b0, b1);
  if (la <= tol || lb <= tol) return false;

  // Signed distances of each endpoint to the other segment's line.
  const double o1 = cross(a1 - a0, b0 - a0) / la;
  const double o2 = cross(a1 - a0, b1 - a0) / la;
  const double o3 = cross(b1 - b0, a0 - b0) / lb;
  const double o4 = cross(b1 - b0, a1 - b0) / lb;
  const Vec2 da = (a1 - a0) / la;

  const bool collinear = std::abs(o1) <= tol && std::abs(o2) <= tol;
  if (collinear) {
    const double t0 = dot(b0 - a0, da);
    const double t1 = dot(b1 - a0, da);
    const double lo = std::max(0.0, std::min(t0, t1));
    const double hi = std::min(la, std::max(t0, t1));
    // Overlap in the same direction is monotone transport along one line.
    if (hi - lo > tol && dot(b1 - b0, da) < 0.0) return report(hi - lo);
    return false;
  }

  const bool share = distance(a0, b0) <= tol || distance(a0, b1) <= tol ||
                     distance(a1, b0) <= tol || distance(a1, b1) <= tol;
  if (share) return false;

  auto on_segment = [tol](Vec2 p, Vec2 s0, Vec2 s1, double len) {
    const double t = dot(p - s0, (s1 - s0) / len);
    return t >= -tol && t <= len + tol;
  };
  // Touching: an endpoint lies on the other segment.
  if (std::abs(o1) <= tol && on_segment(b0, a0, a1, la)) return report(interior_depth(b0, a0, a1));
  if (std::abs(o2) <= tol && on_segment(b1, a0, a1, la)) return report(interior_depth(b1, a0, a1));
  if (std::abs(o3) <= tol && on_segment(a0, b0, b1, lb)) return report(interior_depth(a0, b0, b1));
  if (std::abs(o4) <= tol && on_segment(a1, b0, b1, lb)) return report(interior_depth(a1, b0, b1));

  if ((o1 > tol && o2 < -tol) || (o1 < -tol && o2 > tol)) {
    if ((o3 > tol && o4 < -tol) || (o3 < -tol && o4 > tol)) {
      const double t = o1 / (o1 - o2);
      const Vec2 p = b0 + t * (b1 - b0);
      return report(std::max(interior_depth(p, a0, a1), interior_depth(p, b0, b1)));
    }
  }
  return false;
}

PlanReport plan_diagnostics(const TransportPlan& plan, const BoundaryMeasurePair& mu) {
  PlanReport report;
  report.pair_count = plan.pairs.size();
  TransportPlan indexed = plan;
  if (!indexed.pairs.empty()) attach_atom_indices(indexed, mu);
  std::vector<double> out(mu.positive.size(), 0.0);
  std::vector<double> in(mu.negative.size(), 0.0);
  for (const PlanPair& p : indexed.pairs) {
    out[p.source_atom] += p.mass;
    in[p.target_atom] += p.mass;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    report.max_marginal_residual = std::max(report.max_marginal_residual, std::abs(out[i] - mu.positive[i].mass));
  }
  for (std::size_t j = 0; j < in.size(); ++j) {
    report.max_marginal_residual = std::max(report.max_marginal_residual, std::abs(in[j] - mu.negative[j].mass));
  }
  const double tol = 1e-9 * measure_scale(mu);
  const auto& pairs = indexed.pairs;
  for (std::size_t a = 0; a < pairs.size(); ++a) {
    for (std::size_t b = a + 1; b < pairs.size(); ++b) {
      double depth = 0.0;
      if (segments_cross(pairs[a].source.xy, pairs[a].target.xy, pairs[b].source.xy,
                         pairs[b].target.xy, tol, &depth)) {
        ++report.crossing_count;
        report.max_crossing_depth = std::max(report.max_crossing_depth, depth);
      }
    }
  }
  return report;
}

}  // namespace lgp
