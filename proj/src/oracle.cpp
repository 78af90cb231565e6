#include <algorithm>
#include <cmath>
#include <limits>

#include "lgp/ot.hpp"

namespace lgp {

namespace {

// Exhaustive search over spanning-tree basic solutions, organised as a DP on
// node subsets. A basic solution is a spanning tree of the bipartite graph;
// rooted at source 0, every subtree hanging below a node c through a child d
// carries exactly its net imbalance on the edge (c, d). The tree is feasible
// iff every such edge flow points from the source side to the target side.
//   best(Z, c): cheapest way to hang all nodes of Z below c.
// Every feasible tree is reached by exactly one decomposition, so the minimum
// over the DP equals the minimum over all basic feasible solutions.
class TreeEnumerator {
 public:
  TreeEnumerator(const BoundaryMeasurePair& mu, const CostNorm& cost)
      : m_(mu.positive.size()), n_(mu.negative.size()), k_(m_ + n_) {
    mass_.resize(k_);
    pos_.resize(k_);
    for (std::size_t i = 0; i < m_; ++i) {
      mass_[i] = mu.positive[i].mass;
      pos_[i] = mu.positive[i].location.xy;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      mass_[m_ + j] = mu.negative[j].mass;
      pos_[m_ + j] = mu.negative[j].location.xy;
    }
    cost_.assign(k_ * k_, 0.0);
    for (std::size_t a = 0; a < k_; ++a) {
      for (std::size_t b = 0; b < k_; ++b) {
        if (is_source(a) != is_source(b)) {
          const std::size_t s = is_source(a) ? a : b;
          const std::size_t t = is_source(a) ? b : a;
          cost_[a * k_ + b] = cost.cost(pos_[s], pos_[t]);
        }
      }
    }
    const std::size_t subsets = std::size_t{1} << k_;
    net_.assign(subsets, 0.0);
    for (std::size_t z = 1; z < subsets; ++z) {
      const auto low = static_cast<std::size_t>(__builtin_ctzll(z));
      net_[z] = net_[z & (z - 1)] + (is_source(low) ? mass_[low] : -mass_[low]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < m_; ++i) total += mass_[i];
    tol_ = 1e-12 * std::max(1.0, total);
    memo_.assign(subsets * k_, kUnset);
    choice_sub_.assign(subsets * k_, 0);
    choice_child_.assign(subsets * k_, 0);
  }

  double solve() {
    const std::size_t all = (std::size_t{1} << k_) - 1;
    return best(all & ~std::size_t{1}, 0);
  }


 private:
  static constexpr double kUnset = -1.0;

  bool is_source(std::size_t node) const { return node < m_; }

  // Flow on the edge joining c to a hanging subtree with node set y, or a
  // negative value when the direction would be infeasible.
  double edge_flow(std::size_t c, std::size_t y) const {
    const double net = net_[y];
    if (is_source(c)) return -net >= -tol_ ? std::max(0.0, -net) : -1.0;
    return net >= -tol_ ? std::max(0.0, net) : -1.0;
  }

  double best(std::size_t z, std::size_t c) {
    if (z == 0) return 0.0;
    double& slot = memo_[z * k_ + c];
    if (slot != kUnset) return slot;
    const std::size_t low = z & (~z + 1);
    const std::size_t rest = z & ~low;
    double result = std::numeric_limits<double>::infinity();
    std::size_t best_sub = 0;
    std::size_t best_child = 0;
    // Subtree block containing the lowest node of z: low ∪ (any submask of rest).
    for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
      const std::size_t block = sub | low;
      const double flow = edge_flow(c, block);
      if (flow >= 0.0) {
        const double remainder = best(z & ~block, c);
        if (remainder < result) {
          for (std::size_t bits = block; bits; bits &= bits - 1) {
            const auto d = static_cast<std::size_t>(__builtin_ctzll(bits));
            if (is_source(d) == is_source(c)) continue;
            const double total = cost_[c * k_ + d] * flow + best(block & ~(std::size_t{1} << d), d) + remainder;
            if (total < result) {
              result = total;
              best_sub = block;
              best_child = d;
            }
          }
        }
      }
      if (sub == 0) break;
    }
    slot = result;
    choice_sub_[z * k_ + c] = best_sub;
    choice_child_[z * k_ + c] = best_child;
    return result;
  }

 public:
  struct Edge {
    std::size_t source;
    std::size_t target;
    double flow;
  };

  void collect(std::size_t z, std::size_t c, std::vector<Edge>& out) {
    while (z != 0) {
      best(z, c);
      const std::size_t block = choice_sub_[z * k_ + c];
      const std::size_t d = choice_child_[z * k_ + c];
      const double flow = edge_flow(c, block);
      const std::size_t s = is_source(c) ? c : d;
      const std::size_t t = is_source(c) ? d : c;
      out.push_back({s, t - m_, flow});
      collect(block & ~(std::size_t{1} << d), d, out);
      z &= ~block;
    }
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t k_;
  std::vector<double> mass_;
  std::vector<Vec2> pos_;
  std::vector<double> cost_;
  std::vector<double> net_;
  double tol_ = 0.0;
  std::vector<double> memo_;
  std::vector<std::size_t> choice_sub_;
  std::vector<std::size_t> choice_child_;
};

}  // namespace

OracleResult brute_force_oracle(const BoundaryMeasurePair& mu, const CostNorm& cost) {
  if (mu.positive.size() > kOracleMaxAtoms || mu.negative.size() > kOracleMaxAtoms) {
    throw Error(ErrorCode::TooLarge, "brute-force oracle is limited to 6 atoms per side");
  }
  if (mu.positive.empty() || mu.negative.empty()) {
    throw Error(ErrorCode::InvalidArgument, "need at least one atom on each side");
  }
  TreeEnumerator trees(mu, cost);
  OracleResult result;
  result.cost = trees.solve();
  if (!std::isfinite(result.cost)) {
    throw Error(ErrorCode::Unbalanced, "no feasible spanning-tree solution");
  }
  std::vector<TreeEnumerator::Edge> edges;
  const std::size_t all = (std::size_t{1} << (mu.positive.size() + mu.negative.size())) - 1;
  trees.collect(all & ~std::size_t{1}, 0, edges);
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  std::vector<PlanPair> pairs;
  for (const auto& e : edges) {
    if (!(e.flow > 0.0)) continue;
    const Atom& x = mu.positive[e.source];
    const Atom& y = mu.negative[e.target];
    pairs.push_back({x.location, y.location, e.flow, x.tag, y.tag, e.source, e.target});
  }
  result.plan = make_plan(std::move(pairs), cost);
  return result;
}

}  // namespace lgp
