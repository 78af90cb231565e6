#include "network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgp/error.hpp"

namespace lgp::detail {

namespace {

// Spanning-tree network simplex for the uncapacitated transportation problem.
// Node layout: sources [0, m), targets [m, m + n), artificial root m + n.
// Arc layout: real arcs i*n + j (source i -> target j), then one artificial
// arc per node joining it to the root (source -> root, root -> target).
// The tree is kept strongly feasible (Cunningham), which rules out cycling.
class Solver {
 public:
  Solver(std::span<const double> supply, std::span<const double> demand,
         std::span<const double> cost)
      : m_(supply.size()),
        n_(demand.size()),
        real_(m_ * n_),
        arcs_(real_ + m_ + n_),
        root_(static_cast<int>(m_ + n_)),
        cost_(cost) {
    double max_cost = 0.0;
    for (double c : cost_) max_cost = std::max(max_cost, std::abs(c));
    art_cost_ = (max_cost + 1.0) * static_cast<double>(m_ + n_ + 1);
    eps_ = 1e-12 * std::max(1.0, max_cost);

    const std::size_t nodes = m_ + n_ + 1;
    flow_.assign(arcs_, 0.0);
    in_tree_.assign(arcs_, 0);
    parent_.assign(nodes, -1);
    pred_.assign(nodes, -1);
    up_.assign(nodes, 0);
    depth_.assign(nodes, 0);
    pi_.assign(nodes, 0.0);
    children_.assign(nodes, {});
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t a = real_ + i;
      attach_initial(static_cast<int>(i), a, supply[i], true, -art_cost_);
    }
    for (std::size_t j = 0; j < n_; ++j) {
      const std::size_t a = real_ + m_ + j;
      attach_initial(static_cast<int>(m_ + j), a, demand[j], false, art_cost_);
    }
    double total = 0.0;
    for (double s : supply) total += s;
    total_ = total;
  }

  TransportSolution run() {
    const std::size_t block = std::max<std::size_t>(
        10, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(arcs_)))));
    const std::size_t max_pivots = 100 * arcs_ + 1000000;
    std::size_t next = 0;
    std::size_t pivots = 0;
    while (true) {
      const long entering = find_entering(block, next);
      if (entering < 0) break;
      pivot(static_cast<std::size_t>(entering));
      if (++pivots > max_pivots) {
        throw Error(ErrorCode::NumericFailure, "network simplex exceeded its pivot bound");
      }
    }

    for (std::size_t a = real_; a < arcs_; ++a) {
      if (flow_[a] > 1e-9 * std::max(1.0, total_)) {
        throw Error(ErrorCode::Unbalanced, "transportation problem is infeasible (unbalanced masses)");
      }
    }
    TransportSolution sol;
    sol.pivots = pivots;
    const double keep = 1e-15 * std::max(1.0, total_);
    for (std::size_t a = 0; a < real_; ++a) {
      if (flow_[a] > keep) sol.flows.push_back({a / n_, a % n_, flow_[a]});
    }
    sol.u.resize(m_);
    sol.v.resize(n_);
    for (std::size_t i = 0; i < m_; ++i) sol.u[i] = -pi_[i];
    for (std::size_t j = 0; j < n_; ++j) sol.v[j] = -pi_[m_ + j];
    return sol;
  }

 private:
  int arc_source(std::size_t a) const {
    if (a < real_) return static_cast<int>(a / n_);
    const std::size_t v = a - real_;
    return v < m_ ? static_cast<int>(v) : root_;
  }
  int arc_target(std::size_t a) const {
    if (a < real_) return static_cast<int>(m_ + a % n_);
    const std::size_t v = a - real_;
    return v < m_ ? root_ : static_cast<int>(v);
  }
  double arc_cost(std::size_t a) const { return a < real_ ? cost_[a] : art_cost_; }

  void attach_initial(int node, std::size_t arc, double flow, bool up, double pi) {
    parent_[node] = root_;
    pred_[node] = static_cast<long>(arc);
    up_[node] = up ? 1 : 0;
    depth_[node] = 1;
    pi_[node] = pi;
    flow_[arc] = flow;
    in_tree_[arc] = 1;
    children_[root_].push_back(node);
  }

  // Block search: scan arcs cyclically in index order, take the most negative
  // reduced cost of the first block that contains any candidate.
  long find_entering(std::size_t block, std::size_t& next) const {
    double best = -eps_;
    long best_arc = -1;
    std::size_t in_block = 0;
    for (std::size_t count = 0; count < arcs_; ++count) {
      const std::size_t a = next;
      next = next + 1 == arcs_ ? 0 : next + 1;
      if (!in_tree_[a]) {
        const double rc = arc_cost(a) + pi_[arc_source(a)] - pi_[arc_target(a)];
        if (rc < best) {
          best = rc;
          best_arc = static_cast<long>(a);
        }
      }
      if (++in_block == block) {
        if (best_arc >= 0) return best_arc;
        in_block = 0;
      }
    }
    return best_arc;
  }

  void pivot(std::size_t entering) {
    const int u = arc_source(entering);
    const int v = arc_target(entering);

    int a = u;
    int b = v;
    while (a != b) {
      if (depth_[a] > depth_[b]) {
        a = parent_[a];
      } else if (depth_[b] > depth_[a]) {
        b = parent_[b];
      } else {
        a = parent_[a];
        b = parent_[b];
      }
    }
    const int join = a;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    double delta = kInf;
    int leaving_node = -1;
    int side = 0;
    for (int w = u; w != join; w = parent_[w]) {
      const double d = up_[w] ? flow_[pred_[w]] : kInf;
      if (d < delta) {
        delta = d;
        leaving_node = w;
        side = 1;
      }
    }
    for (int w = v; w != join; w = parent_[w]) {
      const double d = up_[w] ? kInf : flow_[pred_[w]];
      if (d <= delta) {
        delta = d;
        leaving_node = w;
        side = 2;
      }
    }
    if (side == 0) throw Error(ErrorCode::NumericFailure, "unbounded pivot cycle");

    flow_[entering] += delta;
    for (int w = u; w != join; w = parent_[w]) flow_[pred_[w]] += up_[w] ? -delta : delta;
    for (int w = v; w != join; w = parent_[w]) flow_[pred_[w]] += up_[w] ? delta : -delta;

    const auto leaving_arc = static_cast<std::size_t>(pred_[leaving_node]);
    in_tree_[leaving_arc] = 0;
    flow_[leaving_arc] = 0.0;
    in_tree_[entering] = 1;

    const int inner = side == 1 ? u : v;
    const int outer = side == 1 ? v : u;
    erase_child(parent_[leaving_node], leaving_node);

    path_.clear();
    for (int w = inner;; w = parent_[w]) {
      path_.push_back(w);
      if (w == leaving_node) break;
    }
    old_pred_.resize(path_.size());
    old_up_.resize(path_.size());
    for (std::size_t k = 0; k < path_.size(); ++k) {
      old_pred_[k] = pred_[path_[k]];
      old_up_[k] = up_[path_[k]];
    }
    for (std::size_t k = 1; k < path_.size(); ++k) {
      erase_child(path_[k], path_[k - 1]);
      children_[path_[k - 1]].push_back(path_[k]);
      parent_[path_[k]] = path_[k - 1];
      pred_[path_[k]] = old_pred_[k - 1];
      up_[path_[k]] = old_up_[k - 1] ? 0 : 1;
    }
    parent_[inner] = outer;
    pred_[inner] = static_cast<long>(entering);
    up_[inner] = arc_source(entering) == inner ? 1 : 0;
    children_[outer].push_back(inner);

    refresh_subtree(inner);
  }

  void erase_child(int node, int child) {
    auto& c = children_[node];
    auto it = std::find(c.begin(), c.end(), child);
    *it = c.back();
    c.pop_back();
  }

  // Recompute depth and potentials below `top` from the tree arcs.
  void refresh_subtree(int top) {
    stack_.clear();
    stack_.push_back(top);
    while (!stack_.empty()) {
      const int w = stack_.back();
      stack_.pop_back();
      const int p = parent_[w];
      const double c = arc_cost(static_cast<std::size_t>(pred_[w]));
      pi_[w] = up_[w] ? pi_[p] - c : pi_[p] + c;
      depth_[w] = depth_[p] + 1;
      for (int ch : children_[w]) stack_.push_back(ch);
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t real_;
  std::size_t arcs_;
  int root_;
  std::span<const double> cost_;
  double art_cost_ = 0.0;
  double eps_ = 0.0;
  double total_ = 0.0;

  std::vector<double> flow_;
  std::vector<char> in_tree_;
  std::vector<int> parent_;
  std::vector<long> pred_;
  std::vector<char> up_;
  std::vector<int> depth_;
  std::vector<double> pi_;
  std::vector<std::vector<int>> children_;

  std::vector<int> path_;
  std::vector<long> old_pred_;
  std::vector<char> old_up_;
  std::vector<int> stack_;
};

}  // namespace

TransportSolution network_simplex(std::span<const double> supply, std::span<const double> demand,
                                  std::span<const double> cost) {
  if (supply.empty() || demand.empty()) {
    throw Error(ErrorCode::InvalidArgument, "transportation problem needs atoms on both sides");
  }
  if (cost.size() != supply.size() * demand.size()) {
    throw Error(ErrorCode::InvalidArgument, "cost matrix has the wrong size");
  }
  Solver solver(supply, demand, cost);
  return solver.run();
}

}  // namespace lgp::detail
