#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "treepcg/graph.hpp"
#include "treepcg/spanning_tree.hpp"
#include "treepcg/vector_ops.hpp"

namespace treepcg {

// LDL^T factorization of a tree Laplacian by leaf elimination.
//
// Vertices are stored in elimination order (children before parents, root
// last). Eliminating a vertex whose children are gone leaves a single
// off-diagonal entry, the edge to its parent, so each step is O(1). The root's
// final pivot is zero (rank n-1) and is never divided by.
class TreeFactorization {
 public:
  TreeFactorization() = default;

  // parent[root] == kNoParent. O(n) time and space.
  TreeFactorization(std::span<const Vertex> parent, std::span<const double> parent_weight) {
    const std::size_t n = parent.size();
    if (parent_weight.size() != n) throw DimensionError("parent and weight arrays differ in length");
    if (n == 0) return;

    // Children lists, then a breadth-first sweep from the root; reversed, it
    // puts every vertex after all of its descendants.
    std::vector<std::size_t> offset(n + 1, 0);
    Vertex root = kNoParent;
    for (std::size_t v = 0; v < n; ++v) {
      if (parent[v] == kNoParent) {
        if (root != kNoParent) throw GraphError("tree has more than one root");
        root = static_cast<Vertex>(v);
      } else {
        if (parent[v] < 0 || static_cast<std::size_t>(parent[v]) >= n) throw GraphError("parent index out of range");
        ++offset[parent[v] + 1];
      }
    }
    if (root == kNoParent) throw GraphError("tree has no root");
    for (std::size_t i = 0; i < n; ++i) offset[i + 1] += offset[i];
    std::vector<Vertex> children(n - 1);
    {
      std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
      for (std::size_t v = 0; v < n; ++v) {
        if (parent[v] != kNoParent) children[cursor[parent[v]]++] = static_cast<Vertex>(v);
      }
    }

    order_.reserve(n);
    order_.push_back(root);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const Vertex v = order_[head];
      order_.insert(order_.end(), children.begin() + offset[v], children.begin() + offset[v + 1]);
    }
    if (order_.size() != n) throw GraphError("parent links do not form a tree");
    std::reverse(order_.begin(), order_.end());

    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[order_[i]] = i;

    // Once a vertex's children are eliminated its Schur-complemented diagonal
    // is deg(v) - sum over children of w_c, which is exactly its parent-edge
    // weight. So the pivot is that weight and every multiplier is -1.
    parent_pos_.resize(n - 1);
    pivot_.resize(n - 1);
    multiplier_.assign(n - 1, -1.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const Vertex v = order_[i];
      const double w = parent_weight[v];
      if (!(w > 0.0) || !std::isfinite(w)) throw GraphError("tree edge weights must be positive and finite");
      parent_pos_[i] = position[parent[v]];
      pivot_[i] = w;
    }
  }

  explicit TreeFactorization(const SpanningTree& t)
      : TreeFactorization(t.parents(), t.parent_weights()) {}

  std::size_t n() const { return order_.size(); }
  std::size_t rank() const { return order_.empty() ? 0 : order_.size() - 1; }
  std::span<const Vertex> elimination_order() const { return order_; }
  // Pivot of the i-th eliminated vertex, i < n - 1.
  double pivot(std::size_t i) const { return pivot_[i]; }
  double multiplier(std::size_t i) const { return multiplier_[i]; }
  std::size_t parent_position(std::size_t i) const { return parent_pos_[i]; }

  // x = L_T^+ b: centers b, forward/backward substitutes with the root pinned
  // at zero, then centers x. `work` must hold n entries; x and b may alias.
  void pseudo_solve(std::span<const double> b, std::span<double> x, std::span<double> work) const {
    const std::size_t n = order_.size();
    if (b.size() != n || x.size() != n || work.size() != n) {
      throw DimensionError("pseudo_solve: vector length does not match tree size " + std::to_string(n));
    }
    if (n == 0) return;
    const double mu = mean(b);
    for (std::size_t i = 0; i < n; ++i) work[i] = b[order_[i]] - mu;
    for (std::size_t i = 0; i + 1 < n; ++i) work[parent_pos_[i]] -= multiplier_[i] * work[i];
    for (std::size_t i = 0; i + 1 < n; ++i) work[i] /= pivot_[i];
    work[n - 1] = 0.0;
    for (std::size_t i = n - 1; i-- > 0;) work[i] -= multiplier_[i] * work[parent_pos_[i]];
    const double shift = mean(work);
    for (std::size_t i = 0; i < n; ++i) x[order_[i]] = work[i] - shift;
  }

  RealVector pseudo_solve(std::span<const double> b) const {
    RealVector x(b.size()), work(b.size());
    pseudo_solve(b, x, work);
    return x;
  }

 private:
  std::vector<Vertex> order_;
  std::vector<std::size_t> parent_pos_;
  std::vector<double> pivot_;
  std::vector<double> multiplier_;
};

inline TreeFactorization factor(const SpanningTree& t) { return TreeFactorization(t); }

inline RealVector pseudo_solve(const TreeFactorization& f, std::span<const double> b) {
  return f.pseudo_solve(b);
}

}  // namespace treepcg
