#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace treepcg {

using Vertex = std::int32_t;
using RealVector = std::vector<double>;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// One entry of a vertex's neighbor list.
struct Adjacent {
  Vertex vertex;
  double weight;
  std::size_t edge;  // index into WeightedGraph::edges()
};

// Undirected graph with strictly positive edge weights.
//
// Edges are canonicalized to u < v and sorted lexicographically; the neighbor
// lists are built once (sorted by neighbor id) and the object is immutable
// afterwards, so iteration order is reproducible and concurrent reads are safe.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ > static_cast<std::size_t>(INT32_MAX)) throw GraphError("vertex count too large");
    for (auto& e : edges_) {
      if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n_ ||
          static_cast<std::size_t>(e.v) >= n_) {
        throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") references a vertex outside 0.." + std::to_string(n_ == 0 ? 0 : n_ - 1));
      }
      if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
      if (!(e.w > 0.0) || !std::isfinite(e.w)) {
        throw GraphError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") has nonpositive or nonfinite weight");
      }
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
        throw GraphError("duplicate edge (" + std::to_string(edges_[i].u) + "," +
                         std::to_string(edges_[i].v) + ")");
      }
    }
    build_adjacency();
    connected_ = traverse_connected();
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool connected() const { return connected_; }

  std::span<const Adjacent> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  // Weight of edge {u, v}, if present. O(log degree).
  std::optional<double> weight(Vertex u, Vertex v) const {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n_ || static_cast<std::size_t>(v) >= n_) {
      return std::nullopt;
    }
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v,
                               [](const Adjacent& a, Vertex x) { return a.vertex < x; });
    if (it == nb.end() || it->vertex != v) return std::nullopt;
    return it->weight;
  }

 private:
  void build_adjacency() {
    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted by (u, v); filling in edge order yields neighbor lists
    // sorted by id for the "v" side but not the "u" side, so sort afterwards.
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto& e = edges_[i];
      adjacency_[cursor[e.u]++] = {e.v, e.w, i};
      adjacency_[cursor[e.v]++] = {e.u, e.w, i};
    }
    for (std::size_t v = 0; v < n_; ++v) {
      std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
                [](const Adjacent& a, const Adjacent& b) { return a.vertex < b.vertex; });
    }
  }

  bool traverse_connected() const {
    if (n_ <= 1) return true;
    std::vector<char> seen(n_, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (const auto& a : neighbors(x)) {
        if (!seen[a.vertex]) {
          seen[a.vertex] = 1;
          ++reached;
          stack.push_back(a.vertex);
        }
      }
    }
    return reached == n_;
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Adjacent> adjacency_;
  bool connected_ = true;
};

inline bool is_connected(const WeightedGraph& g) { return g.connected(); }

// y = L_G x, accumulated edge by edge: y_u += w (x_u - x_v), y_v -= w (x_u - x_v).
inline void laplacian_apply(const WeightedGraph& g, std::span<const double> x, std::span<double> y) {
  if (x.size() != g.n() || y.size() != g.n()) {
    throw DimensionError("laplacian_apply: vector length " + std::to_string(x.size()) +
                         " does not match vertex count " + std::to_string(g.n()));
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (const auto& e : g.edges()) {
    const double flow = e.w * (x[e.u] - x[e.v]);
    y[e.u] += flow;
    y[e.v] -= flow;
  }
}

inline RealVector laplacian_apply(const WeightedGraph& g, std::span<const double> x) {
  RealVector y(x.size());
  laplacian_apply(g, x, y);
  return y;
}

// x^T L_G x as the sum of weighted squared differences.
inline double laplacian_quadratic_form(const WeightedGraph& g, std::span<const double> x) {
  if (x.size() != g.n()) throw DimensionError("laplacian_quadratic_form: dimension mismatch");
  double s = 0.0;
  for (const auto& e : g.edges()) {
    const double d = x[e.u] - x[e.v];
    s += e.w * d * d;
  }
  return s;
}

}  // namespace treepcg
