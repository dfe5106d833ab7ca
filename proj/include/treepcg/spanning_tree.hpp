#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "treepcg/graph.hpp"

namespace treepcg {

inline constexpr Vertex kNoParent = -1;

// Rooted spanning tree stored as parent links.
//
// Construction precomputes depths, a preorder, the root-to-vertex resistance
// prefix sums (sum of 1/w along the root path) and an Euler tour with a
// sparse table, so lca() and path_resistance() are O(1).
class SpanningTree {
 public:
  SpanningTree(std::vector<Vertex> parent, std::vector<double> parent_weight)
      : parent_(std::move(parent)), parent_weight_(std::move(parent_weight)) {
    const std::size_t n = parent_.size();
    if (parent_weight_.size() != n) throw GraphError("parent and weight arrays differ in length");
    if (n == 0) throw GraphError("a spanning tree needs at least one vertex");
    root_ = kNoParent;
    for (std::size_t v = 0; v < n; ++v) {
      if (parent_[v] == kNoParent) {
        if (root_ != kNoParent) throw GraphError("tree has more than one root");
        root_ = static_cast<Vertex>(v);
        parent_weight_[v] = 0.0;
        continue;
      }
      if (parent_[v] < 0 || static_cast<std::size_t>(parent_[v]) >= n || parent_[v] == static_cast<Vertex>(v)) {
        throw GraphError("invalid parent for vertex " + std::to_string(v));
      }
      if (!(parent_weight_[v] > 0.0) || !std::isfinite(parent_weight_[v])) {
        throw GraphError("nonpositive tree edge weight at vertex " + std::to_string(v));
      }
    }
    if (root_ == kNoParent) throw GraphError("tree has no root");
    build();
  }

  // Orients an undirected edge set with exactly n-1 edges from `root`.
  static SpanningTree from_edges(std::size_t n, std::span<const Edge> edges, Vertex root = 0) {
    if (n == 0) throw GraphError("a spanning tree needs at least one vertex");
    if (edges.size() + 1 != n) {
      throw GraphError("a spanning tree on " + std::to_string(n) + " vertices needs " +
                       std::to_string(n - 1) + " edges, got " + std::to_string(edges.size()));
    }
    WeightedGraph as_graph(n, std::vector<Edge>(edges.begin(), edges.end()));
    if (!as_graph.connected()) throw GraphError("edge set does not span the vertices");
    std::vector<Vertex> parent(n, kNoParent);
    std::vector<double> weight(n, 0.0);
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      for (const auto& a : as_graph.neighbors(x)) {
        if (!seen[a.vertex]) {
          seen[a.vertex] = 1;
          parent[a.vertex] = x;
          weight[a.vertex] = a.weight;
          stack.push_back(a.vertex);
        }
      }
    }
    return SpanningTree(std::move(parent), std::move(weight));
  }

  std::size_t n() const { return parent_.size(); }
  Vertex root() const { return root_; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  double parent_weight(Vertex v) const { return parent_weight_[v]; }
  std::size_t depth(Vertex v) const { return depth_[v]; }
  double resistance_prefix(Vertex v) const { return resistance_prefix_[v]; }
  std::span<const Vertex> parents() const { return parent_; }
  std::span<const double> parent_weights() const { return parent_weight_; }
  // Parents precede children.
  std::span<const Vertex> preorder() const { return preorder_; }

  // Deepest common ancestor via range-minimum over the Euler tour.
  Vertex lca(Vertex u, Vertex v) const {
    std::size_t l = first_[u], r = first_[v];
    if (l > r) std::swap(l, r);
    const auto level = static_cast<std::size_t>(std::bit_width(r - l + 1) - 1);
    const auto& row = sparse_[level];
    const Vertex a = row[l];
    const Vertex b = row[r - (std::size_t{1} << level) + 1];
    return depth_[a] <= depth_[b] ? a : b;
  }

  // Series resistance sum(1/w) along the unique tree path from u to v.
  double path_resistance(Vertex u, Vertex v) const {
    if (u == v) return 0.0;
    const Vertex a = lca(u, v);
    return resistance_prefix_[u] + resistance_prefix_[v] - 2.0 * resistance_prefix_[a];
  }

  bool is_tree_edge(Vertex u, Vertex v) const {
    return parent_[u] == v || parent_[v] == u;
  }

  // Tree edges in canonical (u < v, sorted) order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(n() - 1);
    for (std::size_t v = 0; v < n(); ++v) {
      if (parent_[v] == kNoParent) continue;
      Vertex a = static_cast<Vertex>(v), b = parent_[v];
      out.push_back({std::min(a, b), std::max(a, b), parent_weight_[v]});
    }
    std::sort(out.begin(), out.end(),
              [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
    return out;
  }

  WeightedGraph to_graph() const { return WeightedGraph(n(), edges()); }

 private:
  void build() {
    const std::size_t n = parent_.size();
    std::vector<std::size_t> child_offset(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (parent_[v] != kNoParent) ++child_offset[parent_[v] + 1];
    }
    for (std::size_t i = 0; i < n; ++i) child_offset[i + 1] += child_offset[i];
    std::vector<Vertex> children(n == 0 ? 0 : n - 1);
    {
      std::vector<std::size_t> cursor(child_offset.begin(), child_offset.end() - 1);
      for (std::size_t v = 0; v < n; ++v) {
        if (parent_[v] != kNoParent) children[cursor[parent_[v]]++] = static_cast<Vertex>(v);
      }
    }

    depth_.assign(n, 0);
    resistance_prefix_.assign(n, 0.0);
    first_.assign(n, 0);
    preorder_.clear();
    preorder_.reserve(n);
    std::vector<Vertex> euler;
    euler.reserve(2 * n - 1);

    // Iterative DFS; each stack frame tracks the next child to visit.
    std::vector<std::pair<Vertex, std::size_t>> stack;
    stack.emplace_back(root_, child_offset[root_]);
    preorder_.push_back(root_);
    first_[root_] = 0;
    euler.push_back(root_);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < child_offset[v + 1]) {
        const Vertex c = children[next++];
        depth_[c] = depth_[v] + 1;
        resistance_prefix_[c] = resistance_prefix_[v] + 1.0 / parent_weight_[c];
        first_[c] = euler.size();
        euler.push_back(c);
        preorder_.push_back(c);
        stack.emplace_back(c, child_offset[c]);
      } else {
        stack.pop_back();
        if (!stack.empty()) euler.push_back(stack.back().first);
      }
    }
    if (preorder_.size() != n) throw GraphError("parent links contain a cycle or do not reach every vertex");

    const std::size_t len = euler.size();
    const auto levels = static_cast<std::size_t>(std::bit_width(len));
    sparse_.assign(levels, {});
    sparse_[0] = std::move(euler);
    for (std::size_t k = 1; k < levels; ++k) {
      const std::size_t half = std::size_t{1} << (k - 1);
      const auto& prev = sparse_[k - 1];
      auto& row = sparse_[k];
      row.resize(len - (std::size_t{1} << k) + 1);
      for (std::size_t i = 0; i < row.size(); ++i) {
        const Vertex a = prev[i], b = prev[i + half];
        row[i] = depth_[a] <= depth_[b] ? a : b;
      }
    }
  }

  std::vector<Vertex> parent_;
  std::vector<double> parent_weight_;
  Vertex root_ = kNoParent;
  std::vector<std::size_t> depth_;
  std::vector<double> resistance_prefix_;
  std::vector<Vertex> preorder_;
  std::vector<std::size_t> first_;
  std::vector<std::vector<Vertex>> sparse_;
};

// Every tree edge must be an edge of g with the identical weight.
inline void check_spans(const WeightedGraph& g, const SpanningTree& t) {
  if (t.n() != g.n()) {
    throw GraphError("tree has " + std::to_string(t.n()) + " vertices, graph has " +
                     std::to_string(g.n()));
  }
  for (std::size_t v = 0; v < t.n(); ++v) {
    const Vertex p = t.parent(static_cast<Vertex>(v));
    if (p == kNoParent) continue;
    auto w = g.weight(static_cast<Vertex>(v), p);
    if (!w) {
      throw GraphError("tree edge (" + std::to_string(v) + "," + std::to_string(p) + ") is not in the graph");
    }
    if (*w != t.parent_weight(static_cast<Vertex>(v))) {
      throw GraphError("tree edge (" + std::to_string(v) + "," + std::to_string(p) +
                       ") has a weight different from the graph's");
    }
  }
}

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

inline void require_connected(const WeightedGraph& g) {
  if (g.n() == 0) throw GraphError("graph has no vertices");
  if (!g.connected()) throw GraphError("graph must be connected");
}

}  // namespace detail

// Kruskal on descending weight; equal weights keep canonical edge order.
inline SpanningTree max_weight_spanning_tree(const WeightedGraph& g) {
  detail::require_connected(g);
  const auto& edges = g.edges();
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return edges[a].w > edges[b].w; });
  detail::DisjointSets sets(g.n());
  std::vector<Edge> chosen;
  chosen.reserve(g.n() - 1);
  for (auto i : order) {
    if (sets.unite(edges[i].u, edges[i].v)) {
      chosen.push_back(edges[i]);
      if (chosen.size() + 1 == g.n()) break;
    }
  }
  return SpanningTree::from_edges(g.n(), chosen, 0);
}

// Ball-growing parameters of the heuristic tree construction.
struct ClusteringParams {
  double growth_factor = 2.0;     // radius multiplier between rounds
  double diameter_fraction = 1.0; // radius floor = fraction * diameter / log2(clusters)
};

// Low-diameter clustering construction: repeatedly carve the current cluster graph into
// balls by Dijkstra growth in the resistance metric (length 1/w), keep each
// ball's shortest-path tree, and contract the balls. Centers are visited in a
// seeded random order; each ball radius carries a seeded jitter in [1, 2).
// No stretch guarantee is claimed; measure it with stretch_report().
inline SpanningTree low_stretch_heuristic_tree(const WeightedGraph& g, std::uint64_t seed,
                                               ClusteringParams params = {}) {
  detail::require_connected(g);
  const std::size_t n = g.n();
  const auto& edges = g.edges();
  if (n == 1) return SpanningTree::from_edges(1, {}, 0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(1.0, 2.0);
  std::vector<std::size_t> cluster(n);
  std::iota(cluster.begin(), cluster.end(), std::size_t{0});
  std::size_t nclusters = n;
  std::vector<Edge> chosen;
  chosen.reserve(n - 1);

  double radius = std::numeric_limits<double>::infinity();
  for (const auto& e : edges) radius = std::min(radius, 1.0 / e.w);

  struct Arc {
    std::size_t to;
    double length;
    std::size_t edge;
  };
  using Item = std::pair<double, std::size_t>;
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  while (nclusters > 1) {
    // Contracted multigraph over current clusters.
    std::vector<std::size_t> offset(nclusters + 1, 0);
    for (const auto& e : edges) {
      const auto a = cluster[e.u], b = cluster[e.v];
      if (a == b) continue;
      ++offset[a + 1];
      ++offset[b + 1];
    }
    for (std::size_t i = 0; i < nclusters; ++i) offset[i + 1] += offset[i];
    std::vector<Arc> arcs(offset.back());
    {
      std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
      for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto a = cluster[edges[i].u], b = cluster[edges[i].v];
        if (a == b) continue;
        const double len = 1.0 / edges[i].w;
        arcs[cursor[a]++] = {b, len, i};
        arcs[cursor[b]++] = {a, len, i};
      }
    }

    std::vector<double> dist(nclusters, kInf);
    std::vector<std::size_t> via(nclusters, kNone);
    std::vector<std::size_t> touched;

    // Double-sweep Dijkstra for a diameter estimate.
    auto farthest = [&](std::size_t source) {
      std::fill(dist.begin(), dist.end(), kInf);
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[source] = 0.0;
      pq.emplace(0.0, source);
      std::size_t far = source;
      while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (d > dist[x]) continue;
        if (d > dist[far]) far = x;
        for (std::size_t k = offset[x]; k < offset[x + 1]; ++k) {
          const auto& a = arcs[k];
          if (d + a.length < dist[a.to]) {
            dist[a.to] = d + a.length;
            pq.emplace(dist[a.to], a.to);
          }
        }
      }
      return std::pair{far, dist[far]};
    };
    const auto [end_a, ignored] = farthest(0);
    const double diameter = farthest(end_a).second;
    const double floor_radius =
        params.diameter_fraction * diameter / std::log2(static_cast<double>(nclusters) + 1.0);
    radius = std::max(radius, floor_radius);

    std::vector<std::size_t> order(nclusters);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::fill(dist.begin(), dist.end(), kInf);
    std::vector<std::size_t> ball(nclusters, kNone);
    std::size_t nballs = 0;
    for (auto center : order) {
      if (ball[center] != kNone) continue;
      const double limit = radius * jitter(rng);
      const std::size_t id = nballs++;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[center] = 0.0;
      via[center] = kNone;
      touched.push_back(center);
      pq.emplace(0.0, center);
      while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (ball[x] != kNone || d > dist[x]) continue;
        if (d > limit && x != center) break;
        ball[x] = id;
        if (via[x] != kNone) chosen.push_back(edges[via[x]]);
        for (std::size_t k = offset[x]; k < offset[x + 1]; ++k) {
          const auto& a = arcs[k];
          if (ball[a.to] != kNone) continue;
          const double nd = d + a.length;
          if (nd < dist[a.to] && nd <= limit) {
            if (dist[a.to] == kInf) touched.push_back(a.to);
            dist[a.to] = nd;
            via[a.to] = a.edge;
            pq.emplace(nd, a.to);
          }
        }
      }
      for (auto x : touched) {
        dist[x] = kInf;
        via[x] = kNone;
      }
      touched.clear();
    }

    for (auto& c : cluster) c = ball[c];
    nclusters = nballs;
    radius *= params.growth_factor;
  }

  return SpanningTree::from_edges(n, chosen, 0);
}

struct EdgeStretch {
  Edge edge;
  double stretch;
};

struct StretchReport {
  std::vector<EdgeStretch> per_edge;  // canonical edge order of the graph
  double total = 0.0;
};

// st_T(e) = w(e) * (tree path resistance between e's endpoints); tree edges
// are exactly 1.
inline StretchReport stretch_report(const WeightedGraph& g, const SpanningTree& t) {
  check_spans(g, t);
  StretchReport report;
  report.per_edge.reserve(g.m());
  for (const auto& e : g.edges()) {
    const double s = t.is_tree_edge(e.u, e.v) ? 1.0 : e.w * t.path_resistance(e.u, e.v);
    report.per_edge.push_back({e, s});
    report.total += s;
  }
  return report;
}

}  // namespace treepcg
