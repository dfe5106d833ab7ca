#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treepcg/graph.hpp"

namespace treepcg {

class SpecParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GraphKind { Grid, Gnp, Regular, Path, RandomTree, Complete };
enum class WeightKind { Unit, LogUniform };

// Log-uniform weights are drawn from [1, kLogUniformMaxWeight].
inline constexpr double kLogUniformMaxWeight = 100.0;

struct GeneratorSpec {
  GraphKind kind = GraphKind::Grid;
  std::size_t rows = 0;  // grid
  std::size_t cols = 0;  // grid
  std::size_t n = 0;     // gnp, regular, path, tree, complete
  double p = 0.0;        // gnp
  std::size_t d = 0;     // regular
  WeightKind weights = WeightKind::Unit;
};

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::size_t parse_count(std::string_view text, std::string_view field) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw SpecParseError("invalid value '" + std::string(text) + "' for field '" +
                         std::string(field) + "'");
  }
  return value;
}

inline double parse_real(std::string_view text, std::string_view field) {
  // from_chars for double is available in libstdc++ 11
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw SpecParseError("invalid value '" + std::string(text) + "' for field '" +
                         std::string(field) + "'");
  }
  return value;
}

inline std::string kind_name(GraphKind k) {
  switch (k) {
    case GraphKind::Grid: return "grid";
    case GraphKind::Gnp: return "gnp";
    case GraphKind::Regular: return "regular";
    case GraphKind::Path: return "path";
    case GraphKind::RandomTree: return "tree";
    case GraphKind::Complete: return "complete";
  }
  return "?";
}

}  // namespace detail

// Parses strings such as "grid:30x30:unit", "gnp:n=1000,p=0.01:logw",
// "regular:n=100,d=3", "path:n=10", "tree:n=50:logw", "complete:n=5".
// The weight suffix defaults to unit.
inline GeneratorSpec parse_generator_spec(std::string_view text) {
  auto parts = detail::split(text, ':');
  if (parts.size() < 2 || parts.size() > 3) {
    throw SpecParseError("generator spec '" + std::string(text) +
                         "' must look like kind:params[:unit|logw]");
  }
  GeneratorSpec spec;
  const auto kind = parts[0];
  if (kind == "grid") spec.kind = GraphKind::Grid;
  else if (kind == "gnp") spec.kind = GraphKind::Gnp;
  else if (kind == "regular") spec.kind = GraphKind::Regular;
  else if (kind == "path") spec.kind = GraphKind::Path;
  else if (kind == "tree") spec.kind = GraphKind::RandomTree;
  else if (kind == "complete") spec.kind = GraphKind::Complete;
  else throw SpecParseError("unknown generator kind '" + std::string(kind) + "' in field 'kind'");

  if (parts.size() == 3) {
    if (parts[2] == "unit") spec.weights = WeightKind::Unit;
    else if (parts[2] == "logw") spec.weights = WeightKind::LogUniform;
    else throw SpecParseError("invalid value '" + std::string(parts[2]) + "' for field 'weights'");
  }

  if (spec.kind == GraphKind::Grid) {
    auto dims = detail::split(parts[1], 'x');
    if (dims.size() != 2) {
      throw SpecParseError("invalid value '" + std::string(parts[1]) +
                           "' for field 'dimensions' (expected RxC)");
    }
    spec.rows = detail::parse_count(dims[0], "rows");
    spec.cols = detail::parse_count(dims[1], "cols");
    if (spec.rows == 0 || spec.cols == 0) throw SpecParseError("field 'dimensions' must be positive");
    return spec;
  }

  bool have_n = false, have_p = false, have_d = false;
  for (auto kv : detail::split(parts[1], ',')) {
    auto eq = kv.find('=');
    if (eq == std::string_view::npos) {
      throw SpecParseError("parameter '" + std::string(kv) + "' is not of the form key=value");
    }
    auto key = kv.substr(0, eq);
    auto value = kv.substr(eq + 1);
    if (key == "n") {
      spec.n = detail::parse_count(value, "n");
      have_n = true;
    } else if (key == "p" && spec.kind == GraphKind::Gnp) {
      spec.p = detail::parse_real(value, "p");
      have_p = true;
    } else if (key == "d" && spec.kind == GraphKind::Regular) {
      spec.d = detail::parse_count(value, "d");
      have_d = true;
    } else {
      throw SpecParseError("unknown field '" + std::string(key) + "' for generator '" +
                           std::string(kind) + "'");
    }
  }
  if (!have_n) throw SpecParseError("missing field 'n'");
  if (spec.n == 0) throw SpecParseError("field 'n' must be positive");
  if (spec.kind == GraphKind::Gnp) {
    if (!have_p) throw SpecParseError("missing field 'p'");
    if (!(spec.p > 0.0 && spec.p <= 1.0)) throw SpecParseError("field 'p' must lie in (0, 1]");
  }
  if (spec.kind == GraphKind::Regular) {
    if (!have_d) throw SpecParseError("missing field 'd'");
    if (spec.d == 0 || spec.d >= spec.n) throw SpecParseError("field 'd' must satisfy 0 < d < n");
    if ((spec.d * spec.n) % 2 != 0) throw SpecParseError("field 'd': d*n must be even");
  }
  return spec;
}

inline std::string to_string(const GeneratorSpec& s) {
  std::string out = detail::kind_name(s.kind) + ":";
  switch (s.kind) {
    case GraphKind::Grid: out += std::to_string(s.rows) + "x" + std::to_string(s.cols); break;
    case GraphKind::Gnp: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, s.p);
      out += "n=" + std::to_string(s.n) + ",p=" + std::string(buf, res.ptr);
      break;
    }
    case GraphKind::Regular: out += "n=" + std::to_string(s.n) + ",d=" + std::to_string(s.d); break;
    default: out += "n=" + std::to_string(s.n); break;
  }
  return out + (s.weights == WeightKind::Unit ? ":unit" : ":logw");
}

namespace detail {

struct Pair {
  Vertex u, v;
};

inline std::vector<Pair> grid_pairs(std::size_t rows, std::size_t cols) {
  std::vector<Pair> out;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const auto id = static_cast<Vertex>(i * cols + j);
      if (j + 1 < cols) out.push_back({id, id + 1});
      if (i + 1 < rows) out.push_back({id, static_cast<Vertex>(id + cols)});
    }
  }
  return out;
}

inline std::vector<Pair> gnp_pairs(std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<Pair> out;
  std::bernoulli_distribution coin(p);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (coin(rng)) out.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
  }
  return out;
}

// Pairing model with local retries; restarts when the remaining stubs admit
// no simple pairing.
inline std::vector<Pair> regular_pairs(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Vertex> stubs;
    stubs.reserve(n * d);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t k = 0; k < d; ++k) stubs.push_back(static_cast<Vertex>(v));
    }
    std::vector<std::vector<Vertex>> nbrs(n);
    std::vector<Pair> out;
    bool stuck = false;
    while (!stubs.empty() && !stuck) {
      bool placed = false;
      for (int tries = 0; tries < 100 && !placed; ++tries) {
        std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
        auto i = pick(rng), j = pick(rng);
        if (i == j) continue;
        Vertex a = stubs[i], b = stubs[j];
        if (a == b) continue;
        if (std::find(nbrs[a].begin(), nbrs[a].end(), b) != nbrs[a].end()) continue;
        nbrs[a].push_back(b);
        nbrs[b].push_back(a);
        out.push_back({std::min(a, b), std::max(a, b)});
        if (i < j) std::swap(i, j);
        stubs[i] = stubs.back();
        stubs.pop_back();
        stubs[j] = stubs.back();
        stubs.pop_back();
        placed = true;
      }
      stuck = !placed;
    }
    if (!stuck) return out;
  }
  throw GraphError("random regular generator failed to find a simple pairing");
}

// Relabels the largest connected component (ties: smallest vertex id) to 0..k-1.
inline std::pair<std::size_t, std::vector<Pair>> giant_component(std::size_t n,
                                                                  const std::vector<Pair>& pairs) {
  std::vector<std::vector<Vertex>> adj(n);
  for (const auto& e : pairs) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> comp(n, -1);
  int best = -1;
  std::size_t best_size = 0;
  int ncomp = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::size_t size = 0;
    std::vector<Vertex> stack{static_cast<Vertex>(s)};
    comp[s] = ncomp;
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      ++size;
      for (auto y : adj[x]) {
        if (comp[y] < 0) {
          comp[y] = ncomp;
          stack.push_back(y);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best = ncomp;
    }
    ++ncomp;
  }
  std::vector<Vertex> relabel(n, -1);
  Vertex next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] == best) relabel[v] = next++;
  }
  std::vector<Pair> kept;
  for (const auto& e : pairs) {
    if (comp[e.u] == best) kept.push_back({relabel[e.u], relabel[e.v]});
  }
  return {best_size, kept};
}

}  // namespace detail

// Deterministic given (spec, seed); the result is always connected.
inline WeightedGraph generate(const GeneratorSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t n = 0;
  std::vector<detail::Pair> pairs;
  switch (spec.kind) {
    case GraphKind::Grid:
      if (spec.rows == 0 || spec.cols == 0) throw GraphError("grid dimensions must be positive");
      n = spec.rows * spec.cols;
      pairs = detail::grid_pairs(spec.rows, spec.cols);
      break;
    case GraphKind::Gnp: {
      if (spec.n == 0 || !(spec.p > 0.0 && spec.p <= 1.0)) throw GraphError("gnp needs n > 0 and p in (0,1]");
      auto [k, kept] = detail::giant_component(spec.n, detail::gnp_pairs(spec.n, spec.p, rng));
      n = k;
      pairs = std::move(kept);
      break;
    }
    case GraphKind::Regular: {
      if (spec.d == 0 || spec.d >= spec.n || (spec.d * spec.n) % 2 != 0) {
        throw GraphError("random regular graph needs 0 < d < n and d*n even");
      }
      // Connected d-regular graphs are the common case for d >= 3; redraw otherwise.
      for (int attempt = 0;; ++attempt) {
        pairs = detail::regular_pairs(spec.n, spec.d, rng);
        auto [k, kept] = detail::giant_component(spec.n, pairs);
        if (k == spec.n) break;
        if (attempt == 100) throw GraphError("random regular generator produced no connected graph");
      }
      n = spec.n;
      break;
    }
    case GraphKind::Path:
      n = spec.n;
      for (std::size_t v = 0; v + 1 < n; ++v) pairs.push_back({static_cast<Vertex>(v), static_cast<Vertex>(v + 1)});
      break;
    case GraphKind::RandomTree:
      n = spec.n;
      for (std::size_t v = 1; v < n; ++v) {
        std::uniform_int_distribution<std::size_t> parent(0, v - 1);
        pairs.push_back({static_cast<Vertex>(parent(rng)), static_cast<Vertex>(v)});
      }
      break;
    case GraphKind::Complete:
      n = spec.n;
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) pairs.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
      }
      break;
  }

  for (auto& e : pairs) {
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  std::uniform_real_distribution<double> exponent(0.0, std::log(kLogUniformMaxWeight));
  for (const auto& e : pairs) {
    const double w = spec.weights == WeightKind::Unit ? 1.0 : std::exp(exponent(rng));
    edges.push_back({e.u, e.v, w});
  }
  return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph generate(std::string_view spec, std::uint64_t seed) {
  return generate(parse_generator_spec(spec), seed);
}

}  // namespace treepcg
