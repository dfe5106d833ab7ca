#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "treepcg/graph.hpp"

namespace treepcg {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Shortest decimal text that parses back to the same double.
inline std::string format_real(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// Edge-list text: one "u v w" per line. Blank lines and lines starting with '#'
// are skipped, except an optional "# vertices N" header which fixes the vertex
// count (otherwise n = 1 + largest id seen).
inline WeightedGraph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t n = 0;
  bool have_header = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = detail::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::istringstream hs{std::string(text.substr(1))};
      std::string key;
      std::size_t count = 0;
      if (hs >> key && key == "vertices" && hs >> count) {
        n = count;
        have_header = true;
      }
      continue;
    }
    std::istringstream ls{std::string(text)};
    long long u = 0, v = 0;
    std::string wtext, extra;
    if (!(ls >> u >> v >> wtext)) throw ParseError(lineno, "expected 'u v w'");
    if (ls >> extra) throw ParseError(lineno, "trailing text '" + extra + "'");
    double w = 0.0;
    auto [ptr, ec] = std::from_chars(wtext.data(), wtext.data() + wtext.size(), w);
    if (ec != std::errc() || ptr != wtext.data() + wtext.size()) {
      throw ParseError(lineno, "invalid weight '" + wtext + "'");
    }
    if (u < 0 || v < 0 || u > INT32_MAX || v > INT32_MAX) throw ParseError(lineno, "vertex id out of range");
    if (u == v) throw ParseError(lineno, "self-loop at vertex " + std::to_string(u));
    if (!(w > 0.0) || !std::isfinite(w)) throw ParseError(lineno, "nonpositive weight " + wtext);
    if (have_header && (static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)) {
      throw ParseError(lineno, "vertex id exceeds declared vertex count");
    }
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
    if (!have_header) n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(u, v)) + 1);
  }
  try {
    return WeightedGraph(n, std::move(edges));
  } catch (const GraphError& e) {
    throw ParseError(lineno, e.what());
  }
}

inline WeightedGraph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << "# vertices " << g.n() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << format_real(e.w) << '\n';
}

inline void write_edge_list(const std::string& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path);
  write_edge_list(out, g);
}

// Vectors are stored one entry per line.
inline RealVector read_vector(std::istream& in) {
  RealVector out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(x)) {
      throw ParseError(lineno, "invalid number '" + std::string(text) + "'");
    }
    out.push_back(x);
  }
  return out;
}

inline RealVector read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
  return read_vector(in);
}

inline void write_vector(std::ostream& out, std::span<const double> x) {
  for (double v : x) out << format_real(v) << '\n';
}

inline void write_vector(const std::string& path, std::span<const double> x) {
  std::ofstream out(path);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path);
  write_vector(out, x);
}

}  // namespace treepcg
