#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

#include "treepcg/graph.hpp"

namespace treepcg {

// Dense matrices are for oracle work only; O(n^3) eigensolves stay fast below this.
inline constexpr std::size_t kDefaultDenseCap = 500;

class DenseCapExceeded : public std::length_error {
 public:
  DenseCapExceeded(std::size_t n, std::size_t cap)
      : std::length_error("dense cap exceeded: n = " + std::to_string(n) + " > " +
                          std::to_string(cap)) {}
};

inline Eigen::MatrixXd dense_laplacian(const WeightedGraph& g, std::size_t cap = kDefaultDenseCap) {
  if (g.n() > cap) throw DenseCapExceeded(g.n(), cap);
  const auto n = static_cast<Eigen::Index>(g.n());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    L(e.u, e.u) += e.w;
    L(e.v, e.v) += e.w;
    L(e.u, e.v) -= e.w;
    L(e.v, e.u) -= e.w;
  }
  return L;
}

}  // namespace treepcg
