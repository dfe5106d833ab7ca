#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "treepcg/dense.hpp"
#include "treepcg/graph.hpp"
#include "treepcg/spanning_tree.hpp"

namespace treepcg {

class EigensolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Nonzero generalized eigenvalues of (L_G, L_T), i.e. the spectrum of
// L_G L_T^+ on the mean-zero subspace, sorted ascending.
struct SpectralSummary {
  std::vector<double> eigenvalues;
  double trace = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

namespace detail {

inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigensolve(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw EigensolverError("dense symmetric eigensolver failed");
  return es;
}

}  // namespace detail

// Dense Moore-Penrose pseudo-inverse of a symmetric PSD matrix; eigenvalues at
// or below 1e-12 * lambda_max are treated as zero.
inline Eigen::MatrixXd dense_pseudo_inverse(const Eigen::MatrixXd& a) {
  auto es = detail::eigensolve(a);
  const auto& vals = es.eigenvalues();
  const double cutoff = 1e-12 * std::max(vals.maxCoeff(), 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals[i] > cutoff) inv[i] = 1.0 / vals[i];
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// x* = L_G^+ b for a connected graph, solved in extended precision through
// the nonsingular matrix L_G + 11^T/n (same action on mean-zero vectors).
inline RealVector dense_laplacian_solve(const WeightedGraph& g, std::span<const double> b,
                                        std::size_t cap = kDefaultDenseCap) {
  if (!g.connected()) throw GraphError("graph must be connected");
  if (b.size() != g.n()) throw DimensionError("dense_laplacian_solve: dimension mismatch");
  using MatrixL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const auto n = static_cast<Eigen::Index>(g.n());
  MatrixL a = dense_laplacian(g, cap).cast<long double>();
  a.array() += 1.0L / static_cast<long double>(n);
  VectorL rhs(n);
  long double mu = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i) mu += b[i];
  mu /= static_cast<long double>(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs[i] = static_cast<long double>(b[i]) - mu;
  Eigen::LLT<MatrixL> llt(a);
  if (llt.info() != Eigen::Success) throw EigensolverError("dense Cholesky failed");
  VectorL sol = llt.solve(rhs);
  RealVector x(g.n());
  for (Eigen::Index i = 0; i < n; ++i) x[i] = static_cast<double>(sol[i]);
  return x;
}

// Eigenvalues of L_T^{+/2} L_G L_T^{+/2}, computed in the eigenbasis of the
// range of L_T (which deflates the shared all-ones nullspace).
inline SpectralSummary generalized_spectrum(const WeightedGraph& g, const SpanningTree& t,
                                            std::size_t cap = kDefaultDenseCap) {
  if (g.n() > cap) throw DenseCapExceeded(g.n(), cap);
  if (!g.connected()) throw GraphError("graph must be connected");
  check_spans(g, t);

  const Eigen::MatrixXd lg = dense_laplacian(g, cap);
  const Eigen::MatrixXd lt = dense_laplacian(t.to_graph(), cap);
  auto tree_es = detail::eigensolve(lt);
  const auto& tvals = tree_es.eigenvalues();
  const double cutoff = 1e-12 * std::max(tvals.maxCoeff(), 0.0);

  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < tvals.size(); ++i) {
    if (tvals[i] > cutoff) kept.push_back(i);
  }
  const auto r = static_cast<Eigen::Index>(kept.size());
  if (static_cast<std::size_t>(r) + 1 != g.n() && g.n() > 0) {
    throw EigensolverError("tree Laplacian rank " + std::to_string(r) + " differs from n - 1");
  }
  Eigen::MatrixXd basis(lg.rows(), r);  // columns scaled by lambda^{-1/2}
  for (Eigen::Index j = 0; j < r; ++j) {
    basis.col(j) = tree_es.eigenvectors().col(kept[j]) / std::sqrt(tvals[kept[j]]);
  }
  Eigen::MatrixXd reduced = basis.transpose() * lg * basis;
  reduced = 0.5 * (reduced + reduced.transpose());

  SpectralSummary s;
  if (r == 0) return s;
  auto es = detail::eigensolve(reduced);
  s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + r);
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  s.trace = std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0);
  s.lambda_min = s.eigenvalues.front();
  s.lambda_max = s.eigenvalues.back();
  return s;
}

// Number of eigenvalues strictly greater than threshold.
inline std::size_t tail_count(const SpectralSummary& s, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("tail_count threshold must be positive");
  return static_cast<std::size_t>(s.eigenvalues.end() -
                                  std::upper_bound(s.eigenvalues.begin(), s.eigenvalues.end(), threshold));
}

enum class LowerEdge { One, LambdaMin };

struct QulSplit {
  std::size_t q = 0;
  double u = 1.0;
  double l = 1.0;
};

// q = eigenvalues above u; l is 1 or the exact lambda_min.
inline QulSplit exact_qul(const SpectralSummary& s, double u, LowerEdge lower = LowerEdge::One) {
  return {tail_count(s, u), u, lower == LowerEdge::One ? 1.0 : s.lambda_min};
}

}  // namespace treepcg
