#pragma once

#include <cmath>
#include <numeric>
#include <span>

namespace treepcg {

inline double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double mean(std::span<const double> a) {
  if (a.empty()) return 0.0;
  return std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
}

// Projects onto the mean-zero subspace (the range of a connected Laplacian).
inline void center(std::span<double> a) {
  const double mu = mean(a);
  for (auto& v : a) v -= mu;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// y += alpha x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace treepcg
