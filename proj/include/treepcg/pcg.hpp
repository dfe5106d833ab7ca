#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "treepcg/graph.hpp"
#include "treepcg/tree_solver.hpp"
#include "treepcg/vector_ops.hpp"

namespace treepcg {

// Raised when PCG produces nonfinite values or loses positive curvature
// before converging. Running out of iterations is not an error.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PcgConfig {
  double epsilon = 1e-8;  // target relative A-norm accuracy
  std::size_t max_iterations = 10000;
  // Stop when sqrt(r'z) / sqrt(b'L_T^+ b) falls to this; defaults to epsilon / 10.
  // Zero disables the test, so the solver runs max_iterations steps.
  std::optional<double> residual_tolerance;
  bool record_history = false;
  // Called with (k, x_k) for k = 0 .. iterations.
  std::function<void(std::size_t, std::span<const double>)> observer;

  double effective_residual_tolerance() const {
    return residual_tolerance ? *residual_tolerance : epsilon / 10.0;
  }

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
    if (residual_tolerance && !(*residual_tolerance >= 0.0)) {
      throw std::invalid_argument("residual_tolerance must be nonnegative");
    }
  }
};

struct PcgOutcome {
  RealVector x;
  std::size_t iterations = 0;
  std::vector<double> residual_history;  // relative preconditioned residuals, k + 1 entries
  double final_residual = 0.0;
  std::optional<double> a_norm_error;  // ||x - x*||_A / ||x*||_A when x* is supplied
  bool converged = false;
  bool rhs_centered = false;  // b had a nonzero mean and was projected
};

// Solves L_G x = b with the tree Laplacian as preconditioner, starting at x = 0.
// Each iteration costs one laplacian_apply and one pseudo_solve.
inline PcgOutcome pcg_solve(const WeightedGraph& g, const TreeFactorization& f, std::span<const double> b,
                            const PcgConfig& cfg, std::span<const double> x_star = {}) {
  cfg.validate();
  const std::size_t n = g.n();
  if (b.size() != n || f.n() != n) throw DimensionError("pcg_solve: dimension mismatch");
  if (!g.connected()) throw GraphError("graph must be connected");
  if (!x_star.empty() && x_star.size() != n) throw DimensionError("pcg_solve: ground truth has wrong length");

  PcgOutcome out;
  RealVector r(b.begin(), b.end());
  const double mu = mean(r);
  double scale = 0.0;
  for (double v : r) scale = std::max(scale, std::abs(v));
  if (std::abs(mu) > 1e-14 * std::max(scale, 1e-300)) out.rhs_centered = true;
  center(r);

  RealVector& x = out.x;
  x.assign(n, 0.0);
  RealVector z(n), p(n), q(n), work(n);
  f.pseudo_solve(r, z, work);
  p = z;
  double rz = dot(r, z);
  const double rz0 = rz;
  const double tol = cfg.effective_residual_tolerance();

  auto relative_residual = [&](double value) { return rz0 > 0.0 ? std::sqrt(std::max(value, 0.0) / rz0) : 0.0; };
  auto finish = [&] {
    out.final_residual = relative_residual(rz);
    if (!x_star.empty()) {
      RealVector diff(n);
      for (std::size_t i = 0; i < n; ++i) diff[i] = x[i] - x_star[i];
      const double ref = laplacian_quadratic_form(g, x_star);
      const double err = laplacian_quadratic_form(g, diff);
      out.a_norm_error = ref > 0.0 ? std::sqrt(err / ref) : std::sqrt(err);
    }
    return out;
  };

  if (cfg.record_history) out.residual_history.push_back(rz0 > 0.0 ? 1.0 : 0.0);
  if (cfg.observer) cfg.observer(0, x);
  if (!(rz0 > 0.0)) {
    if (!std::isfinite(rz0)) throw DivergenceError("nonfinite right-hand side");
    out.converged = true;  // b is in the nullspace; x = 0 is exact
    return finish();
  }

  for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
    laplacian_apply(g, p, q);
    const double curvature = dot(p, q);
    if (!std::isfinite(curvature)) throw DivergenceError("nonfinite value at iteration " + std::to_string(k));
    if (!(curvature > 0.0)) {
      // p is numerically in the nullspace: the residual is already at roundoff.
      if (rz <= 1e-30 * rz0) {
        out.converged = true;
        return finish();
      }
      throw DivergenceError("breakdown: p'Ap <= 0 at iteration " + std::to_string(k));
    }
    const double alpha = rz / curvature;
    axpy(alpha, p, x);
    axpy(-alpha, q, r);
    f.pseudo_solve(r, z, work);
    const double rz_next = dot(r, z);
    if (!std::isfinite(rz_next)) throw DivergenceError("nonfinite value at iteration " + std::to_string(k));
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    out.iterations = k;

    const double rel = relative_residual(rz);
    if (cfg.record_history) out.residual_history.push_back(rel);
    if (cfg.observer) cfg.observer(k, x);
    if (rel <= tol || rz <= 0.0) {
      out.converged = true;
      break;
    }
  }
  return finish();
}

// Iteration count after which PCG is guaranteed to reach relative A-norm error
// epsilon when all but q generalized eigenvalues lie in [l, u] and the rest
// exceed u: k = q + ceil(ln(2/epsilon)/2 * sqrt(u/l)).
struct IterationBound {
  std::size_t q = 0;
  double u = 1.0;
  double l = 1.0;
  std::size_t k_bound = 0;
};

namespace detail {

// Ceiling that ignores relative roundoff below 1e-12, so values that are
// integers in exact arithmetic (e.g. ln(e^2)/2) are not bumped up by one.
inline double stable_ceil(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(v))) return r;
  return std::ceil(v);
}

}  // namespace detail

inline IterationBound iteration_bound(std::size_t q, double u, double l, double epsilon) {
  if (!(l > 0.0) || !(u >= l) || !std::isfinite(u)) throw std::invalid_argument("iteration_bound needs 0 < l <= u");
  // epsilon up to 2 keeps ln(2/epsilon) >= 0; (1, 2] only matters for degenerate checks.
  if (!(epsilon > 0.0 && epsilon <= 2.0)) throw std::invalid_argument("iteration_bound needs 0 < epsilon <= 2");
  const double tail = detail::stable_ceil(std::log(2.0 / epsilon) / 2.0 * std::sqrt(u / l));
  return {q, u, l, q + static_cast<std::size_t>(tail)};
}

// The (q, u, l) = (st^(1/3), st^(2/3), 1) split, with q rounded up.
inline IterationBound theorem3_bound(double total_stretch, double epsilon) {
  if (!(total_stretch >= 1.0)) throw std::invalid_argument("total stretch must be at least 1");
  const double c = std::cbrt(total_stretch);
  const auto q = static_cast<std::size_t>(detail::stable_ceil(c));
  return iteration_bound(q, c * c, 1.0, epsilon);
}

}  // namespace treepcg
