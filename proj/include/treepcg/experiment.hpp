#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "treepcg/edge_list.hpp"
#include "treepcg/generators.hpp"
#include "treepcg/pcg.hpp"
#include "treepcg/reports.hpp"
#include "treepcg/spanning_tree.hpp"
#include "treepcg/spectral_oracle.hpp"
#include "treepcg/tree_solver.hpp"

namespace treepcg {

enum class TreeMethod { MaxWeight, Heuristic };

inline TreeMethod parse_tree_method(std::string_view s) {
  if (s == "maxw") return TreeMethod::MaxWeight;
  if (s == "akpw") return TreeMethod::Heuristic;
  throw SpecParseError("invalid value '" + std::string(s) + "' for field 'tree' (expected maxw or akpw)");
}

inline std::string to_string(TreeMethod m) { return m == TreeMethod::MaxWeight ? "maxw" : "akpw"; }

inline SpanningTree build_tree(const WeightedGraph& g, TreeMethod method, std::uint64_t seed) {
  return method == TreeMethod::MaxWeight ? max_weight_spanning_tree(g) : low_stretch_heuristic_tree(g, seed);
}

struct Checks {
  bool trace = true;
  bool tails = true;
  bool pcg_bound = true;
};

// Comma-separated subset of {trace, tails, pcg-bound}, or "all".
inline Checks parse_checks(std::string_view text) {
  Checks c{false, false, false};
  for (auto item : detail::split(text, ',')) {
    if (item == "all") c = Checks{};
    else if (item == "trace") c.trace = true;
    else if (item == "tails") c.tails = true;
    else if (item == "pcg-bound") c.pcg_bound = true;
    else throw SpecParseError("invalid value '" + std::string(item) + "' for field 'checks'");
  }
  return c;
}

struct ExperimentSpec {
  std::string generator;
  TreeMethod tree = TreeMethod::MaxWeight;
  double epsilon = 1e-8;
  std::vector<std::uint64_t> seeds;
  Checks checks;
  std::string output;
  std::size_t dense_cap = kDefaultDenseCap;

  void validate() const {
    if (seeds.empty()) throw SpecParseError("field 'seeds' needs at least one seed");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw SpecParseError("field 'eps' must lie in (0, 1)");
  }
};

// Tolerances of the spectral checks.
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kEigenTolerance = 1e-9;
inline constexpr std::size_t kTailGridPoints = 20;

// Uniform entries in [-1, 1], projected to mean zero.
inline RealVector random_rhs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealVector b(n);
  for (auto& v : b) v = u(rng);
  center(b);
  return b;
}

// Thresholds t_i = lo * (hi/lo)^(i/(points-1)).
inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    out[i] = lo * std::pow(hi / lo, frac);
  }
  return out;
}

inline std::size_t tail_violations(const SpectralSummary& s, double stretch) {
  std::size_t bad = 0;
  for (double t : log_grid(1.0, 2.0 * std::max(s.lambda_max, 1.0), kTailGridPoints)) {
    if (static_cast<double>(tail_count(s, t)) > stretch / t) ++bad;
  }
  return bad;
}

// (q, u, l) on the exact spectrum with u chosen so that the largest
// floor(st^(1/3)) eigenvalues lie above it and l = lambda_min.
inline IterationBound exact_spectrum_bound(const SpectralSummary& s, double stretch, double epsilon) {
  const std::size_t r = s.eigenvalues.size();
  if (r == 0) return iteration_bound(0, 1.0, 1.0, epsilon);
  const auto outliers = std::min(static_cast<std::size_t>(std::floor(std::cbrt(stretch))), r - 1);
  const double u = s.eigenvalues[r - 1 - outliers];
  const auto split = exact_qul(s, u, LowerEdge::LambdaMin);
  return iteration_bound(split.q, split.u, split.l, epsilon);
}

// Relative A-norm errors ||x_k - x*|| / ||x*|| of PCG iterates k = 0..iterations,
// with the residual stop disabled.
inline std::vector<double> a_norm_error_trace(const WeightedGraph& g, const TreeFactorization& f,
                                              std::span<const double> b, std::span<const double> x_star,
                                              std::size_t iterations) {
  std::vector<double> errors;
  const double ref = std::sqrt(laplacian_quadratic_form(g, x_star));
  RealVector diff(g.n());
  PcgConfig cfg;
  cfg.max_iterations = std::max<std::size_t>(iterations, 1);
  cfg.residual_tolerance = 0.0;
  cfg.observer = [&](std::size_t, std::span<const double> x) {
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = x[i] - x_star[i];
    const double e = std::sqrt(laplacian_quadratic_form(g, diff));
    errors.push_back(ref > 0.0 ? e / ref : e);
  };
  pcg_solve(g, f, b, cfg);
  // An exact early stop leaves x fixed for the remaining iterations.
  while (errors.size() < iterations + 1) errors.push_back(errors.back());
  return errors;
}

struct VerifyRecord {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  double stretch_total = 0.0;
  bool spectral_checked = false;
  std::optional<SpectralSummary> spectrum;
  double trace_abs_diff = 0.0;
  bool trace_ok = true;
  std::size_t tail_violations = 0;
  bool lambda_min_ok = true;
  bool lambda_max_ok = true;
  std::size_t pcg_iterations = 0;  // residual stopping rule
  bool pcg_converged = false;
  double final_residual = 0.0;
  std::optional<std::size_t> iterations_to_accuracy;  // first k with A-norm error <= eps
  std::optional<IterationBound> bound_exact;
  IterationBound bound_theorem3;
  std::optional<double> a_norm_error;          // at the stopping-rule iterate
  std::optional<double> a_norm_error_at_bound; // at k = bound_exact
  bool pcg_ok = true;

  bool ok() const { return trace_ok && tail_violations == 0 && lambda_min_ok && lambda_max_ok && pcg_ok; }
};

inline VerifyRecord verify_instance(const WeightedGraph& g, const SpanningTree& t, std::uint64_t seed,
                                    double epsilon, const Checks& checks, std::size_t dense_cap) {
  VerifyRecord rec;
  rec.seed = seed;
  rec.n = g.n();
  rec.m = g.m();
  const auto report = stretch_report(g, t);
  rec.stretch_total = report.total;
  const double st = report.total;

  const bool dense = g.n() <= dense_cap;
  if (dense && (checks.trace || checks.tails || checks.pcg_bound)) {
    rec.spectrum = generalized_spectrum(g, t, dense_cap);
    rec.spectral_checked = true;
    const auto& s = *rec.spectrum;
    if (checks.trace) {
      rec.trace_abs_diff = std::abs(s.trace - st);
      rec.trace_ok = rec.trace_abs_diff <= kTraceTolerance * std::max(1.0, st);
      rec.lambda_min_ok = s.eigenvalues.empty() || s.lambda_min >= 1.0 - kEigenTolerance;
      rec.lambda_max_ok = s.eigenvalues.empty() || s.lambda_max <= st * (1.0 + kEigenTolerance);
    }
    if (checks.tails) rec.tail_violations = tail_violations(s, st);
  }

  if (checks.pcg_bound && g.m() > 0) {
    const auto f = factor(t);
    const auto b = random_rhs(g.n(), seed);
    rec.bound_theorem3 = theorem3_bound(st, epsilon);
    PcgConfig cfg;
    cfg.epsilon = epsilon;
    RealVector x_star;
    if (dense) x_star = dense_laplacian_solve(g, b, dense_cap);
    const auto out = pcg_solve(g, f, b, cfg, x_star);
    rec.pcg_iterations = out.iterations;
    rec.pcg_converged = out.converged;
    rec.final_residual = out.final_residual;
    rec.a_norm_error = out.a_norm_error;
    if (dense) {
      rec.bound_exact = exact_spectrum_bound(*rec.spectrum, st, epsilon);
      const auto horizon = std::max(rec.bound_exact->k_bound, rec.bound_theorem3.k_bound);
      const auto errors = a_norm_error_trace(g, f, b, x_star, horizon);
      rec.a_norm_error_at_bound = errors[rec.bound_exact->k_bound];
      for (std::size_t k = 0; k < errors.size(); ++k) {
        if (errors[k] <= epsilon) {
          rec.iterations_to_accuracy = k;
          break;
        }
      }
      rec.pcg_ok = *rec.a_norm_error_at_bound <= epsilon && rec.iterations_to_accuracy.has_value() &&
                   *rec.iterations_to_accuracy <= rec.bound_theorem3.k_bound;
    } else {
      rec.pcg_ok = out.converged && out.iterations <= rec.bound_theorem3.k_bound;
    }
  }
  return rec;
}

inline nlohmann::json to_json(const VerifyRecord& r) {
  nlohmann::json j = {{"seed", r.seed},
                      {"n", r.n},
                      {"m", r.m},
                      {"stretch_total", r.stretch_total},
                      {"spectral_checked", r.spectral_checked},
                      {"ok", r.ok()}};
  if (r.spectrum) {
    j["trace"] = r.spectrum->trace;
    j["trace_abs_diff"] = r.trace_abs_diff;
    j["lambda_min"] = r.spectrum->lambda_min;
    j["lambda_max"] = r.spectrum->lambda_max;
  }
  j["trace_ok"] = r.trace_ok;
  j["tail_violations"] = r.tail_violations;
  j["lambda_min_ok"] = r.lambda_min_ok;
  j["lambda_max_ok"] = r.lambda_max_ok;
  PcgOutcome o;
  o.iterations = r.pcg_iterations;
  o.converged = r.pcg_converged;
  o.final_residual = r.final_residual;
  o.a_norm_error = r.a_norm_error;
  j["pcg"] = pcg_outcome_json(o, r.bound_exact, r.bound_theorem3);
  j["pcg"]["iterations_to_accuracy"] =
      r.iterations_to_accuracy ? nlohmann::json(*r.iterations_to_accuracy) : nlohmann::json(nullptr);
  j["pcg"]["a_norm_error_at_bound"] =
      r.a_norm_error_at_bound ? nlohmann::json(*r.a_norm_error_at_bound) : nlohmann::json(nullptr);
  j["pcg"]["ok"] = r.pcg_ok;
  return j;
}

struct VerifyReport {
  std::vector<VerifyRecord> records;
  bool ok() const {
    return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.ok(); });
  }
};

// One record per seed, in seed-list order. The graph is generated from the
// spec with each seed unless `graph` is given.
inline VerifyReport run_verify(const ExperimentSpec& spec, const WeightedGraph* graph = nullptr) {
  spec.validate();
  std::optional<GeneratorSpec> gen;
  if (!graph) gen = parse_generator_spec(spec.generator);
  VerifyReport report;
  for (auto seed : spec.seeds) {
    const WeightedGraph g = graph ? *graph : generate(*gen, seed);
    const auto t = build_tree(g, spec.tree, seed);
    report.records.push_back(verify_instance(g, t, seed, spec.epsilon, spec.checks, spec.dense_cap));
  }
  return report;
}

inline nlohmann::json to_json(const VerifyReport& r, const ExperimentSpec& spec) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec));
  return {{"generator", spec.generator},
          {"tree", to_string(spec.tree)},
          {"epsilon", spec.epsilon},
          {"dense_cap", spec.dense_cap},
          {"ok", r.ok()},
          {"records", records}};
}

struct ScalingRow {
  std::string generator;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  double stretch = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  IterationBound bound;
};

// Replaces every "{k}" in the template with the size value.
inline std::string instantiate(std::string_view templ, std::size_t k) {
  std::string out(templ);
  const std::string key = "{k}";
  for (auto pos = out.find(key); pos != std::string::npos; pos = out.find(key, pos)) {
    out.replace(pos, key.size(), std::to_string(k));
  }
  return out;
}

// Iterations-vs-stretch rows for a family of growing graphs, sorted by m.
// Iterations use the residual stopping rule; no dense work is done.
inline std::vector<ScalingRow> run_scaling(const ExperimentSpec& spec, const std::vector<std::size_t>& sizes) {
  spec.validate();
  std::vector<ScalingRow> rows;
  const std::vector<std::size_t> one{0};
  const auto& ks = sizes.empty() ? one : sizes;
  for (auto k : ks) {
    const auto text = instantiate(spec.generator, k);
    const auto gen = parse_generator_spec(text);
    for (auto seed : spec.seeds) {
      const auto g = generate(gen, seed);
      const auto t = build_tree(g, spec.tree, seed);
      const auto st = stretch_report(g, t).total;
      const auto f = factor(t);
      PcgConfig cfg;
      cfg.epsilon = spec.epsilon;
      const auto out = pcg_solve(g, f, random_rhs(g.n(), seed), cfg);
      rows.push_back({text, seed, g.n(), g.m(), st, out.iterations, out.converged, theorem3_bound(st, spec.epsilon)});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.m < b.m; });
  return rows;
}

inline void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows) {
  out << "generator,seed,n,m,stretch,stretch_cbrt,iterations,converged,k_bound\n";
  for (const auto& r : rows) {
    out << r.generator << ',' << r.seed << ',' << r.n << ',' << r.m << ',' << format_real(r.stretch) << ','
        << format_real(std::cbrt(r.stretch)) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
        << r.bound.k_bound << '\n';
  }
}

struct SolveResult {
  PcgOutcome outcome;
  double stretch_total = 0.0;
  IterationBound bound_theorem3;
};

inline SolveResult solve_system(const WeightedGraph& g, std::span<const double> b, TreeMethod method,
                                double epsilon, std::uint64_t seed = 0) {
  if (!g.connected()) throw GraphError("graph must be connected");
  if (b.size() != g.n()) {
    throw DimensionError("right-hand side has " + std::to_string(b.size()) + " entries, graph has " +
                         std::to_string(g.n()) + " vertices");
  }
  const auto t = build_tree(g, method, seed);
  SolveResult res;
  res.stretch_total = stretch_report(g, t).total;
  res.bound_theorem3 = theorem3_bound(res.stretch_total, epsilon);
  PcgConfig cfg;
  cfg.epsilon = epsilon;
  res.outcome = pcg_solve(g, factor(t), b, cfg);
  return res;
}

inline nlohmann::json solve_sidecar_json(const SolveResult& r) {
  auto j = pcg_outcome_json(r.outcome, std::nullopt, r.bound_theorem3);
  j["stretch_total"] = r.stretch_total;
  j["rhs_centered"] = r.outcome.rhs_centered;
  if (r.outcome.rhs_centered) j["warning"] = "right-hand side had nonzero mean and was projected onto the range";
  return j;
}

}  // namespace treepcg
