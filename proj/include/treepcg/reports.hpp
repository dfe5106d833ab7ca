#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <ostream>

#include <nlohmann/json.hpp>

#include "treepcg/edge_list.hpp"
#include "treepcg/pcg.hpp"
#include "treepcg/spanning_tree.hpp"
#include "treepcg/spectral_oracle.hpp"

namespace treepcg {

// "u,v,w,stretch" rows in canonical edge order.
inline void write_stretch_csv(std::ostream& out, const StretchReport& r) {
  out << "u,v,w,stretch\n";
  for (const auto& e : r.per_edge) {
    out << e.edge.u << ',' << e.edge.v << ',' << format_real(e.edge.w) << ',' << format_real(e.stretch) << '\n';
  }
}

// Histogram bins are powers of two: [2^k, 2^(k+1)).
inline nlohmann::json stretch_summary_json(const StretchReport& r) {
  double max = 0.0;
  std::map<int, std::size_t> bins;
  for (const auto& e : r.per_edge) {
    max = std::max(max, e.stretch);
    ++bins[static_cast<int>(std::floor(std::log2(e.stretch)))];
  }
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [k, count] : bins) {
    hist.push_back({{"lo", std::ldexp(1.0, k)}, {"hi", std::ldexp(1.0, k + 1)}, {"count", count}});
  }
  const double mean = r.per_edge.empty() ? 0.0 : r.total / static_cast<double>(r.per_edge.size());
  return {{"total", r.total}, {"max", max}, {"mean", mean}, {"histogram", hist}};
}

inline nlohmann::json spectral_summary_json(const SpectralSummary& s, bool include_eigenvalues = true) {
  nlohmann::json j = {{"trace", s.trace}, {"lambda_min", s.lambda_min}, {"lambda_max", s.lambda_max},
                      {"count", s.eigenvalues.size()}};
  if (include_eigenvalues) j["eigenvalues"] = s.eigenvalues;
  return j;
}

inline void write_eigenvalues_csv(std::ostream& out, const SpectralSummary& s) {
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) out << i << ',' << format_real(s.eigenvalues[i]) << '\n';
}

inline nlohmann::json pcg_outcome_json(const PcgOutcome& o, std::optional<IterationBound> exact_spectrum,
                                       std::optional<IterationBound> theorem3) {
  nlohmann::json j = {{"iterations", o.iterations},
                      {"converged", o.converged},
                      {"final_residual", o.final_residual},
                      {"bound_exact_spectrum", nullptr},
                      {"bound_theorem3", nullptr},
                      {"a_norm_error", nullptr}};
  if (exact_spectrum) j["bound_exact_spectrum"] = exact_spectrum->k_bound;
  if (theorem3) j["bound_theorem3"] = theorem3->k_bound;
  if (o.a_norm_error) j["a_norm_error"] = *o.a_norm_error;
  return j;
}

}  // namespace treepcg
