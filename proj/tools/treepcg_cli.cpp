// Command-line driver: graph generation, tree stretch, PCG solves and the
// verification / scaling experiments.
//
//   treepcg gen     --gen grid:30x30:unit --seeds 1 --out g.txt
//   treepcg stretch --graph g.txt --tree akpw --out stretch.csv
//   treepcg solve   --graph g.txt --rhs b.txt --tree akpw --eps 1e-8 --out x.txt
//   treepcg verify  --gen grid:10x10:unit --tree maxw --seeds 1-5 --out report.json
//   treepcg scaling --gen "grid:{k}x{k}:unit" --sizes 10,20,30 --tree akpw --out scaling.csv
//
// Flags may also come from a flat "key = value" file given with --config;
// command-line flags take precedence over it.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "treepcg/edge_list.hpp"
#include "treepcg/experiment.hpp"
#include "treepcg/generators.hpp"
#include "treepcg/reports.hpp"

namespace {

using namespace treepcg;

// "1,2,5-8" -> {1, 2, 5, 6, 7, 8}
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (auto item : treepcg::detail::split(text, ',')) {
    if (item.empty()) continue;
    auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(treepcg::detail::parse_count(item, "seeds"));
    } else {
      auto lo = treepcg::detail::parse_count(item.substr(0, dash), "seeds");
      auto hi = treepcg::detail::parse_count(item.substr(dash + 1), "seeds");
      if (hi < lo) throw SpecParseError("invalid range '" + std::string(item) + "' for field 'seeds'");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    }
  }
  if (out.empty()) throw SpecParseError("field 'seeds' needs at least one seed");
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (auto item : treepcg::detail::split(text, ',')) {
    if (!item.empty()) out.push_back(treepcg::detail::parse_count(item, "sizes"));
  }
  return out;
}

struct Options {
  std::string graph_path;
  std::string gen;
  std::string tree = "maxw";
  double eps = 1e-8;
  std::string seeds = "0";
  std::string out;
  std::size_t dense_cap = kDefaultDenseCap;
  std::string checks = "all";
  std::string sizes;
  std::string rhs_path;
  std::string eig_dir;
};

// Writes to `path`, or stdout when empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path);
  write(out);
}

WeightedGraph load_graph(const Options& o, std::uint64_t seed) {
  if (!o.graph_path.empty()) return read_edge_list(o.graph_path);
  if (o.gen.empty()) throw SpecParseError("either --graph or --gen is required");
  return generate(o.gen, seed);
}

int cmd_gen(const Options& o) {
  const auto seeds = parse_seeds(o.seeds);
  const auto g = generate(o.gen, seeds.front());
  emit(o.out, [&](std::ostream& os) { write_edge_list(os, g); });
  return 0;
}

int cmd_stretch(const Options& o) {
  const auto seed = parse_seeds(o.seeds).front();
  const auto g = load_graph(o, seed);
  if (!g.connected()) throw GraphError("graph must be connected");
  const auto t = build_tree(g, parse_tree_method(o.tree), seed);
  const auto report = stretch_report(g, t);
  if (o.out.empty()) {
    write_stretch_csv(std::cout, report);
  } else {
    emit(o.out, [&](std::ostream& os) { write_stretch_csv(os, report); });
    std::cout << stretch_summary_json(report).dump(2) << '\n';
  }
  return 0;
}

int cmd_solve(const Options& o) {
  if (o.graph_path.empty() || o.rhs_path.empty() || o.out.empty()) {
    throw SpecParseError("solve needs --graph, --rhs and --out");
  }
  const auto g = read_edge_list(o.graph_path);
  if (!g.connected()) throw GraphError("graph must be connected");
  const auto b = read_vector(o.rhs_path);
  const auto res = solve_system(g, b, parse_tree_method(o.tree), o.eps, parse_seeds(o.seeds).front());
  write_vector(o.out, res.outcome.x);
  emit(o.out + ".json", [&](std::ostream& os) { os << solve_sidecar_json(res).dump(2) << '\n'; });
  if (res.outcome.rhs_centered) std::cerr << "warning: right-hand side had nonzero mean; solved the projected system\n";
  return res.outcome.converged ? 0 : 1;
}

ExperimentSpec make_spec(const Options& o) {
  ExperimentSpec spec;
  spec.generator = o.gen;
  spec.tree = parse_tree_method(o.tree);
  spec.epsilon = o.eps;
  spec.seeds = parse_seeds(o.seeds);
  spec.checks = parse_checks(o.checks);
  spec.output = o.out;
  spec.dense_cap = o.dense_cap;
  spec.validate();
  return spec;
}

int cmd_verify(const Options& o) {
  auto spec = make_spec(o);
  std::optional<WeightedGraph> fixed;
  if (!o.graph_path.empty()) {
    fixed = read_edge_list(o.graph_path);
    spec.generator = o.graph_path;
    if (!fixed->connected()) throw GraphError("graph must be connected");
  } else {
    parse_generator_spec(spec.generator);
  }
  const auto report = run_verify(spec, fixed ? &*fixed : nullptr);
  emit(o.out, [&](std::ostream& os) { os << to_json(report, spec).dump(2) << '\n'; });
  if (!o.eig_dir.empty()) {
    std::filesystem::create_directories(o.eig_dir);
    for (const auto& rec : report.records) {
      if (!rec.spectrum) continue;
      const auto path = (std::filesystem::path(o.eig_dir) / ("eigenvalues_seed" + std::to_string(rec.seed) + ".csv")).string();
      emit(path, [&](std::ostream& os) { write_eigenvalues_csv(os, *rec.spectrum); });
    }
  }
  return report.ok() ? 0 : 1;
}

int cmd_scaling(const Options& o) {
  const auto spec = make_spec(o);
  const auto rows = run_scaling(spec, parse_sizes(o.sizes));
  emit(o.out, [&](std::ostream& os) { write_scaling_csv(os, rows); });
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.converged && r.iterations <= r.bound.k_bound;
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spanning-tree preconditioned Laplacian solver and spectral verifier"};
  app.set_config("--config", "", "flat key = value file with default flag values");
  app.require_subcommand(1);

  Options o;
  app.add_option("--graph", o.graph_path, "edge-list file (one 'u v w' per line)");
  app.add_option("--gen", o.gen, "generator spec, e.g. grid:30x30:unit or gnp:n=1000,p=0.01:logw");
  app.add_option("--tree", o.tree, "tree construction")->check(CLI::IsMember({"maxw", "akpw"}));
  app.add_option("--eps", o.eps, "target relative accuracy epsilon");
  app.add_option("--seeds", o.seeds, "seed list, e.g. 1,2,3 or 0-49");
  app.add_option("--out", o.out, "output path (stdout when omitted)");
  app.add_option("--dense-cap", o.dense_cap, "largest n for dense spectral checks");
  app.add_option("--checks", o.checks, "verify checks: trace,tails,pcg-bound or all");
  app.add_option("--sizes", o.sizes, "scaling: comma-separated values substituted for {k} in --gen");
  app.add_option("--rhs", o.rhs_path, "solve: right-hand side file, one entry per line");
  app.add_option("--eig-dir", o.eig_dir, "verify: directory for per-seed eigenvalue CSVs");

  auto* gen = app.add_subcommand("gen", "write a generated graph as an edge list")->fallthrough();
  auto* stretch = app.add_subcommand("stretch", "per-edge stretch CSV and JSON summary")->fallthrough();
  auto* solve = app.add_subcommand("solve", "solve L_G x = b with a tree preconditioner")->fallthrough();
  auto* verify = app.add_subcommand("verify", "dense spectral and PCG-bound checks per seed")->fallthrough();
  auto* scaling = app.add_subcommand("scaling", "iterations vs stretch over growing graphs")->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(o);
    if (stretch->parsed()) return cmd_stretch(o);
    if (solve->parsed()) return cmd_solve(o);
    if (verify->parsed()) return cmd_verify(o);
    if (scaling->parsed()) return cmd_scaling(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
