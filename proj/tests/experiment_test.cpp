#include <gtest/gtest.h>

#include <sstream>

#include "treepcg/experiment.hpp"

using namespace treepcg;

namespace {

ExperimentSpec grid_spec() {
  ExperimentSpec spec;
  spec.generator = "grid:10x10:unit";
  spec.seeds = {1, 2, 3, 4, 5};
  return spec;
}

}  // namespace

TEST(Verify, GridReportHasOneOkRecordPerSeed) {
  const auto spec = grid_spec();
  const auto report = run_verify(spec);
  ASSERT_EQ(report.records.size(), 5u);
  EXPECT_TRUE(report.ok());
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& r = report.records[i];
    EXPECT_EQ(r.seed, spec.seeds[i]);
    EXPECT_EQ(r.n, 100u);
    EXPECT_EQ(r.m, 180u);
    EXPECT_TRUE(r.spectral_checked);
    EXPECT_LE(r.trace_abs_diff, 1e-9 * r.stretch_total);
  }
  const auto j = to_json(report, spec);
  EXPECT_EQ(j["ok"], true);
  EXPECT_EQ(j["tree"], "maxw");
  EXPECT_EQ(j["records"].size(), 5u);
  EXPECT_TRUE(j["records"][0]["pcg"].contains("bound_theorem3"));
}

TEST(Verify, TreeInputConvergesInOneIteration) {
  ExperimentSpec spec;
  spec.generator = "tree:n=60:logw";
  spec.seeds = {7};
  const auto report = run_verify(spec);
  ASSERT_EQ(report.records.size(), 1u);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.records[0].pcg_iterations, 1u);
  EXPECT_NEAR(report.records[0].stretch_total, 59.0, 1e-12);
}

TEST(Verify, AboveDenseCapSkipsSpectralChecks) {
  auto spec = grid_spec();
  spec.seeds = {1};
  spec.dense_cap = 50;
  const auto report = run_verify(spec);
  EXPECT_FALSE(report.records[0].spectral_checked);
  EXPECT_FALSE(report.records[0].spectrum.has_value());
  EXPECT_TRUE(report.ok());
}

TEST(Verify, MalformedSpecNamesTheField) {
  ExperimentSpec spec;
  spec.generator = "grid:10xfoo";
  spec.seeds = {1};
  try {
    run_verify(spec);
    FAIL() << "expected SpecParseError";
  } catch (const SpecParseError& e) {
    EXPECT_NE(std::string(e.what()).find("cols"), std::string::npos) << e.what();
  }
  spec.generator = "grid:4x4";
  spec.seeds.clear();
  EXPECT_THROW(run_verify(spec), SpecParseError);
  spec.seeds = {1};
  spec.epsilon = 1.5;
  EXPECT_THROW(run_verify(spec), SpecParseError);
}

TEST(Parsing, ChecksAndTreeMethod) {
  const auto c = parse_checks("trace,tails");
  EXPECT_TRUE(c.trace);
  EXPECT_TRUE(c.tails);
  EXPECT_FALSE(c.pcg_bound);
  const auto all = parse_checks("all");
  EXPECT_TRUE(all.trace && all.tails && all.pcg_bound);
  EXPECT_THROW(parse_checks("trace,bogus"), SpecParseError);
  EXPECT_EQ(parse_tree_method("maxw"), TreeMethod::MaxWeight);
  EXPECT_EQ(parse_tree_method("akpw"), TreeMethod::Heuristic);
  EXPECT_THROW(parse_tree_method("mst"), SpecParseError);
}

TEST(Solve, PathWithAntisymmetricLoad) {
  // Unit path 0-1-2-3-4 with b = (1,0,0,0,-1): x is linear, slope -1, mean zero.
  const auto g = generate("path:n=5:unit", 0);
  const RealVector b{1.0, 0.0, 0.0, 0.0, -1.0};
  const auto res = solve_system(g, b, TreeMethod::MaxWeight, 1e-10);
  EXPECT_TRUE(res.outcome.converged);
  EXPECT_FALSE(res.outcome.rhs_centered);
  EXPECT_EQ(res.outcome.iterations, 1u);
  const double expected[] = {2.0, 1.0, 0.0, -1.0, -2.0};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(res.outcome.x[i], expected[i], 1e-12);
  EXPECT_FALSE(solve_sidecar_json(res).contains("warning"));
}

TEST(Solve, NonzeroMeanIsFlagged) {
  const auto g = generate("grid:4x4:unit", 0);
  const auto res = solve_system(g, RealVector(16, 1.0), TreeMethod::Heuristic, 1e-8);
  EXPECT_TRUE(res.outcome.rhs_centered);
  const auto j = solve_sidecar_json(res);
  EXPECT_EQ(j["rhs_centered"], true);
  EXPECT_TRUE(j.contains("warning"));
}

TEST(Solve, DisconnectedGraphIsRejected) {
  const WeightedGraph g(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  try {
    solve_system(g, RealVector{1.0, -1.0, 0.0, 0.0}, TreeMethod::MaxWeight, 1e-8);
    FAIL() << "expected GraphError";
  } catch (const GraphError& e) {
    EXPECT_STREQ(e.what(), "graph must be connected");
  }
  EXPECT_THROW(solve_system(generate("path:n=3:unit", 0), RealVector(2, 0.0), TreeMethod::MaxWeight, 1e-8),
               DimensionError);
}

TEST(Scaling, OneRowPerSizeAndSeedSortedByEdges) {
  ExperimentSpec spec;
  spec.generator = "grid:{k}x{k}:unit";
  spec.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto rows = run_scaling(spec, {12, 6});
  ASSERT_EQ(rows.size(), 20u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i - 1].m, rows[i].m);
  EXPECT_EQ(rows.front().generator, "grid:6x6:unit");
  for (const auto& r : rows) {
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, r.bound.k_bound);
  }
}

TEST(Scaling, HalvingEpsilonMovesTheBoundByAtMostTheLogTwoTerm) {
  ExperimentSpec spec;
  spec.generator = "gnp:n=120,p=0.05:logw";
  spec.seeds = {3};
  spec.epsilon = 1e-6;
  const auto a = run_scaling(spec, {})[0];
  spec.epsilon = 5e-7;
  const auto b = run_scaling(spec, {})[0];
  EXPECT_EQ(a.stretch, b.stretch);
  EXPECT_GE(b.bound.k_bound, a.bound.k_bound);
  EXPECT_LE(b.bound.k_bound - a.bound.k_bound,
            static_cast<std::size_t>(std::ceil(std::log(2.0) / 2.0 * std::sqrt(a.bound.u))));
  EXPECT_GE(b.iterations, a.iterations);
}

TEST(Scaling, CsvIsDeterministic) {
  ExperimentSpec spec;
  spec.generator = "regular:n={k},d=3:logw";
  spec.tree = TreeMethod::Heuristic;
  spec.seeds = {4, 9};
  std::ostringstream first, second;
  write_scaling_csv(first, run_scaling(spec, {40, 80}));
  write_scaling_csv(second, run_scaling(spec, {40, 80}));
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(first.str().substr(0, first.str().find('\n')),
            "generator,seed,n,m,stretch,stretch_cbrt,iterations,converged,k_bound");
  std::size_t lines = 0;
  for (char ch : first.str()) lines += ch == '\n';
  EXPECT_EQ(lines, 5u);
}

TEST(Instantiate, ReplacesEveryPlaceholder) {
  EXPECT_EQ(instantiate("grid:{k}x{k}:unit", 30), "grid:30x30:unit");
  EXPECT_EQ(instantiate("path:n=8", 30), "path:n=8");
}
