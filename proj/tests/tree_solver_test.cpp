#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "treepcg/generators.hpp"
#include "treepcg/tree_solver.hpp"

using namespace treepcg;

namespace {

SpanningTree tree_of(const WeightedGraph& tg, Vertex root = 0) {
  return SpanningTree::from_edges(tg.n(), tg.edges(), root);
}

}  // namespace

TEST(TreeFactor, SingleEdge) {
  const auto f = factor(SpanningTree::from_edges(2, std::vector<Edge>{{0, 1, 1.0}}));
  EXPECT_EQ(f.rank(), 1u);
  EXPECT_EQ(f.elimination_order()[0], 1);
  EXPECT_EQ(f.elimination_order()[1], 0);
  EXPECT_EQ(f.pivot(0), 1.0);
}

TEST(TreeFactor, UnitStarHasUnitLeafPivots) {
  const auto f = factor(SpanningTree::from_edges(4, std::vector<Edge>{{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}));
  EXPECT_EQ(f.rank(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(f.pivot(i), 1.0);
  EXPECT_EQ(f.elimination_order().back(), 0);
}

TEST(TreeFactor, ChildrenPrecedeParentsAndPivotsArePositive) {
  const auto tg = oracle::random_tree(300, 12);
  const auto t = tree_of(tg, 17);
  const auto f = factor(t);
  const auto order = f.elimination_order();
  std::vector<std::size_t> pos(t.n());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  EXPECT_EQ(order.back(), t.root());
  for (std::size_t v = 0; v < t.n(); ++v) {
    if (t.parent(static_cast<Vertex>(v)) == kNoParent) continue;
    EXPECT_LT(pos[v], pos[t.parent(static_cast<Vertex>(v))]);
  }
  for (std::size_t i = 0; i < f.rank(); ++i) {
    EXPECT_GT(f.pivot(i), 0.0);
    // After its subtree is gone a vertex's pivot is its parent-edge weight.
    EXPECT_NEAR(f.pivot(i), t.parent_weight(order[i]), 1e-12 * t.parent_weight(order[i]));
  }
}

TEST(PseudoSolve, PathAntisymmetricLoad) {
  const auto f = factor(SpanningTree::from_edges(3, std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}}));
  const auto x = pseudo_solve(f, RealVector{1.0, 0.0, -1.0});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 0.0, 1e-15);
  EXPECT_NEAR(x[2], -1.0, 1e-15);
}

TEST(PseudoSolve, OnesMapToZero) {
  const auto f = factor(tree_of(oracle::random_tree(50, 1)));
  for (double v : pseudo_solve(f, RealVector(50, 1.0))) EXPECT_EQ(v, 0.0);
}

TEST(PseudoSolve, DimensionMismatch) {
  const auto f = factor(tree_of(oracle::random_tree(5, 1)));
  EXPECT_THROW(pseudo_solve(f, RealVector(4, 1.0)), DimensionError);
}

TEST(PseudoSolve, MatchesDensePseudoInverseOnRandomTree) {
  std::mt19937_64 rng(2);
  const auto tg = oracle::random_tree(200, 9);
  const auto f = factor(tree_of(tg, 33));
  const auto pinv = oracle::pinv_via_rank_one(oracle::dense_from_edges(tg));
  for (int trial = 0; trial < 5; ++trial) {
    const auto b = oracle::random_vector(200, rng);  // not mean-zero: pinv ignores the mean
    const Eigen::VectorXd expected = pinv * oracle::to_eigen(b);
    const auto x = pseudo_solve(f, b);
    EXPECT_LE((oracle::to_eigen(x) - expected).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(PseudoSolve, ResidualSelfCheck) {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto tg = oracle::random_tree(10 + 50 * seed, seed);
    const auto f = factor(tree_of(tg));
    const auto b = oracle::random_vector(tg.n(), rng, true);
    const auto x = pseudo_solve(f, b);
    const auto lx = laplacian_apply(tg, x);
    double res = 0.0, nb = 0.0, sx = 0.0, sabs = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      res += (lx[i] - b[i]) * (lx[i] - b[i]);
      nb += b[i] * b[i];
      sx += x[i];
      sabs += std::abs(x[i]);
    }
    EXPECT_LE(std::sqrt(res), 1e-11 * std::sqrt(nb));
    EXPECT_LE(std::abs(sx), 1e-14 * sabs);
  }
}

TEST(PseudoSolve, InvertsLaplacianOnMeanZeroVectors) {
  std::mt19937_64 rng(6);
  for (auto spec : {"tree:n=150:logw", "path:n=100:unit"}) {
    const auto tg = generate(spec, 3);
    const auto f = factor(tree_of(tg));
    const auto x = oracle::random_vector(tg.n(), rng, true);
    const auto back = pseudo_solve(f, laplacian_apply(tg, x));
    const auto b = oracle::random_vector(tg.n(), rng, true);
    const auto again = laplacian_apply(tg, pseudo_solve(f, b));
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_NEAR(back[i], x[i], 1e-10) << spec;
      EXPECT_NEAR(again[i], b[i], 1e-10) << spec;
    }
  }
}

TEST(PseudoSolve, QuadraticFormEqualsPathResistance) {
  std::mt19937_64 rng(10);
  const auto tg = oracle::random_tree(120, 21);
  const auto t = tree_of(tg);
  const auto f = factor(t);
  std::uniform_int_distribution<Vertex> pick(0, 119);
  for (int q = 0; q < 100; ++q) {
    const Vertex u = pick(rng), v = pick(rng);
    RealVector d(120, 0.0);
    d[u] += 1.0;
    d[v] -= 1.0;
    const auto x = pseudo_solve(f, d);
    EXPECT_NEAR(x[u] - x[v], t.path_resistance(u, v), 1e-10);
  }
}

TEST(PseudoSolve, ReentrantOverSharedFactorization) {
  const auto tg = oracle::random_tree(64, 2);
  const auto f = factor(tree_of(tg));
  std::mt19937_64 rng(1);
  const auto b = oracle::random_vector(64, rng, true);
  RealVector x(64), work(64);
  f.pseudo_solve(b, x, work);
  RealVector in_place = b;
  f.pseudo_solve(in_place, in_place, work);
  EXPECT_EQ(in_place, x);
}
