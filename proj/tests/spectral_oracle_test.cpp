#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "treepcg/experiment.hpp"
#include "treepcg/spectral_oracle.hpp"

using namespace treepcg;

namespace {

SpectralSummary triangle_spectrum() {
  WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  return generalized_spectrum(g, SpanningTree::from_edges(3, std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}}));
}

}  // namespace

TEST(GeneralizedSpectrum, TreeAgainstItselfIsIdentity) {
  const auto g = generate("tree:n=40:logw", 1);
  const auto s = generalized_spectrum(g, max_weight_spanning_tree(g));
  ASSERT_EQ(s.eigenvalues.size(), 39u);
  for (double lambda : s.eigenvalues) EXPECT_NEAR(lambda, 1.0, 1e-10);
  EXPECT_NEAR(s.trace, 39.0, 1e-9);
}

TEST(GeneralizedSpectrum, TriangleHasEigenvaluesOneAndThree) {
  // L_G = L_T + (psi_0 - psi_2)(psi_0 - psi_2)^T: the rank-one term lifts one
  // eigenvalue to 1 + path_resistance(0, 2) = 3.
  const auto s = triangle_spectrum();
  ASSERT_EQ(s.eigenvalues.size(), 2u);
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-12);
  EXPECT_NEAR(s.eigenvalues[1], 3.0, 1e-12);
  EXPECT_NEAR(s.trace, 4.0, 1e-12);
  EXPECT_NEAR(s.lambda_min, 1.0, 1e-12);
  EXPECT_NEAR(s.lambda_max, 3.0, 1e-12);
}

TEST(GeneralizedSpectrum, TraceEqualsStretchOnRandomGnp) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = generate("gnp:n=30,p=0.3:logw", seed);
    const auto t = max_weight_spanning_tree(g);
    const auto s = generalized_spectrum(g, t);
    const double st = stretch_report(g, t).total;
    EXPECT_NEAR(s.trace, st, 1e-9 * st);
    EXPECT_GE(s.lambda_min, 1.0 - 1e-9);
    EXPECT_LE(s.lambda_max, st * (1.0 + 1e-9));
  }
}

TEST(GeneralizedSpectrum, MatchesNonsymmetricProductSpectrum) {
  // Eigenvalues of L_G L_T^+ directly, with L_T^+ from the rank-one identity.
  const auto g = generate("grid:5x6:logw", 3);
  const auto t = low_stretch_heuristic_tree(g, 3);
  const auto s = generalized_spectrum(g, t);
  const Eigen::MatrixXd prod = oracle::dense_from_edges(g) * oracle::pinv_via_rank_one(oracle::dense_from_edges(t.to_graph()));
  Eigen::EigenSolver<Eigen::MatrixXd> es(prod);
  std::vector<double> vals;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    EXPECT_NEAR(es.eigenvalues()[i].imag(), 0.0, 1e-8);
    vals.push_back(es.eigenvalues()[i].real());
  }
  std::sort(vals.begin(), vals.end());
  EXPECT_NEAR(vals.front(), 0.0, 1e-8);  // the all-ones nullspace
  ASSERT_EQ(vals.size() - 1, s.eigenvalues.size());
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    EXPECT_NEAR(vals[i + 1], s.eigenvalues[i], 1e-8 * s.lambda_max);
  }
}

TEST(GeneralizedSpectrum, Errors) {
  const auto g = generate("grid:5x5:unit", 0);
  EXPECT_THROW(generalized_spectrum(g, max_weight_spanning_tree(g), 10), DenseCapExceeded);
  const auto other = generate("grid:5x5:logw", 0);
  EXPECT_THROW(generalized_spectrum(g, max_weight_spanning_tree(other)), GraphError);
}

TEST(DensePseudoInverse, AgreesWithRankOneIdentity) {
  const auto g = generate("gnp:n=60,p=0.1:logw", 4);
  const auto L = dense_laplacian(g);
  EXPECT_LE((dense_pseudo_inverse(L) - oracle::pinv_via_rank_one(L)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(DenseLaplacianSolve, SolvesTheConsistentSystem) {
  const auto g = generate("grid:9x9:logw", 1);
  std::mt19937_64 rng(3);
  const auto b = oracle::random_vector(g.n(), rng, true);
  const auto x = dense_laplacian_solve(g, b);
  const auto lx = laplacian_apply(g, x);
  double sum = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_NEAR(lx[i], b[i], 1e-12);
    sum += x[i];
  }
  EXPECT_NEAR(sum, 0.0, 1e-12);
}

TEST(TailCount, Examples) {
  const auto s = triangle_spectrum();
  EXPECT_EQ(tail_count(s, 2.0), 1u);
  EXPECT_LE(static_cast<double>(tail_count(s, 2.0)), s.trace / 2.0);
  EXPECT_EQ(tail_count(s, s.lambda_max + 0.5), 0u);
  EXPECT_EQ(tail_count(s, 1e-9), 2u);
  EXPECT_THROW(tail_count(s, 0.0), std::invalid_argument);
  EXPECT_THROW(tail_count(s, -1.0), std::invalid_argument);
}

TEST(TailCount, NeverExceedsTraceOverThreshold) {
  for (auto spec : {"grid:8x8:unit", "gnp:n=70,p=0.1:logw", "regular:n=60,d=4:logw"}) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto g = generate(spec, seed);
      for (auto method : {TreeMethod::MaxWeight, TreeMethod::Heuristic}) {
        const auto t = build_tree(g, method, seed);
        const double st = stretch_report(g, t).total;
        const auto s = generalized_spectrum(g, t);
        EXPECT_EQ(tail_violations(s, st), 0u);
      }
    }
  }
}

TEST(ExactQul, Examples) {
  const auto s = triangle_spectrum();
  const double u = std::pow(4.0, 2.0 / 3.0);  // about 2.52
  const auto split = exact_qul(s, u);
  EXPECT_EQ(split.q, 1u);
  EXPECT_EQ(split.l, 1.0);
  EXPECT_GE(std::cbrt(4.0), static_cast<double>(split.q));
  EXPECT_EQ(exact_qul(s, 3.0).q, 0u);
  EXPECT_NEAR(exact_qul(s, 2.0, LowerEdge::LambdaMin).l, 1.0, 1e-12);

  const auto tree = generate("tree:n=20:unit", 0);
  const auto st = generalized_spectrum(tree, max_weight_spanning_tree(tree));
  for (double uu : {1.0 + 1e-9, 2.0, 10.0}) EXPECT_EQ(exact_qul(st, uu).q, 0u);
}
