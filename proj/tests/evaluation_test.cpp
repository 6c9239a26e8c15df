#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "csad/evaluation.hpp"
#include "csad/parallel.hpp"
#include "csad/simulator.hpp"

namespace csad {
namespace {

EdgeSet edges(std::size_t p, std::initializer_list<std::pair<std::size_t, std::size_t>> list) {
  EdgeSet e(p);
  for (auto [i, j] : list) e.insert(i, j);
  return e;
}

TEST(EdgeSet, NormalizesAndRejects) {
  EdgeSet e(4);
  e.insert(2, 0);
  EXPECT_TRUE(e.contains(0, 2));
  EXPECT_TRUE(e.contains(2, 0));
  e.insert(0, 2);
  EXPECT_EQ(e.size(), 1u);
  EXPECT_THROW(e.insert(1, 1), InvalidArgument);
  EXPECT_THROW(e.insert(0, 4), InvalidArgument);
}

TEST(EdgeSetOf, Examples) {
  Eigen::MatrixXd m(3, 3);
  m << 1, 0.5, 0, 0.5, 1, 1e-9, 0, 1e-9, 1;
  const EdgeSet e = edge_set(SymMatrix(m));
  EXPECT_EQ(e, edges(3, {{0, 1}}));
  EXPECT_TRUE(edge_set(SymMatrix::identity(5)).empty());
  EXPECT_EQ(edge_set(SymMatrix(m), 0.0).size(), 2u);
}

TEST(PrecisionRecall, Examples) {
  const EdgeSet truth = edges(4, {{0, 1}, {1, 2}});
  Confusion c = precision_recall(edges(4, {{0, 1}, {2, 3}}), truth);
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_DOUBLE_EQ(c.precision, 0.5);
  EXPECT_DOUBLE_EQ(c.recall, 0.5);

  c = precision_recall(EdgeSet(4), truth);
  EXPECT_EQ(c.precision, 1.0);
  EXPECT_EQ(c.recall, 0.0);

  c = precision_recall(edges(4, {{0, 3}}), EdgeSet(4));
  EXPECT_EQ(c.precision, 0.0);
  EXPECT_EQ(c.recall, 1.0);

  EXPECT_THROW(precision_recall(EdgeSet(3), EdgeSet(4)), InvalidArgument);
}

TEST(PrecisionRecall, PropertyCountsAndRange) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 100; ++trial) {
    EdgeSet d(8), t(8);
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = i + 1; j < 8; ++j) {
        if (coin(rng)) d.insert(i, j);
        if (coin(rng)) t.insert(i, j);
      }
    }
    const Confusion c = precision_recall(d, t);
    EXPECT_EQ(c.tp + c.fp, d.size());
    EXPECT_EQ(c.tp + c.fn, t.size());
    EXPECT_GE(c.precision, 0.0);
    EXPECT_LE(c.precision, 1.0);
    EXPECT_GE(c.recall, 0.0);
    EXPECT_LE(c.recall, 1.0);
  }
}

TEST(MakeGrid, Examples) {
  const std::vector<double> lin = make_grid(0.0, 1.0, 5, false);
  ASSERT_EQ(lin.size(), 5u);
  EXPECT_DOUBLE_EQ(lin[1], 0.25);
  EXPECT_EQ(lin.back(), 1.0);
  const std::vector<double> lg = make_grid(0.01, 1.0, 3, true);
  EXPECT_EQ(lg.front(), 0.01);
  EXPECT_NEAR(lg[1], 0.1, 1e-15);
  EXPECT_EQ(lg.back(), 1.0);
  EXPECT_EQ(make_grid(0.3, 0.9, 1, true), std::vector<double>{0.3});
  EXPECT_THROW(make_grid(0.0, 1.0, 3, true), InvalidArgument);
  EXPECT_THROW(make_grid(0.1, 1.0, 0, false), InvalidArgument);
}

struct SweepFixture : ::testing::Test {
  static constexpr std::uint64_t kSeed = 4;
  GgmScenario sc = make_scenario(15, 0.1, 0.1, kSeed);
  Dataset fg = sample_mvn(sc.p_f, 4000, substream_seed(kSeed, Stream::foreground_samples));
};

TEST_F(SweepFixture, OrderingAndCount) {
  const std::vector<double> grid = {0.2, 0.01, 0.05};
  const auto recs = lambda_sweep(sc, fg, sc.p_b, grid, AdmmConfig{});
  ASSERT_EQ(recs.size(), 6u);
  const double sorted[] = {0.01, 0.05, 0.2};
  for (std::size_t k = 0; k < recs.size(); ++k) {
    EXPECT_EQ(recs[k].lambda, sorted[k / 2]);
    EXPECT_EQ(recs[k].method, k % 2 == 0 ? Method::csad : Method::bsad);
    EXPECT_EQ(recs[k].tp + recs[k].fn, sc.true_change_edges.size());
  }
}

TEST_F(SweepFixture, HugeLambdaDetectsNothing) {
  const auto recs = lambda_sweep(sc, fg, sc.p_b, {1e3}, AdmmConfig{});
  EXPECT_EQ(recs[0].tp, 0u);
  EXPECT_EQ(recs[0].fp, 0u);
  EXPECT_EQ(recs[0].precision, 1.0);
}

TEST_F(SweepFixture, DetectionsShrinkAsLambdaGrows) {
  const auto recs = lambda_sweep(sc, fg, sc.p_b, make_grid(0.005, 0.5, 6, true), AdmmConfig{});
  std::size_t prev_csad = SIZE_MAX;
  std::size_t prev_bsad = SIZE_MAX;
  for (const SweepRecord& r : recs) {
    std::size_t& prev = r.method == Method::csad ? prev_csad : prev_bsad;
    // Coarse monotonicity: allow a one-edge wobble from finite tolerances.
    EXPECT_LE(r.tp + r.fp, prev == SIZE_MAX ? SIZE_MAX : prev + 1);
    prev = r.tp + r.fp;
  }
}

TEST_F(SweepFixture, DeterministicAcrossWorkerCounts) {
  const auto grid = make_grid(0.01, 0.2, 4, true);
  const auto a = lambda_sweep(sc, fg, sc.p_b, grid, AdmmConfig{}, {false, 1e-6, 1});
  const auto b = lambda_sweep(sc, fg, sc.p_b, grid, AdmmConfig{}, {false, 1e-6, 3});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].tp, b[k].tp);
    EXPECT_EQ(a[k].fp, b[k].fp);
    EXPECT_EQ(a[k].iterations, b[k].iterations);
  }
}

TEST_F(SweepFixture, RejectsBadInput) {
  EXPECT_THROW(lambda_sweep(sc, fg, sc.p_b, {}, AdmmConfig{}), InvalidArgument);
  EXPECT_THROW(lambda_sweep(sc, fg, sc.p_b, {-0.1}, AdmmConfig{}), InvalidArgument);
  EXPECT_THROW(lambda_sweep(sc, fg, SymMatrix::zero(3), {0.1}, AdmmConfig{}), InvalidArgument);
}

TEST(MeanOverRuns, AveragesPerRow) {
  std::vector<SweepRecord> a(2), b(2);
  a[0] = {Method::csad, 0.1, 0, 0, 0, 1.0, 0.5, 1, true};
  a[1] = {Method::bsad, 0.1, 0, 0, 0, 0.2, 0.0, 1, true};
  b[0] = {Method::csad, 0.1, 0, 0, 0, 0.5, 1.0, 1, true};
  b[1] = {Method::bsad, 0.1, 0, 0, 0, 0.4, 1.0, 1, true};
  const auto m = mean_over_runs({a, b});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m[0].precision, 0.75);
  EXPECT_DOUBLE_EQ(m[0].recall, 0.75);
  EXPECT_DOUBLE_EQ(m[1].precision, 0.3);
  EXPECT_EQ(m[1].runs, 2u);
  b[0].lambda = 0.2;
  EXPECT_THROW(mean_over_runs({a, b}), InvalidArgument);
  EXPECT_TRUE(mean_over_runs({}).empty());
}

TEST(ParallelMap, PreservesOrderAndPropagatesErrors) {
  const auto squares = parallel_map(50, 4, [](std::size_t k) { return k * k; });
  for (std::size_t k = 0; k < 50; ++k) EXPECT_EQ(squares[k], k * k);
  EXPECT_THROW(parallel_map(10, 3,
                            [](std::size_t k) -> int {
                              if (k == 7) throw std::runtime_error("boom");
                              return 0;
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace csad
