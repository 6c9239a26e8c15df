#include <gtest/gtest.h>

#include "csad/monitor.hpp"
#include "csad/simulator.hpp"

namespace csad {
namespace {

TEST(WindowCount, Arithmetic) {
  EXPECT_EQ(window_count(10000, 2000, 2000), 5u);
  EXPECT_EQ(window_count(10000, 2000, 1000), 9u);
  EXPECT_EQ(window_count(2000, 2000, 500), 1u);
  EXPECT_EQ(window_count(1999, 2000, 500), 0u);
  EXPECT_EQ(window_count(10999, 2000, 2000), 5u);
}

TEST(MonitorConfig, Validation) {
  MonitorConfig c;
  EXPECT_NO_THROW(c.validate());
  c.window_size = 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.stride = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

struct MonitorFixture : ::testing::Test {
  GgmScenario sc = make_scenario(8, 0.2, 0.2, 3);
  Dataset stream = Dataset::concat(sample_mvn(sc.p_b, 1500, 21), sample_mvn(sc.p_f, 1500, 22));

  MonitorConfig config() const {
    MonitorConfig c;
    c.window_size = 500;
    c.stride = 250;
    c.admm.lambda = 0.1;
    return c;
  }
};

TEST_F(MonitorFixture, WindowBoundsAndFlags) {
  const auto windows = run_monitor(stream, sc.p_b, config());
  ASSERT_EQ(windows.size(), window_count(3000, 500, 250));
  for (std::size_t k = 0; k < windows.size(); ++k) {
    EXPECT_EQ(windows[k].window_index, k);
    EXPECT_EQ(windows[k].start_row, k * 250);
    EXPECT_EQ(windows[k].end_row, k * 250 + 500);
    EXPECT_EQ(windows[k].flagged, windows[k].detected_edges.size() >= 1);
  }
}

TEST_F(MonitorFixture, WindowsAreIndependent) {
  const MonitorConfig c = config();
  const auto all = run_monitor(stream, sc.p_b, c);
  for (std::size_t k : {0u, 3u, 7u}) {
    const WindowReport alone = run_window(stream, k, sc.p_b, c);
    EXPECT_EQ(alone.detected_edges, all[k].detected_edges);
    EXPECT_EQ(alone.iterations, all[k].iterations);
  }
  MonitorConfig par = c;
  par.workers = 3;
  const auto again = run_monitor(stream, sc.p_b, par);
  for (std::size_t k = 0; k < all.size(); ++k) {
    EXPECT_EQ(again[k].detected_edges, all[k].detected_edges);
  }
}

TEST_F(MonitorFixture, SingleWindowStream) {
  MonitorConfig c = config();
  c.window_size = 3000;
  EXPECT_EQ(run_monitor(stream, sc.p_b, c).size(), 1u);
}

TEST_F(MonitorFixture, RejectsBadInput) {
  EXPECT_THROW(run_monitor(stream, SymMatrix::identity(3), config()), InvalidArgument);
  MonitorConfig c = config();
  c.window_size = 4000;
  EXPECT_THROW(run_monitor(stream, sc.p_b, c), InvalidArgument);
}

TEST(FitBackground, LargePenaltyGivesDiagonal) {
  const GgmScenario sc = make_scenario(6, 0.4, 0.0, 8);
  const Dataset d = sample_mvn(sc.p_b, 2000, 9);
  const SymMatrix z = fit_background(d, 10.0, AdmmConfig{});
  EXPECT_TRUE(edge_set(z, 0.0).empty());
  EXPECT_THROW(fit_background(Dataset(Eigen::MatrixXd::Ones(1, 3)), 0.1, AdmmConfig{}),
               InvalidArgument);
}

TEST(FitBackground, NonConvergenceThrows) {
  const GgmScenario sc = make_scenario(6, 0.4, 0.0, 8);
  const Dataset d = sample_mvn(sc.p_b, 2000, 9);
  AdmmConfig cfg;
  cfg.max_iterations = 1;
  EXPECT_THROW(fit_background(d, 0.01, cfg), ConvergenceFailure);
}

}  // namespace
}  // namespace csad
