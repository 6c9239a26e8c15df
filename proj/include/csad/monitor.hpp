#pragma once

// Two-phase anomaly monitoring: fit a sparse background precision from
// anomaly-free history, then re-estimate a contrastive foreground on each
// sliding window of new observations.

#include <cstddef>
#include <string>
#include <vector>

#include "csad/dataset.hpp"
#include "csad/edges.hpp"
#include "csad/errors.hpp"
#include "csad/estimator.hpp"
#include "csad/evaluation.hpp"
#include "csad/numerics.hpp"
#include "csad/parallel.hpp"

namespace csad {

struct MonitorConfig {
  std::size_t window_size = 2000;
  std::size_t stride = 2000;
  AdmmConfig admm;  // admm.lambda is the per-window lambda
  double edge_threshold = 1e-6;
  std::size_t flag_min_edges = 1;
  /// Applies to both the background fit and the windows.
  bool center = false;
  std::size_t workers = 1;

  void validate() const {
    if (window_size < 2) throw InvalidArgument("MonitorConfig: window_size must be >= 2");
    if (stride < 1) throw InvalidArgument("MonitorConfig: stride must be >= 1");
    if (!(edge_threshold >= 0.0)) throw InvalidArgument("MonitorConfig: edge_threshold < 0");
    admm.validate();
  }
};

struct WindowReport {
  std::size_t window_index = 0;
  std::size_t start_row = 0;
  std::size_t end_row = 0;  // exclusive
  EdgeSet detected_edges;
  bool flagged = false;
  bool converged = false;
  int iterations = 0;
};

/// Background precision: the exactly-sparse Z of a graphical lasso fit with
/// penalty lambda_b. Throws ConvergenceFailure if the solve does not converge.
inline SymMatrix fit_background(const Dataset& data, double lambda_b, const AdmmConfig& config,
                                bool center = false) {
  if (data.rows() < 2) throw InvalidArgument("fit_background: need at least 2 rows");
  AdmmConfig cfg = config;
  cfg.lambda = lambda_b;
  const SymMatrix s = empirical_covariance(data, center);
  SolveReport report = solve(s, SymMatrix::zero(s.dim()), cfg);
  if (!report.converged) {
    throw ConvergenceFailure("fit_background: no convergence after " +
                             std::to_string(report.iterations) + " iterations");
  }
  return std::move(report.z_hat);
}

/// floor((rows - window_size) / stride) + 1 full windows; trailing partial
/// windows are dropped.
inline std::size_t window_count(std::size_t rows, std::size_t window_size, std::size_t stride) {
  if (rows < window_size) return 0;
  return (rows - window_size) / stride + 1;
}

inline WindowReport run_window(const Dataset& stream, std::size_t index, const SymMatrix& theta_b,
                               const MonitorConfig& config) {
  WindowReport w;
  w.window_index = index;
  w.start_row = index * config.stride;
  w.end_row = w.start_row + config.window_size;
  const SymMatrix s = empirical_covariance(stream.slice(w.start_row, w.end_row), config.center);
  const SolveReport report = solve(s, theta_b, config.admm);
  w.detected_edges = detected_change_edges(report, theta_b, Method::csad, config.edge_threshold);
  w.flagged = w.detected_edges.size() >= config.flag_min_edges;
  w.converged = report.converged;
  w.iterations = report.iterations;
  return w;
}

inline std::vector<WindowReport> run_monitor(const Dataset& stream, const SymMatrix& theta_b,
                                             const MonitorConfig& config) {
  config.validate();
  if (stream.cols() != theta_b.dim()) {
    throw InvalidArgument("run_monitor: stream has " + std::to_string(stream.cols()) +
                          " columns, background has dimension " + std::to_string(theta_b.dim()));
  }
  if (stream.rows() < config.window_size) {
    throw InvalidArgument("run_monitor: stream shorter than one window");
  }
  const std::size_t n = window_count(stream.rows(), config.window_size, config.stride);
  return parallel_map(n, config.workers,
                      [&](std::size_t k) { return run_window(stream, k, theta_b, config); });
}

}  // namespace csad
