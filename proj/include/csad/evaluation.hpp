#pragma once

// Edge-level scoring of detected structural change and the CSAD/BSAD
// regularization sweep.

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "csad/dataset.hpp"
#include "csad/edges.hpp"
#include "csad/errors.hpp"
#include "csad/estimator.hpp"
#include "csad/numerics.hpp"
#include "csad/parallel.hpp"
#include "csad/simulator.hpp"

namespace csad {

/// CSAD contrasts against the background precision; BSAD is the plain
/// graphical lasso on foreground data (background precision fixed at 0).
enum class Method { csad, bsad };

inline std::string_view to_string(Method m) { return m == Method::csad ? "CSAD" : "BSAD"; }

struct Confusion {
  double precision = 1.0;
  double recall = 1.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

/// Precision is 1 when nothing is detected, and recall is 1 when there is
/// nothing to find.
inline Confusion precision_recall(const EdgeSet& detected, const EdgeSet& truth) {
  if (detected.nodes() != truth.nodes()) {
    throw InvalidArgument("precision_recall: edge sets over different node counts");
  }
  Confusion c;
  for (const Edge& e : detected) {
    if (truth.contains(e.first, e.second)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = truth.size() - c.tp;
  if (c.tp + c.fp > 0) c.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) c.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  return c;
}

/// Edges a solve reports as changed. CSAD reads the support of Z - Theta_b;
/// BSAD reads the support of Z itself, background edges included.
inline EdgeSet detected_change_edges(const SolveReport& report, const SymMatrix& theta_b,
                                     Method method, double threshold = 1e-6) {
  SymMatrix::check_same_dim(report.z_hat, theta_b, "detected_change_edges");
  if (method == Method::csad) return edge_set(report.z_hat - theta_b, threshold);
  return edge_set(report.z_hat, threshold);
}

struct SweepRecord {
  Method method = Method::csad;
  double lambda = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 1.0;
  double recall = 1.0;
  int iterations = 0;
  bool converged = false;
};

struct SweepOptions {
  bool center = false;
  double edge_threshold = 1e-6;
  std::size_t workers = 1;
};

/// Scores CSAD (against theta_b) and BSAD (against 0) at every lambda in
/// `grid`. Records are ordered by lambda ascending, CSAD before BSAD.
inline std::vector<SweepRecord> lambda_sweep(const GgmScenario& scenario, const Dataset& fg_data,
                                             const SymMatrix& theta_b,
                                             const std::vector<double>& grid,
                                             const AdmmConfig& config,
                                             const SweepOptions& options = {}) {
  if (grid.empty()) throw InvalidArgument("lambda_sweep: empty grid");
  for (double l : grid) {
    if (!(l >= 0.0)) throw InvalidArgument("lambda_sweep: grid values must be >= 0");
  }
  if (fg_data.cols() != scenario.p || theta_b.dim() != scenario.p) {
    throw InvalidArgument("lambda_sweep: dimension mismatch with scenario");
  }
  config.validate();

  std::vector<double> lambdas = grid;
  std::stable_sort(lambdas.begin(), lambdas.end());
  const SymMatrix s = empirical_covariance(fg_data, options.center);
  const SymMatrix zero = SymMatrix::zero(scenario.p);

  return parallel_map(2 * lambdas.size(), options.workers, [&](std::size_t task) {
    const Method method = task % 2 == 0 ? Method::csad : Method::bsad;
    AdmmConfig cfg = config;
    cfg.lambda = lambdas[task / 2];
    const SymMatrix& anchor = method == Method::csad ? theta_b : zero;
    const SolveReport report = solve(s, anchor, cfg);
    const EdgeSet detected = detected_change_edges(report, anchor, method, options.edge_threshold);
    const Confusion c = precision_recall(detected, scenario.true_change_edges);
    return SweepRecord{method, cfg.lambda,  c.tp,   c.fp, c.fn, c.precision, c.recall,
                       report.iterations,  report.converged};
  });
}

struct SweepMean {
  Method method = Method::csad;
  double lambda = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t runs = 0;
};

/// Per-(lambda, method) means over sweeps that share one grid, e.g. the same
/// grid run on several simulation seeds.
inline std::vector<SweepMean> mean_over_runs(const std::vector<std::vector<SweepRecord>>& runs) {
  if (runs.empty()) return {};
  const std::size_t rows = runs.front().size();
  std::vector<SweepMean> out(rows);
  for (const auto& run : runs) {
    if (run.size() != rows) throw InvalidArgument("mean_over_runs: sweeps differ in length");
    for (std::size_t r = 0; r < rows; ++r) {
      const SweepRecord& rec = run[r];
      if (out[r].runs > 0 && (out[r].method != rec.method || out[r].lambda != rec.lambda)) {
        throw InvalidArgument("mean_over_runs: sweeps use different grids");
      }
      out[r].method = rec.method;
      out[r].lambda = rec.lambda;
      out[r].precision += rec.precision;
      out[r].recall += rec.recall;
      ++out[r].runs;
    }
  }
  for (SweepMean& m : out) {
    m.precision /= static_cast<double>(m.runs);
    m.recall /= static_cast<double>(m.runs);
  }
  return out;
}

/// `count` values from lo to hi inclusive, log- or linearly spaced.
inline std::vector<double> make_grid(double lo, double hi, std::size_t count, bool log_spaced) {
  if (count < 1) throw InvalidArgument("make_grid: count must be >= 1");
  if (log_spaced && !(lo > 0.0 && hi > 0.0)) {
    throw InvalidArgument("make_grid: log grid needs positive bounds");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(count - 1);
    out[k] = log_spaced ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                        : lo + t * (hi - lo);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace csad
