#pragma once

// Pipelines behind the `csad` command-line tool. Each command validates its
// whole configuration before computing or writing anything, and embeds the
// resolved configuration in the JSON it emits. The output directory is left
// out of that record so reruns into another directory are byte-identical.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csad/dataset.hpp"
#include "csad/errors.hpp"
#include "csad/estimator.hpp"
#include "csad/evaluation.hpp"
#include "csad/io.hpp"
#include "csad/monitor.hpp"
#include "csad/simulator.hpp"

namespace csad {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

/// Exit status for an exception escaping a command: 2 for bad input, 3 for
/// numerical non-convergence, 1 otherwise.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const IoError*>(&e)) {
    return kExitUsage;
  }
  if (dynamic_cast<const ConvergenceFailure*>(&e)) return kExitNoConvergence;
  return 1;
}

namespace detail {

inline void prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

inline void require_file(const std::filesystem::path& path, const char* what) {
  if (!std::filesystem::is_regular_file(path)) {
    throw IoError(std::string(what) + " not found: " + path.string());
  }
}

inline void require_out_dir(const std::filesystem::path& dir) {
  if (dir.empty()) throw InvalidArgument("--out-dir is required");
}

}  // namespace detail

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::size_t p = 100;
  double bg_density = 0.02;
  double delta_density = 0.02;
  std::size_t n = 10000;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir;

  void validate() const {
    if (p < 2) throw InvalidArgument("simulate: p must be >= 2");
    if (n < 1) throw InvalidArgument("simulate: n must be >= 1");
    if (!(bg_density >= 0.0 && bg_density <= 1.0)) {
      throw InvalidArgument("simulate: background density must lie in [0, 1]");
    }
    if (!(delta_density >= 0.0 && delta_density <= 1.0)) {
      throw InvalidArgument("simulate: change density must lie in [0, 1]");
    }
    detail::require_out_dir(out_dir);
  }

  nlohmann::json to_json() const {
    return {{"p", p}, {"bg_density", bg_density}, {"delta_density", delta_density},
            {"n", n}, {"seed", seed}};
  }
};

/// Writes p_b.csv, p_delta.csv, p_f.csv, background.csv, foreground.csv and
/// scenario.json.
inline int cmd_simulate(const SimulateOptions& opt, std::ostream& log) {
  opt.validate();
  const GgmScenario sc = make_scenario(opt.p, opt.bg_density, opt.delta_density, opt.seed);
  const Dataset bg = sample_mvn(sc.p_b, opt.n, substream_seed(opt.seed, Stream::background_samples));
  const Dataset fg = sample_mvn(sc.p_f, opt.n, substream_seed(opt.seed, Stream::foreground_samples));

  detail::prepare_out_dir(opt.out_dir);
  write_matrix_csv(opt.out_dir / "p_b.csv", sc.p_b);
  write_matrix_csv(opt.out_dir / "p_delta.csv", sc.p_delta);
  write_matrix_csv(opt.out_dir / "p_f.csv", sc.p_f);
  write_dataset_csv(opt.out_dir / "background.csv", bg);
  write_dataset_csv(opt.out_dir / "foreground.csv", fg);
  write_json(opt.out_dir / "scenario.json",
             {{"config", opt.to_json()},
              {"p", sc.p},
              {"bg_density", sc.bg_density},
              {"delta_density", sc.delta_density},
              {"seed", sc.seed},
              {"n", opt.n},
              {"n_change_edges", sc.true_change_edges.size()},
              {"true_change_edges", edges_to_json(sc.true_change_edges)}});
  log << "simulated p=" << sc.p << " with " << sc.true_change_edges.size()
      << " change edges into " << opt.out_dir.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
  std::filesystem::path data;
  std::optional<std::filesystem::path> background;  // Theta_b CSV; zero when absent
  std::filesystem::path out_dir;
  AdmmConfig admm;
  bool center = false;

  void validate() const {
    admm.validate();
    detail::require_out_dir(out_dir);
    detail::require_file(data, "data file");
    if (background) detail::require_file(*background, "background precision file");
  }

  nlohmann::json to_json() const {
    return {{"data", data.string()},
            {"background", background ? nlohmann::json(background->string()) : nlohmann::json()},
            {"center", center},
            {"admm", csad::to_json(admm)}};
  }
};

/// Writes z.csv (sparse estimate), theta.csv, report.json and trace.csv.
/// Returns 3 (outputs still written) when the solve does not converge.
inline int cmd_estimate(const EstimateOptions& opt, std::ostream& log) {
  opt.validate();
  const Dataset data = read_dataset_csv(opt.data);
  if (data.rows() < 1) throw InvalidArgument("estimate: empty dataset");
  const std::size_t p = data.cols();
  const SymMatrix theta_b = opt.background ? read_sym_matrix_csv(*opt.background) : SymMatrix::zero(p);
  if (theta_b.dim() != p) {
    throw InvalidArgument("estimate: background is " + std::to_string(theta_b.dim()) +
                          "x" + std::to_string(theta_b.dim()) + " but data has " +
                          std::to_string(p) + " columns");
  }

  const SymMatrix s = empirical_covariance(data, opt.center);
  const SolveReport report = solve(s, theta_b, opt.admm);

  detail::prepare_out_dir(opt.out_dir);
  write_matrix_csv(opt.out_dir / "z.csv", report.z_hat);
  write_matrix_csv(opt.out_dir / "theta.csv", report.theta_hat);
  write_trace_csv(opt.out_dir / "trace.csv", report.residual_trace);
  const ResidualRecord last = report.residual_trace.back();
  write_json(opt.out_dir / "report.json",
             {{"config", opt.to_json()},
              {"p", p},
              {"n", data.rows()},
              {"iterations", report.iterations},
              {"converged", report.converged},
              {"primal_residual", last.primal},
              {"dual_residual", last.dual},
              {"eps_primal", last.eps_primal},
              {"eps_dual", last.eps_dual},
              {"n_edges", edge_set(report.z_hat).size()},
              {"n_change_edges", edge_set(report.z_hat - theta_b).size()}});
  log << (report.converged ? "converged" : "did not converge") << " after " << report.iterations
      << " iterations\n";
  return report.converged ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------- sweep

struct SweepCommandOptions {
  std::filesystem::path scenario_dir;
  std::filesystem::path out_dir;
  /// Explicit grid; when empty the grid is built from the range below.
  std::vector<double> lambdas;
  double grid_min = 0.002;
  double grid_max = 0.2;
  std::size_t grid_count = 10;
  bool grid_log = true;
  std::optional<std::filesystem::path> background;  // prebuilt Theta_b CSV
  double lambda_b = 0.01;                           // background fit otherwise
  AdmmConfig admm;
  bool center = false;
  double edge_threshold = 1e-6;
  std::size_t workers = 0;

  std::vector<double> grid() const {
    return lambdas.empty() ? make_grid(grid_min, grid_max, grid_count, grid_log) : lambdas;
  }

  void validate() const {
    AdmmConfig probe = admm;
    probe.lambda = lambda_b;
    probe.validate();
    detail::require_out_dir(out_dir);
    for (double l : grid()) {
      if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidArgument("sweep: lambdas must be >= 0");
    }
    if (!(edge_threshold >= 0.0)) throw InvalidArgument("sweep: edge threshold must be >= 0");
    detail::require_file(scenario_dir / "p_delta.csv", "scenario change precision");
    detail::require_file(scenario_dir / "foreground.csv", "scenario foreground data");
    if (background) {
      detail::require_file(*background, "background precision file");
    } else {
      detail::require_file(scenario_dir / "background.csv", "scenario background data");
    }
  }

  nlohmann::json to_json() const {
    return {{"scenario_dir", scenario_dir.string()},
            {"grid", grid()},
            {"background", background ? nlohmann::json(background->string()) : nlohmann::json()},
            {"lambda_b", lambda_b},
            {"center", center},
            {"edge_threshold", edge_threshold},
            {"admm", csad::to_json(admm)}};
  }
};

/// Reads a simulate output directory, runs the CSAD/BSAD sweep, writes
/// sweep.csv and sweep.json and prints a summary table.
inline int cmd_sweep(const SweepCommandOptions& opt, std::ostream& log) {
  opt.validate();
  GgmScenario sc;
  sc.p_delta = read_sym_matrix_csv(opt.scenario_dir / "p_delta.csv");
  sc.p = sc.p_delta.dim();
  sc.true_change_edges = edge_set(sc.p_delta, 0.0);
  const Dataset fg = read_dataset_csv(opt.scenario_dir / "foreground.csv");

  SymMatrix theta_b;
  if (opt.background) {
    theta_b = read_sym_matrix_csv(*opt.background);
  } else {
    theta_b = fit_background(read_dataset_csv(opt.scenario_dir / "background.csv"), opt.lambda_b,
                             opt.admm, opt.center);
  }
  if (theta_b.dim() != sc.p || fg.cols() != sc.p) {
    throw InvalidArgument("sweep: scenario files disagree on dimension");
  }

  const std::vector<SweepRecord> records = lambda_sweep(
      sc, fg, theta_b, opt.grid(), opt.admm, {opt.center, opt.edge_threshold, opt.workers});

  detail::prepare_out_dir(opt.out_dir);
  write_sweep_csv(opt.out_dir / "sweep.csv", records);
  write_json(opt.out_dir / "sweep.json", {{"config", opt.to_json()},
                                          {"p", sc.p},
                                          {"n_change_edges", sc.true_change_edges.size()},
                                          {"rows", records.size()}});

  log << std::setw(12) << "lambda" << std::setw(7) << "method" << std::setw(6) << "tp"
      << std::setw(6) << "fp" << std::setw(6) << "fn" << std::setw(11) << "precision"
      << std::setw(9) << "recall" << std::setw(7) << "iters" << '\n';
  for (const SweepRecord& r : records) {
    log << std::setw(12) << std::setprecision(4) << r.lambda << std::setw(7) << to_string(r.method)
        << std::setw(6) << r.tp << std::setw(6) << r.fp << std::setw(6) << r.fn << std::setw(11)
        << std::fixed << std::setprecision(3) << r.precision << std::setw(9) << r.recall
        << std::defaultfloat << std::setw(7) << r.iterations << (r.converged ? "" : "  (not converged)")
        << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- monitor

struct MonitorCommandOptions {
  std::filesystem::path stream;
  std::optional<std::filesystem::path> background_data;  // fit Theta_b from this
  std::optional<std::filesystem::path> background;       // or use this Theta_b CSV
  std::filesystem::path out_dir;
  double lambda_b = 0.01;
  MonitorConfig monitor;

  void validate() const {
    monitor.validate();
    AdmmConfig probe = monitor.admm;
    probe.lambda = lambda_b;
    probe.validate();
    detail::require_out_dir(out_dir);
    detail::require_file(stream, "stream file");
    if (background.has_value() == background_data.has_value()) {
      throw InvalidArgument("monitor: give exactly one of --background or --background-data");
    }
    if (background) detail::require_file(*background, "background precision file");
    if (background_data) detail::require_file(*background_data, "background data file");
  }

  nlohmann::json to_json() const {
    auto opt_path = [](const std::optional<std::filesystem::path>& p) {
      return p ? nlohmann::json(p->string()) : nlohmann::json();
    };
    return {{"stream", stream.string()},
            {"background", opt_path(background)},
            {"background_data", opt_path(background_data)},
            {"lambda_b", lambda_b},
            {"window_size", monitor.window_size},
            {"stride", monitor.stride},
            {"edge_threshold", monitor.edge_threshold},
            {"flag_min_edges", monitor.flag_min_edges},
            {"center", monitor.center},
            {"admm", csad::to_json(monitor.admm)}};
  }
};

/// Writes windows.jsonl, windows.csv and monitor.json, plus theta_b.csv when
/// the background is fitted here. A background fit that does not converge
/// surfaces as ConvergenceFailure (exit 3).
inline int cmd_monitor(const MonitorCommandOptions& opt, std::ostream& log) {
  opt.validate();
  const Dataset stream = read_dataset_csv(opt.stream);
  if (stream.rows() < opt.monitor.window_size) {
    throw InvalidArgument("monitor: stream has " + std::to_string(stream.rows()) +
                          " rows, fewer than one window");
  }
  const bool fitted = opt.background_data.has_value();
  const SymMatrix theta_b =
      fitted ? fit_background(read_dataset_csv(*opt.background_data), opt.lambda_b,
                              opt.monitor.admm, opt.monitor.center)
             : read_sym_matrix_csv(*opt.background);

  const std::vector<WindowReport> windows = run_monitor(stream, theta_b, opt.monitor);

  detail::prepare_out_dir(opt.out_dir);
  if (fitted) write_matrix_csv(opt.out_dir / "theta_b.csv", theta_b);
  write_windows_jsonl(opt.out_dir / "windows.jsonl", windows);
  write_windows_summary_csv(opt.out_dir / "windows.csv", windows);
  std::size_t flagged = 0;
  for (const WindowReport& w : windows) flagged += w.flagged ? 1 : 0;
  write_json(opt.out_dir / "monitor.json", {{"config", opt.to_json()},
                                            {"background_fitted", fitted},
                                            {"windows", windows.size()},
                                            {"flagged", flagged}});
  log << windows.size() << " windows, " << flagged << " flagged\n";
  return kExitOk;
}

}  // namespace csad
