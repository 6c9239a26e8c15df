// csad: simulate, estimate, sweep and monitor from the command line.
//
// Exit codes: 0 success, 2 usage or validation error, 3 numerical
// non-convergence.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "csad/commands.hpp"

namespace {

void add_admm_flags(CLI::App* cmd, csad::AdmmConfig& admm) {
  cmd->add_option("--rho", admm.rho, "ADMM penalty parameter")->capture_default_str();
  cmd->add_option("--eps-abs", admm.eps_abs, "absolute stopping tolerance")->capture_default_str();
  cmd->add_option("--eps-rel", admm.eps_rel, "relative stopping tolerance")->capture_default_str();
  cmd->add_option("--max-iters", admm.max_iterations, "iteration cap")->capture_default_str();
}

// CLI11 stores optional paths as strings; empty means absent.
std::optional<std::filesystem::path> as_optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contrastive structured anomaly detection for Gaussian graphical models"};
  app.require_subcommand(1);

  csad::SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic background/foreground scenario");
  simulate->add_option("--p", sim.p, "dimension")->capture_default_str();
  simulate->add_option("--bg-density", sim.bg_density, "background edge probability")
      ->capture_default_str();
  simulate->add_option("--delta-density", sim.delta_density, "change edge probability")
      ->capture_default_str();
  simulate->add_option("--n", sim.n, "samples per dataset")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
  simulate->add_option("--out-dir", sim.out_dir, "output directory")->required();

  csad::EstimateOptions est;
  std::string est_background;
  auto* estimate = app.add_subcommand("estimate", "run one ADMM solve on a data CSV");
  estimate->add_option("--data", est.data, "observations CSV (one row per datapoint)")->required();
  estimate->add_option("--background", est_background,
                       "background precision CSV (default: zero matrix, i.e. graphical lasso)");
  estimate->add_option("--out-dir", est.out_dir, "output directory")->required();
  estimate->add_option("--lambda", est.admm.lambda, "lasso penalty")->capture_default_str();
  estimate->add_flag("--center", est.center, "center the data before forming the covariance");
  add_admm_flags(estimate, est.admm);

  csad::SweepCommandOptions swp;
  std::string swp_background;
  bool linear_grid = false;
  auto* sweep = app.add_subcommand("sweep", "CSAD vs BSAD precision/recall over a lambda grid");
  sweep->add_option("--scenario-dir", swp.scenario_dir, "directory written by `simulate`")
      ->required();
  sweep->add_option("--out-dir", swp.out_dir, "output directory")->required();
  sweep->add_option("--lambda", swp.lambdas, "explicit grid values (repeatable or comma separated)")
      ->delimiter(',');
  sweep->add_option("--grid-min", swp.grid_min, "smallest grid lambda")->capture_default_str();
  sweep->add_option("--grid-max", swp.grid_max, "largest grid lambda")->capture_default_str();
  sweep->add_option("--grid-count", swp.grid_count, "grid points")->capture_default_str();
  sweep->add_flag("--grid-linear", linear_grid, "linear instead of log spacing");
  sweep->add_option("--background", swp_background,
                    "prebuilt background precision CSV (default: fit background.csv)");
  sweep->add_option("--lambda-b", swp.lambda_b, "penalty for the background fit")
      ->capture_default_str();
  sweep->add_option("--threshold", swp.edge_threshold, "edge magnitude threshold")
      ->capture_default_str();
  sweep->add_option("--workers", swp.workers, "parallel solves (0 = all processors)")
      ->capture_default_str();
  sweep->add_flag("--center", swp.center, "center the data before forming covariances");
  add_admm_flags(sweep, swp.admm);

  csad::MonitorCommandOptions mon;
  std::string mon_background;
  std::string mon_background_data;
  mon.monitor.workers = 0;
  mon.monitor.admm.lambda = 0.1;
  auto* monitor = app.add_subcommand("monitor", "sliding-window structural change monitoring");
  monitor->add_option("--stream", mon.stream, "observations to monitor, one row per datapoint")
      ->required();
  monitor->add_option("--background", mon_background, "prebuilt background precision CSV");
  monitor->add_option("--background-data", mon_background_data,
                      "anomaly-free observations to fit the background from");
  monitor->add_option("--out-dir", mon.out_dir, "output directory")->required();
  monitor->add_option("--lambda", mon.monitor.admm.lambda, "per-window penalty")
      ->capture_default_str();
  monitor->add_option("--lambda-b", mon.lambda_b, "penalty for the background fit")
      ->capture_default_str();
  monitor->add_option("--window", mon.monitor.window_size, "rows per window")->capture_default_str();
  monitor->add_option("--stride", mon.monitor.stride, "rows between window starts")
      ->capture_default_str();
  monitor->add_option("--flag-min-edges", mon.monitor.flag_min_edges,
                      "flag a window with at least this many changed edges")
      ->capture_default_str();
  monitor->add_option("--threshold", mon.monitor.edge_threshold, "edge magnitude threshold")
      ->capture_default_str();
  monitor->add_option("--workers", mon.monitor.workers, "parallel windows (0 = all processors)")
      ->capture_default_str();
  monitor->add_flag("--center", mon.monitor.center, "center data in both phases");
  add_admm_flags(monitor, mon.monitor.admm);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return csad::kExitUsage;
  }

  try {
    if (*simulate) return csad::cmd_simulate(sim, std::cout);
    if (*estimate) {
      est.background = as_optional_path(est_background);
      return csad::cmd_estimate(est, std::cout);
    }
    if (*sweep) {
      swp.background = as_optional_path(swp_background);
      swp.grid_log = !linear_grid;
      return csad::cmd_sweep(swp, std::cout);
    }
    if (*monitor) {
      mon.background = as_optional_path(mon_background);
      mon.background_data = as_optional_path(mon_background_data);
      return csad::cmd_monitor(mon, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return csad::exit_code_for(e);
  }
  return csad::kExitUsage;
}
