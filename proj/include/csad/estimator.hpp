#pragma once

// Contrastive sparse precision estimation:
//
//   minimize  trace(S Theta) - log det(Theta) + lambda * ||Theta - Theta_b||_1
//
// over positive definite Theta, solved by ADMM on the splitting Theta = Z
// with scaled dual U. Theta_b = 0 gives the ordinary graphical lasso.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "csad/dataset.hpp"
#include "csad/errors.hpp"
#include "csad/numerics.hpp"

namespace csad {

struct AdmmConfig {
  double lambda = 0.1;
  double rho = 1.0;
  double eps_abs = 1e-4;
  double eps_rel = 1e-2;
  int max_iterations = 5000;
  /// Verify Theta-update stationarity and positive definiteness on every
  /// iteration. Costs one extra O(p^3) inverse per iteration.
  bool check_invariants = false;

  void validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
      throw InvalidArgument("AdmmConfig: lambda must be finite and >= 0");
    }
    if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidArgument("AdmmConfig: rho must be > 0");
    if (!(eps_abs > 0.0)) throw InvalidArgument("AdmmConfig: eps_abs must be > 0");
    if (!(eps_rel > 0.0)) throw InvalidArgument("AdmmConfig: eps_rel must be > 0");
    if (max_iterations < 1) throw InvalidArgument("AdmmConfig: max_iterations must be >= 1");
  }
};

struct AdmmState {
  SymMatrix theta;
  SymMatrix z;
  SymMatrix u;
  int iteration = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double eps_primal = 0.0;
  double eps_dual = 0.0;
};

struct ResidualRecord {
  int iteration = 0;
  double primal = 0.0;
  double dual = 0.0;
  double eps_primal = 0.0;
  double eps_dual = 0.0;

  bool below_tolerance() const noexcept { return primal <= eps_primal && dual <= eps_dual; }
};

struct SolveReport {
  SymMatrix theta_hat;
  /// Z iterate; Z - Theta_b is exactly sparse.
  SymMatrix z_hat;
  int iterations = 0;
  bool converged = false;
  std::vector<ResidualRecord> residual_trace;
  /// Populated only when AdmmConfig::check_invariants is set.
  double max_stationarity_residual = std::numeric_limits<double>::quiet_NaN();
  double min_theta_eigenvalue = std::numeric_limits<double>::quiet_NaN();
};

/// Maximum-likelihood covariance with 1/n normalization. Without centering
/// the data are taken to be zero mean.
inline SymMatrix empirical_covariance(const Dataset& data, bool center = false) {
  if (data.empty()) throw InvalidArgument("empirical_covariance: empty dataset");
  const double n = static_cast<double>(data.rows());
  if (!center) {
    const Eigen::MatrixXd& x = data.matrix();
    return SymMatrix((x.transpose() * x) / n);
  }
  const Eigen::RowVectorXd mean = data.matrix().colwise().mean();
  const Eigen::MatrixXd xc = data.matrix().rowwise() - mean;
  return SymMatrix((xc.transpose() * xc) / n);
}

namespace detail {

struct ThetaStep {
  SymMatrix theta;
  Eigen::VectorXd spectrum;  // eigenvalues of theta
};

// Positive root of rho*t - 1/t = ev, written to avoid cancellation when ev < 0.
inline double quadratic_root(double ev, double rho) {
  const double r = std::sqrt(ev * ev + 4.0 * rho);
  return ev >= 0.0 ? (ev + r) / (2.0 * rho) : 2.0 / (r - ev);
}

inline ThetaStep theta_step(const SymMatrix& s, const SymMatrix& z, const SymMatrix& u,
                            double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("theta_update: rho must be > 0");
  SymMatrix::check_same_dim(s, z, "theta_update");
  SymMatrix::check_same_dim(s, u, "theta_update");
  const SymMatrix rhs(rho * (z.matrix() - u.matrix()) - s.matrix());
  const EigDecomposition eig = sym_eig(rhs);
  Eigen::VectorXd t(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = quadratic_root(eig.eigenvalues(i), rho);
  const Eigen::MatrixXd& q = eig.eigenvectors;
  return {SymMatrix(q * t.asDiagonal() * q.transpose()), std::move(t)};
}

}  // namespace detail

/// Minimizer of trace(S Theta) - log det Theta + rho/2 ||Theta - Z + U||_F^2.
/// Eigendecomposes rho(Z - U) - S = Q diag(ev) Q^T and returns
/// Q diag((ev + sqrt(ev^2 + 4 rho)) / (2 rho)) Q^T, which is always PD.
inline SymMatrix theta_update(const SymMatrix& s, const SymMatrix& z, const SymMatrix& u,
                              double rho) {
  return detail::theta_step(s, z, u, rho).theta;
}

/// Minimizer of lambda ||Z - Theta_b||_1 + rho/2 ||Theta - Z + U||_F^2:
/// Z = Theta_b + soft_threshold(Theta + U - Theta_b, lambda / rho).
inline SymMatrix z_update(const SymMatrix& theta, const SymMatrix& u, const SymMatrix& theta_b,
                          double lambda, double rho) {
  if (!(lambda >= 0.0)) throw InvalidArgument("z_update: lambda must be >= 0");
  if (!(rho > 0.0)) throw InvalidArgument("z_update: rho must be > 0");
  SymMatrix::check_same_dim(theta, u, "z_update");
  SymMatrix::check_same_dim(theta, theta_b, "z_update");
  const double kappa = lambda / rho;
  const Eigen::MatrixXd& t = theta.matrix();
  const Eigen::MatrixXd& uu = u.matrix();
  const Eigen::MatrixXd& b = theta_b.matrix();
  Eigen::MatrixXd z(t.rows(), t.cols());
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      z(i, j) = b(i, j) + soft_threshold(t(i, j) + uu(i, j) - b(i, j), kappa);
    }
  }
  return SymMatrix(std::move(z));
}

inline SymMatrix u_update(const SymMatrix& theta, const SymMatrix& z, const SymMatrix& u_prev) {
  SymMatrix::check_same_dim(theta, z, "u_update");
  SymMatrix::check_same_dim(theta, u_prev, "u_update");
  return SymMatrix(theta.matrix() - z.matrix() + u_prev.matrix());
}

/// Scale-aware stopping tolerances (eps_primal, eps_dual):
///   eps_primal = p eps_abs + eps_rel max(||Theta||_F, ||Z||_F)
///   eps_dual   = p eps_abs + eps_rel ||rho U||_F
inline std::pair<double, double> stopping_tolerances(const AdmmState& state,
                                                     const AdmmConfig& config, std::size_t p) {
  const double base = static_cast<double>(p) * config.eps_abs;
  const double eps_primal =
      base + config.eps_rel * std::max(frobenius_norm(state.theta), frobenius_norm(state.z));
  const double eps_dual = base + config.eps_rel * config.rho * frobenius_norm(state.u);
  return {eps_primal, eps_dual};
}

/// Runs ADMM from Theta = Z = U = 0 until both residuals are within their
/// tolerances or max_iterations is reached. Non-convergence is reported
/// through SolveReport::converged, not thrown.
inline SolveReport solve(const SymMatrix& s, const SymMatrix& theta_b, const AdmmConfig& config) {
  config.validate();
  SymMatrix::check_same_dim(s, theta_b, "solve");
  if (s.empty()) throw InvalidArgument("solve: empty covariance");
  const std::size_t p = s.dim();

  AdmmState state{SymMatrix::zero(p), SymMatrix::zero(p), SymMatrix::zero(p)};
  SolveReport report;
  report.residual_trace.reserve(static_cast<std::size_t>(std::min(config.max_iterations, 10000)));
  if (config.check_invariants) {
    report.max_stationarity_residual = 0.0;
    report.min_theta_eigenvalue = std::numeric_limits<double>::infinity();
  }

  for (int it = 1; it <= config.max_iterations; ++it) {
    detail::ThetaStep step = detail::theta_step(s, state.z, state.u, config.rho);

    if (config.check_invariants) {
      const double min_ev = step.spectrum.minCoeff();
      if (!(min_ev > 0.0)) {
        throw InvariantViolation("solve: Theta not positive definite at iteration " +
                                 std::to_string(it));
      }
      // Independent route: invert Theta by Cholesky, not by the eigenbasis.
      const Eigen::MatrixXd lhs =
          config.rho * step.theta.matrix() - inverse_spd(step.theta).matrix();
      const Eigen::MatrixXd rhs = config.rho * (state.z.matrix() - state.u.matrix()) - s.matrix();
      const double stationarity = max_abs(lhs - rhs);
      if (stationarity > 1e-8) {
        throw InvariantViolation("solve: stationarity residual " + std::to_string(stationarity) +
                                 " at iteration " + std::to_string(it));
      }
      report.max_stationarity_residual = std::max(report.max_stationarity_residual, stationarity);
      report.min_theta_eigenvalue = std::min(report.min_theta_eigenvalue, min_ev);
    }

    state.theta = std::move(step.theta);
    SymMatrix z_old = std::move(state.z);
    state.z = z_update(state.theta, state.u, theta_b, config.lambda, config.rho);
    state.u = u_update(state.theta, state.z, state.u);
    state.iteration = it;
    state.primal_residual = frobenius_norm(state.theta.matrix() - state.z.matrix());
    state.dual_residual = frobenius_norm(config.rho * (state.z.matrix() - z_old.matrix()));
    std::tie(state.eps_primal, state.eps_dual) = stopping_tolerances(state, config, p);

    report.residual_trace.push_back(
        {it, state.primal_residual, state.dual_residual, state.eps_primal, state.eps_dual});
    if (report.residual_trace.back().below_tolerance()) {
      report.converged = true;
      break;
    }
  }

  report.iterations = state.iteration;
  report.theta_hat = std::move(state.theta);
  report.z_hat = std::move(state.z);
  return report;
}

struct KktViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  /// Amount by which the optimality condition at (i, j) is exceeded.
  double excess = 0.0;
};

struct KktReport {
  bool satisfied = true;
  double max_excess = 0.0;
  std::vector<KktViolation> violations;
};

/// Subgradient optimality check for the contrastive objective, independent
/// of the ADMM iterates' internal state. With G = S - Theta^{-1}:
///   z_ij == b_ij  =>  |G_ij| <= lambda + tol
///   otherwise     =>  |G_ij + lambda sign(z_ij - b_ij)| <= tol
inline KktReport kkt_check(const SymMatrix& theta_hat, const SymMatrix& z_hat, const SymMatrix& s,
                           const SymMatrix& theta_b, double lambda, double tol = 1e-3) {
  SymMatrix::check_same_dim(theta_hat, z_hat, "kkt_check");
  SymMatrix::check_same_dim(theta_hat, s, "kkt_check");
  SymMatrix::check_same_dim(theta_hat, theta_b, "kkt_check");
  const Eigen::MatrixXd g = s.matrix() - inverse_spd(theta_hat).matrix();
  KktReport out;
  const std::size_t p = theta_hat.dim();
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = j; i < p; ++i) {
      const double d = z_hat(i, j) - theta_b(i, j);
      const double gij = g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const double excess = d == 0.0 ? std::abs(gij) - lambda
                                     : std::abs(gij + lambda * (d > 0.0 ? 1.0 : -1.0));
      out.max_excess = std::max(out.max_excess, excess);
      if (excess > tol) {
        out.satisfied = false;
        out.violations.push_back({i, j, excess});
      }
    }
  }
  return out;
}

}  // namespace csad
