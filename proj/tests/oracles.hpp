#pragma once

// Test-only reference computations. These deliberately avoid the library's
// own code paths (no Cholesky, no eigensolver) so they can check it.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace csad::testing {

/// Gauss-Jordan inverse with partial pivoting.
inline Eigen::MatrixXd gauss_jordan_inverse(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    }
    if (a(piv, c) == 0.0) throw std::runtime_error("gauss_jordan_inverse: singular");
    a.row(c).swap(a.row(piv));
    inv.row(c).swap(inv.row(piv));
    const double d = a(c, c);
    a.row(c) /= d;
    inv.row(c) /= d;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      a.row(r) -= f * a.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

/// lambda ||Z - B||_1 + rho/2 ||Theta - Z + U||_F^2, summed entrywise.
inline double z_objective(const Eigen::MatrixXd& z, const Eigen::MatrixXd& theta,
                          const Eigen::MatrixXd& u, const Eigen::MatrixXd& b, double lambda,
                          double rho) {
  return lambda * (z - b).cwiseAbs().sum() + 0.5 * rho * (theta - z + u).squaredNorm();
}

/// Random symmetric matrix with entries uniform in [-scale, scale].
inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index p, double scale = 1.0) {
  std::uniform_real_distribution<double> unif(-scale, scale);
  Eigen::MatrixXd m(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      m(i, j) = unif(rng);
      m(j, i) = m(i, j);
    }
  }
  return m;
}

/// Well-conditioned SPD matrix A A^T + p I.
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index p) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(p, p);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  Eigen::MatrixXd m = a * a.transpose() + static_cast<double>(p) * Eigen::MatrixXd::Identity(p, p);
  return 0.5 * (m + m.transpose());
}

}  // namespace csad::testing
