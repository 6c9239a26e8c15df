#pragma once

// Dense symmetric linear algebra used by the estimator, simulator and
// evaluation layers. Everything here is a pure function of its arguments.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "csad/errors.hpp"

namespace csad {

/// Largest asymmetry |m(i,j) - m(j,i)| that construction silently repairs.
inline constexpr double kSymmetryTolerance = 1e-8;

/// Dense, exactly symmetric p x p matrix with finite entries.
///
/// Construction averages (m + m^T) / 2 when the input is within
/// kSymmetryTolerance of symmetric and rejects it otherwise, so every
/// SymMatrix compares equal to its own transpose bit for bit.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
      throw InvalidArgument("SymMatrix: matrix is " + std::to_string(m_.rows()) + "x" +
                            std::to_string(m_.cols()) + ", expected square");
    }
    if (!m_.allFinite()) throw InvalidArgument("SymMatrix: non-finite entry");
    const Eigen::Index p = m_.rows();
    for (Eigen::Index j = 0; j < p; ++j) {
      for (Eigen::Index i = j + 1; i < p; ++i) {
        const double a = m_(i, j);
        const double b = m_(j, i);
        if (a == b) continue;
        if (std::abs(a - b) > kSymmetryTolerance) {
          throw InvalidArgument("SymMatrix: asymmetry " + std::to_string(std::abs(a - b)) +
                                " at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        const double avg = 0.5 * (a + b);
        m_(i, j) = avg;
        m_(j, i) = avg;
      }
    }
  }

  static SymMatrix zero(std::size_t p) {
    return SymMatrix(Eigen::MatrixXd::Zero(as_index(p), as_index(p)));
  }
  static SymMatrix identity(std::size_t p) {
    return SymMatrix(Eigen::MatrixXd::Identity(as_index(p), as_index(p)));
  }
  static SymMatrix diagonal(const Eigen::VectorXd& d) {
    return SymMatrix(Eigen::MatrixXd(d.asDiagonal()));
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  bool empty() const noexcept { return m_.size() == 0; }

  double operator()(std::size_t i, std::size_t j) const { return m_(as_index(i), as_index(j)); }

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    check_same_dim(a, b, "operator+");
    return SymMatrix(a.m_ + b.m_);
  }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    check_same_dim(a, b, "operator-");
    return SymMatrix(a.m_ - b.m_);
  }
  friend SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.m_); }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

  static void check_same_dim(const SymMatrix& a, const SymMatrix& b, const char* what) {
    if (a.dim() != b.dim()) {
      throw InvalidArgument(std::string(what) + ": dimension mismatch " +
                            std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
  }

 private:
  static Eigen::Index as_index(std::size_t i) { return static_cast<Eigen::Index>(i); }

  Eigen::MatrixXd m_;
};

/// Eigenpairs of a symmetric matrix: eigenvalues ascending, column k of
/// `eigenvectors` paired with `eigenvalues[k]`.
struct EigDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

inline EigDecomposition sym_eig(const SymMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericFailure("sym_eig: eigensolver did not converge");
  }
  EigDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  if (!out.eigenvalues.allFinite() || !out.eigenvectors.allFinite()) {
    throw NumericFailure("sym_eig: non-finite eigenpair");
  }
  // Fix the sign of each eigenvector: its largest-magnitude component
  // (first one on ties) is made nonnegative.
  for (Eigen::Index k = 0; k < out.eigenvectors.cols(); ++k) {
    auto col = out.eigenvectors.col(k);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > best) {
        best = std::abs(col(i));
        arg = i;
      }
    }
    if (col(arg) < 0.0) col = -col;
  }
  return out;
}

inline double min_eigenvalue(const SymMatrix& m) {
  if (m.empty()) throw InvalidArgument("min_eigenvalue: empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericFailure("min_eigenvalue: eigensolver did not converge");
  }
  return solver.eigenvalues()(0);
}

/// Square lower-triangular matrix. Construction rejects nonzero entries
/// above the diagonal.
class LowerTriangular {
 public:
  LowerTriangular() = default;

  explicit LowerTriangular(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidArgument("LowerTriangular: matrix not square");
    for (Eigen::Index j = 1; j < m_.cols(); ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        if (m_(i, j) != 0.0) {
          throw InvalidArgument("LowerTriangular: nonzero entry above the diagonal at (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
    }
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Eigen::MatrixXd m_;
};

/// Cholesky factor L with L L^T = m and a strictly positive diagonal.
/// Throws PsdViolation carrying the index of the first non-positive pivot.
inline LowerTriangular cholesky(const SymMatrix& m) {
  const Eigen::Index p = static_cast<Eigen::Index>(m.dim());
  const Eigen::MatrixXd& a = m.matrix();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double pivot = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw PsdViolation(static_cast<std::size_t>(j), pivot);
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < p; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return LowerTriangular(std::move(l));
}

/// Forward substitution: returns x with L x = b.
inline Eigen::VectorXd solve_lower_triangular(const LowerTriangular& l, const Eigen::VectorXd& b) {
  const Eigen::MatrixXd& m = l.matrix();
  const Eigen::Index p = m.rows();
  if (b.size() != p) throw InvalidArgument("solve_lower_triangular: dimension mismatch");
  Eigen::VectorXd x(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (m(i, i) == 0.0) {
      throw SingularMatrix("solve_lower_triangular: zero diagonal at " + std::to_string(i));
    }
    double s = b(i);
    for (Eigen::Index k = 0; k < i; ++k) s -= m(i, k) * x(k);
    x(i) = s / m(i, i);
  }
  return x;
}

/// Back substitution against the transpose: returns x with L^T x = b.
inline Eigen::VectorXd solve_lower_transposed(const LowerTriangular& l, const Eigen::VectorXd& b) {
  const Eigen::MatrixXd& m = l.matrix();
  const Eigen::Index p = m.rows();
  if (b.size() != p) throw InvalidArgument("solve_lower_transposed: dimension mismatch");
  Eigen::VectorXd x(p);
  for (Eigen::Index i = p - 1; i >= 0; --i) {
    if (m(i, i) == 0.0) {
      throw SingularMatrix("solve_lower_transposed: zero diagonal at " + std::to_string(i));
    }
    double s = b(i);
    for (Eigen::Index k = i + 1; k < p; ++k) s -= m(k, i) * x(k);
    x(i) = s / m(i, i);
  }
  return x;
}

/// Inverse of a symmetric positive definite matrix through its Cholesky
/// factor. Non-PD input is reported as SingularMatrix.
inline SymMatrix inverse_spd(const SymMatrix& m) {
  LowerTriangular l;
  try {
    l = cholesky(m);
  } catch (const PsdViolation& e) {
    throw SingularMatrix(std::string("inverse_spd: ") + e.what());
  }
  const Eigen::Index p = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXd inv(p, p);
  for (Eigen::Index c = 0; c < p; ++c) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(p, c);
    inv.col(c) = solve_lower_transposed(l, solve_lower_triangular(l, e));
  }
  return SymMatrix(std::move(inv));
}

/// Proximal operator of kappa*|.|: sign(a) * max(|a| - kappa, 0).
/// Requires kappa >= 0.
constexpr double soft_threshold(double a, double kappa) noexcept {
  if (a > kappa) return a - kappa;
  if (a < -kappa) return a + kappa;
  return 0.0;
}

inline double frobenius_norm(const Eigen::MatrixXd& m) { return m.norm(); }
inline double frobenius_norm(const SymMatrix& m) { return m.matrix().norm(); }

inline double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace csad
