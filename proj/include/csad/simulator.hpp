#pragma once

// Synthetic Gaussian graphical model scenarios: a sparse PD background
// precision, a sparse PSD change, their sum as the foreground precision, and
// zero-mean Gaussian samples drawn from either.
//
// Random streams: every matrix or dataset draws from its own Mersenne
// Twister (mt19937_64) seeded with substream_seed(seed, stream). Boost.Random
// distributions are used because their output, unlike <random>'s, is fixed
// across standard library implementations.

#include <Eigen/Dense>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <cstddef>
#include <cstdint>

#include "csad/dataset.hpp"
#include "csad/edges.hpp"
#include "csad/errors.hpp"
#include "csad/numerics.hpp"

namespace csad {

inline constexpr double kDefaultMinEig = 0.1;
inline constexpr double kMinEdgeMagnitude = 0.2;
inline constexpr double kMaxEdgeMagnitude = 1.0;

/// Fixed stream ids used by make_scenario and the simulate command.
enum class Stream : std::uint64_t {
  background_precision = 1,
  change_precision = 2,
  background_samples = 3,
  foreground_samples = 4,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of substream `stream` derived from a master seed.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x5851F42D4C957F2DULL));
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, Stream stream) noexcept {
  return substream_seed(seed, static_cast<std::uint64_t>(stream));
}

using Engine = boost::random::mt19937_64;

namespace detail {

// Erdos-Renyi off-diagonal pattern with magnitudes uniform in [0.2, 1] and
// random sign; zero diagonal. Three draws per pair regardless of the
// outcome keep the stream aligned across densities.
inline Eigen::MatrixXd sparse_offdiagonal(std::size_t p, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) {
    throw InvalidArgument("sparse matrix generation: density must lie in [0, 1]");
  }
  Engine engine(mix64(seed));
  boost::random::uniform_01<double> unit;
  const auto n = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double coin = unit(engine);
      const double mag = kMinEdgeMagnitude + (kMaxEdgeMagnitude - kMinEdgeMagnitude) * unit(engine);
      const double sign = unit(engine) < 0.5 ? -1.0 : 1.0;
      if (coin < density) {
        m(i, j) = sign * mag;
        m(j, i) = sign * mag;
      }
    }
  }
  return m;
}

}  // namespace detail

/// Symmetric matrix whose off-diagonal support is Erdos-Renyi with edge
/// probability `density` and magnitudes uniform in [0.2, 1] with random
/// sign, shifted by (|lambda_min| + min_eig) I when lambda_min < min_eig.
inline SymMatrix gen_sparse_pd(std::size_t p, double density, std::uint64_t seed,
                               double min_eig = kDefaultMinEig) {
  if (p < 1) throw InvalidArgument("gen_sparse_pd: p must be >= 1");
  if (!(min_eig > 0.0)) throw InvalidArgument("gen_sparse_pd: min_eig must be > 0");
  Eigen::MatrixXd m = detail::sparse_offdiagonal(p, density, seed);
  const double lmin = min_eigenvalue(SymMatrix(m));
  if (lmin < min_eig) m.diagonal().array() += std::abs(lmin) + min_eig;
  return SymMatrix(std::move(m));
}

/// Sparse PSD structural change against `p_b`: new edges only, drawn like
/// gen_sparse_pd's but on pairs where p_b has no edge, and a diagonal equal
/// to each row's absolute off-diagonal sum. The matrix is diagonally
/// dominant, hence PSD, and nodes without a new edge are left untouched.
inline SymMatrix gen_sparse_change(const SymMatrix& p_b, double density, std::uint64_t seed) {
  const std::size_t p = p_b.dim();
  if (p < 1) throw InvalidArgument("gen_sparse_change: empty background");
  Eigen::MatrixXd m = detail::sparse_offdiagonal(p, density, seed);
  const Eigen::MatrixXd& b = p_b.matrix();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && b(i, j) != 0.0) m(i, j) = 0.0;
    }
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) = m.row(i).cwiseAbs().sum();
  return SymMatrix(std::move(m));
}

/// P_b + P_delta, rejected unless the sum is positive definite.
inline SymMatrix compose_foreground(const SymMatrix& p_b, const SymMatrix& p_delta) {
  SymMatrix::check_same_dim(p_b, p_delta, "compose_foreground");
  SymMatrix sum = p_b + p_delta;
  cholesky(sum);  // throws PsdViolation
  return sum;
}

/// n draws from N(0, precision^{-1}). With precision = L L^T each row is
/// L^{-T} z for z standard normal, so the covariance is never formed.
inline Dataset sample_mvn(const SymMatrix& precision, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample_mvn: n must be >= 1");
  const LowerTriangular l = cholesky(precision);
  const auto p = static_cast<Eigen::Index>(precision.dim());
  Engine engine(mix64(seed));
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), p);
  Eigen::VectorXd z(p);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index k = 0; k < p; ++k) z(k) = normal(engine);
    x.row(r) = solve_lower_transposed(l, z).transpose();
  }
  return Dataset(std::move(x));
}

struct GgmScenario {
  std::size_t p = 0;
  double bg_density = 0.0;
  double delta_density = 0.0;
  SymMatrix p_b;
  SymMatrix p_delta;
  SymMatrix p_f;
  EdgeSet true_change_edges;
  std::uint64_t seed = 0;
};

/// Background, change and foreground precisions for one seed.
inline GgmScenario make_scenario(std::size_t p, double bg_density, double delta_density,
                                 std::uint64_t seed, double min_eig = kDefaultMinEig) {
  if (p < 2) throw InvalidArgument("make_scenario: p must be >= 2");
  GgmScenario sc;
  sc.p = p;
  sc.bg_density = bg_density;
  sc.delta_density = delta_density;
  sc.seed = seed;
  sc.p_b = gen_sparse_pd(p, bg_density, substream_seed(seed, Stream::background_precision),
                         min_eig);
  sc.p_delta =
      gen_sparse_change(sc.p_b, delta_density, substream_seed(seed, Stream::change_precision));
  sc.p_f = compose_foreground(sc.p_b, sc.p_delta);
  sc.true_change_edges = edge_set(sc.p_delta, 0.0);
  return sc;
}

}  // namespace csad
