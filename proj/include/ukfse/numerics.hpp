#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>

namespace ukfse {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a covariance or linear system is unusable (asymmetric,
/// indefinite beyond the floor, singular).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative asymmetry tolerated in a covariance matrix.
inline constexpr double kSymmetryTolerance = 1e-12;
/// Eigenvalues in [kEigenvalueFloor, 0) are clamped to zero.
inline constexpr double kEigenvalueFloor = -1e-10;

bool is_symmetric(const Matrix& P, double rel_tol = kSymmetryTolerance);

/// (P + Pᵀ)/2.
Matrix symmetrize(const Matrix& P);

/**
 * Lower-triangular S with S·Sᵀ = P for a symmetric positive semidefinite P.
 *
 * Zero pivots are tolerated (rank-deficient covariances produce zero
 * columns). If the direct factorization hits a negative pivot, the
 * spectrum is inspected: eigenvalues down to kEigenvalueFloor are clamped to
 * zero and the factorization is repeated; anything more negative throws.
 */
Matrix cholesky_sqrt(const Matrix& P);

/// 64-bit mixing function used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seeded Gaussian/uniform source. Not shared between threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Stream `stream` of `master_seed`; distinct streams are independent of
  /// the order in which they are created.
  static Rng for_stream(std::uint64_t master_seed, std::uint64_t stream);

  double normal();
  double uniform();  // [0, 1)
  Vector standard_normal(Eigen::Index n);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// mean + cholesky_sqrt(cov)·z with z ~ N(0, I).
Vector sample_gaussian(const Vector& mean, const Matrix& cov, Rng& rng);

}  // namespace ukfse
