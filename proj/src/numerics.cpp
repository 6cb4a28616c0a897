#include "ukfse/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ukfse {

namespace {

// Cholesky that accepts zero pivots. Returns false on a pivot below -tol
// unless `force` is set, in which case negative pivots are treated as zero.
bool semidefinite_cholesky(const Matrix& A, Matrix& L, bool force) {
  const Eigen::Index n = A.rows();
  L.setZero(n, n);
  const double scale = n > 0 ? A.diagonal().cwiseAbs().maxCoeff() : 0.0;
  const double tol = 1e-14 * scale;
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = A(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (d > tol) {
      const double ljj = std::sqrt(d);
      L(j, j) = ljj;
      for (Eigen::Index i = j + 1; i < n; ++i) {
        double s = A(i, j);
        for (Eigen::Index k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
        L(i, j) = s / ljj;
      }
    } else if (d < -tol && !force) {
      return false;
    }
    // zero pivot: column j stays zero
  }
  return true;
}

}  // namespace

bool is_symmetric(const Matrix& P, double rel_tol) {
  if (P.rows() != P.cols()) return false;
  if (P.size() == 0) return true;
  const double scale = P.cwiseAbs().maxCoeff();
  return (P - P.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Matrix symmetrize(const Matrix& P) {
  if (P.rows() != P.cols()) throw NumericalError("symmetrize: matrix is not square");
  return 0.5 * (P + P.transpose());
}

Matrix cholesky_sqrt(const Matrix& P) {
  if (P.rows() != P.cols()) throw NumericalError("cholesky_sqrt: matrix is not square");
  if (!P.allFinite()) throw NumericalError("cholesky_sqrt: non-finite entries");
  if (!is_symmetric(P)) {
    std::ostringstream msg;
    msg << "cholesky_sqrt: matrix asymmetric beyond tolerance (max |P - P^T| = "
        << (P - P.transpose()).cwiseAbs().maxCoeff() << ")";
    throw NumericalError(msg.str());
  }
  const Matrix A = symmetrize(P);
  Matrix L;
  if (semidefinite_cholesky(A, L, false)) return L;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < kEigenvalueFloor) {
    std::ostringstream msg;
    msg << "cholesky_sqrt: covariance has eigenvalue " << min_eig << " below floor "
        << kEigenvalueFloor;
    throw NumericalError(msg.str());
  }
  const Vector clamped = eig.eigenvalues().cwiseMax(0.0);
  const Matrix repaired =
      symmetrize(eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose());
  semidefinite_cholesky(repaired, L, true);
  return L;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::for_stream(std::uint64_t master_seed, std::uint64_t stream) {
  return Rng(splitmix64(master_seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

double Rng::normal() { return normal_(engine_); }

double Rng::uniform() { return uniform_(engine_); }

Vector Rng::standard_normal(Eigen::Index n) {
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal();
  return z;
}

Vector sample_gaussian(const Vector& mean, const Matrix& cov, Rng& rng) {
  if (mean.size() != cov.rows()) {
    throw NumericalError("sample_gaussian: mean and covariance dimensions differ");
  }
  const Matrix S = cholesky_sqrt(cov);
  return mean + S * rng.standard_normal(mean.size());
}

}  // namespace ukfse
