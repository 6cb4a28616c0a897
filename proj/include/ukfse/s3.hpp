#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>

namespace ukfse {

/// Raised when an S³ map is evaluated at a singular or invalid point.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quaternion (w, x, y, z), scalar part first. Unit norm is not enforced.
class Quaternion {
 public:
  Quaternion() : c_(1.0, 0.0, 0.0, 0.0) {}
  Quaternion(double w, double x, double y, double z) : c_(w, x, y, z) {}
  explicit Quaternion(const Eigen::Vector4d& c) : c_(c) {}

  static Quaternion identity() { return {}; }

  double w() const { return c_(0); }
  double x() const { return c_(1); }
  double y() const { return c_(2); }
  double z() const { return c_(3); }

  const Eigen::Vector4d& coeffs() const { return c_; }
  Eigen::Vector3d imag() const { return c_.tail<3>(); }
  double norm() const { return c_.norm(); }
  double squared_norm() const { return c_.squaredNorm(); }

 private:
  Eigen::Vector4d c_;
};

/// Left-multiplication matrix: Λ(q)·p = q ⊗ p.
Eigen::Matrix4d lambda_matrix(const Quaternion& q);

/// Rotation matrix of q, evaluated by the quadratic formula even off S³
/// (it then scales by ‖q‖²).
Eigen::Matrix3d rotation_matrix(const Quaternion& q);

/// Hamilton product a ⊗ b.
Quaternion quat_multiply(const Quaternion& a, const Quaternion& b);
inline Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return quat_multiply(a, b);
}

/// q / ‖q‖. Throws GeometryError if ‖q‖ ≤ 1e-12.
Quaternion project_formula(const Quaternion& q);

struct ProjectionResult {
  Quaternion q;
  int iterations = 0;
};

/**
 * Projection onto S³ by solving the first-order conditions of
 * min ‖x − q‖² s.t. ‖x‖² = 1 with Newton's method on (x, multiplier),
 * starting from (q, 0). Stops when both the constraint and stationarity
 * residuals fall below `tol`; throws GeometryError after `max_iter`.
 */
ProjectionResult project_optimize(const Quaternion& q, double tol = 1e-10, int max_iter = 50);

/// Lie-algebra chart at the identity: atan2(‖q_imag‖, q_real)·q_imag/‖q_imag‖.
/// Throws GeometryError at q = −identity.
Eigen::Vector3d lie_log(const Quaternion& q);

/// cos‖v‖ + sin‖v‖·v/‖v‖ with v read as a pure imaginary quaternion.
Quaternion lie_exp(const Eigen::Vector3d& v);

/// Riemannian logarithm on S³ at base point mu; result is orthogonal to mu.
/// Throws GeometryError for (near-)antipodal pairs.
Eigen::Vector4d riem_log(const Quaternion& mu, const Quaternion& q);

/// Riemannian exponential on S³ at base point mu.
Quaternion riem_exp(const Quaternion& mu, const Eigen::Vector4d& u);

/// Orthonormal basis of T_mu S³ given by mu ⊗ i, mu ⊗ j, mu ⊗ k (columns).
Eigen::Matrix<double, 4, 3> tangent_basis(const Quaternion& mu);

struct KarcherResult {
  Quaternion mean;
  int iterations = 0;
  double residual = 0.0;
};

/**
 * Weighted intrinsic mean on S³ by the fixed-point iteration
 * mu ← exp_mu(Σ wᵢ log_mu(pᵢ)), initialised at the normalised weighted
 * Euclidean mean. Signed weights are accepted; they must sum to one.
 * Throws GeometryError on degenerate initialisation or non-convergence.
 */
KarcherResult karcher_mean(std::span<const Quaternion> points, std::span<const double> weights,
                           double tol = 1e-12, int max_iter = 100);

/// Geodesic distance arccos(⟨p, q⟩) with the argument clamped to [−1, 1].
double geodesic_distance(const Quaternion& p, const Quaternion& q);

}  // namespace ukfse
