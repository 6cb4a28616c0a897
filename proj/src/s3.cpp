#include "ukfse/s3.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ukfse {

Eigen::Matrix4d lambda_matrix(const Quaternion& q) {
  const double q0 = q.w(), q1 = q.x(), q2 = q.y(), q3 = q.z();
  Eigen::Matrix4d m;
  m << q0, -q1, -q2, -q3,
       q1, q0, -q3, q2,
       q2, q3, q0, -q1,
       q3, -q2, q1, q0;
  return m;
}

Eigen::Matrix3d rotation_matrix(const Quaternion& q) {
  const double q0 = q.w(), q1 = q.x(), q2 = q.y(), q3 = q.z();
  Eigen::Matrix3d a;
  a << q0 * q0 + q1 * q1 - q2 * q2 - q3 * q3, 2.0 * (q1 * q2 - q0 * q3), 2.0 * (q1 * q3 + q0 * q2),
       2.0 * (q1 * q2 + q0 * q3), q0 * q0 - q1 * q1 + q2 * q2 - q3 * q3, 2.0 * (q2 * q3 - q0 * q1),
       2.0 * (q1 * q3 - q0 * q2), 2.0 * (q2 * q3 + q0 * q1), q0 * q0 - q1 * q1 - q2 * q2 + q3 * q3;
  return a;
}

Quaternion quat_multiply(const Quaternion& a, const Quaternion& b) {
  return Quaternion(lambda_matrix(a) * b.coeffs());
}

Quaternion project_formula(const Quaternion& q) {
  const double n = q.norm();
  if (!(n > 1e-12)) throw GeometryError("project_formula: quaternion norm is (near) zero");
  return Quaternion(q.coeffs() / n);
}

ProjectionResult project_optimize(const Quaternion& q, double tol, int max_iter) {
  if (!(q.norm() > 1e-12)) throw GeometryError("project_optimize: quaternion norm is (near) zero");
  const Eigen::Vector4d target = q.coeffs();
  Eigen::Vector4d x = target;
  double mult = 0.0;

  // Lagrangian ‖x − q‖² + λ(‖x‖² − 1); the stationarity residual is divided by two.
  for (int iter = 0;; ++iter) {
    const Eigen::Vector4d stationarity = (x - target) + mult * x;
    const double constraint = x.squaredNorm() - 1.0;
    if (stationarity.norm() < tol && std::abs(constraint) < tol) return {Quaternion(x), iter};
    if (iter == max_iter) {
      std::ostringstream msg;
      msg << "project_optimize: no convergence after " << max_iter << " iterations (residuals "
          << stationarity.norm() << ", " << constraint << ")";
      throw GeometryError(msg.str());
    }
    Eigen::Matrix<double, 5, 5> J = Eigen::Matrix<double, 5, 5>::Zero();
    J.topLeftCorner<4, 4>() = (1.0 + mult) * Eigen::Matrix4d::Identity();
    J.topRightCorner<4, 1>() = x;
    J.bottomLeftCorner<1, 4>() = 2.0 * x.transpose();
    Eigen::Matrix<double, 5, 1> r;
    r << stationarity, constraint;
    const Eigen::Matrix<double, 5, 1> dz = J.partialPivLu().solve(-r);
    x += dz.head<4>();
    mult += dz(4);
  }
}

Eigen::Vector3d lie_log(const Quaternion& q) {
  const Eigen::Vector3d im = q.imag();
  const double s = im.norm();
  if (s == 0.0) {
    if (q.w() < 0.0) throw GeometryError("lie_log: -identity is outside the chart");
    return Eigen::Vector3d::Zero();
  }
  return std::atan2(s, q.w()) * im / s;
}

Quaternion lie_exp(const Eigen::Vector3d& v) {
  const double n = v.norm();
  if (n == 0.0) return Quaternion::identity();
  const Eigen::Vector3d im = std::sin(n) * v / n;
  return Quaternion(std::cos(n), im(0), im(1), im(2));
}

Eigen::Vector4d riem_log(const Quaternion& mu, const Quaternion& q) {
  const double c = std::clamp(q.coeffs().dot(mu.coeffs()), -1.0, 1.0);
  if (c <= -1.0 + 1e-9) throw GeometryError("riem_log: antipodal points");
  const double theta = std::acos(c);
  const double scale = theta == 0.0 ? 1.0 : theta / std::sin(theta);
  return (q.coeffs() - mu.coeffs() * c) * scale;
}

Quaternion riem_exp(const Quaternion& mu, const Eigen::Vector4d& u) {
  const double n = u.norm();
  if (n == 0.0) return mu;
  return Quaternion(mu.coeffs() * std::cos(n) + u * (std::sin(n) / n));
}

Eigen::Matrix<double, 4, 3> tangent_basis(const Quaternion& mu) {
  return lambda_matrix(mu).rightCols<3>();
}

double geodesic_distance(const Quaternion& p, const Quaternion& q) {
  return std::acos(std::clamp(p.coeffs().dot(q.coeffs()), -1.0, 1.0));
}

KarcherResult karcher_mean(std::span<const Quaternion> points, std::span<const double> weights,
                           double tol, int max_iter) {
  if (points.empty() || points.size() != weights.size()) {
    throw GeometryError("karcher_mean: need matching non-empty points and weights");
  }
  double wsum = 0.0;
  Eigen::Vector4d euclid = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < points.size(); ++i) {
    wsum += weights[i];
    euclid += weights[i] * points[i].coeffs();
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw GeometryError("karcher_mean: weights must sum to one");
  if (euclid.norm() < 1e-9) throw GeometryError("karcher_mean: degenerate initialisation");

  Quaternion mu(euclid.normalized());
  double residual = 0.0;
  for (int iter = 0; iter <= max_iter; ++iter) {
    Eigen::Vector4d step = Eigen::Vector4d::Zero();
    for (std::size_t i = 0; i < points.size(); ++i) step += weights[i] * riem_log(mu, points[i]);
    // log_mu(p) ⟂ mu for every p, so the step lies in T_mu S³ up to rounding.
    step -= mu.coeffs() * step.dot(mu.coeffs());
    residual = step.norm();
    if (residual < tol) return {mu, iter, residual};
    if (iter == max_iter) break;
    mu = Quaternion(riem_exp(mu, step).coeffs().normalized());
  }
  std::ostringstream msg;
  msg << "karcher_mean: no convergence after " << max_iter << " iterations (residual " << residual
      << ")";
  throw GeometryError(msg.str());
}

}  // namespace ukfse
