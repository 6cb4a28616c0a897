#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>

// Reference implementations written independently of the library code.
namespace oracle {

struct LinearGaussian {
  Eigen::MatrixXd A, C, Q, R;
};

struct KalmanState {
  Eigen::VectorXd x;
  Eigen::MatrixXd P;
};

// Textbook predict/correct for x' = Ax + w, y = Cx + v.
inline KalmanState kalman_step(const KalmanState& s, const LinearGaussian& m,
                               const Eigen::VectorXd& y) {
  const Eigen::VectorXd xp = m.A * s.x;
  const Eigen::MatrixXd Pp = m.A * s.P * m.A.transpose() + m.Q;
  const Eigen::MatrixXd S = m.C * Pp * m.C.transpose() + m.R;
  const Eigen::MatrixXd K = Pp * m.C.transpose() * S.inverse();
  KalmanState out;
  out.x = xp + K * (y - m.C * xp);
  out.P = Pp - K * S * K.transpose();
  return out;
}

// Hamilton product written out component by component.
inline Eigen::Vector4d hamilton(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

// Rodrigues rotation about a unit axis.
inline Eigen::Matrix3d axis_angle(const Eigen::Vector3d& axis, double angle) {
  Eigen::Matrix3d K;
  K << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * K + (1 - std::cos(angle)) * K * K;
}

inline Eigen::Vector4d random_unit_quaternion(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  Eigen::Vector4d q(n(g), n(g), n(g), n(g));
  return q.normalized();
}

inline Eigen::MatrixXd random_spd(int n, std::mt19937_64& g, double shift = 0.1) {
  std::normal_distribution<double> d;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = d(g);
  return A * A.transpose() + shift * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace oracle
