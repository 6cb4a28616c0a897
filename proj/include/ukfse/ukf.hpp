#pragma once

#include "ukfse/numerics.hpp"

#include <functional>

namespace ukfse {

/// Scaling parameters of the unscented transform. `gamma` is the spread
/// scale (often written α elsewhere).
struct UkfParams {
  double gamma = 0.01;
  double kappa = 0.0;
  double beta = 2.0;

  double lambda(Eigen::Index L) const;
  /// Throws NumericalError if gamma ≤ 0 or L + lambda == 0.
  void validate(Eigen::Index L) const;
};

struct SigmaPointSet {
  Matrix points;  // L × (2L+1), one augmented point per column
  Vector weights_mean;
  Vector weights_cov;
  Eigen::Index n_x = 0;
  Eigen::Index n_w = 0;
  Eigen::Index n_v = 0;

  Eigen::Index size() const { return points.cols(); }
  auto x_part(Eigen::Index i) const { return points.col(i).segment(0, n_x); }
  auto w_part(Eigen::Index i) const { return points.col(i).segment(n_x, n_w); }
  auto v_part(Eigen::Index i) const { return points.col(i).segment(n_x + n_w, n_v); }
};

struct UkfEstimate {
  Vector x;
  Matrix P;
};

/// Discrete-time system x' = f(x, u, w), y = g(x, u, v). Callbacks must be pure.
struct SystemCallbacks {
  std::function<Vector(const Vector& x, const Vector& u, const Vector& w)> f;
  std::function<Vector(const Vector& x, const Vector& u, const Vector& v)> g;
  Eigen::Index n_x = 0;
  Eigen::Index n_u = 0;
  Eigen::Index n_y = 0;
  Eigen::Index n_w = 0;
  Eigen::Index n_v = 0;
};

/// Output of the time update: predicted moments plus the propagated sigma
/// points (columns of X) and their predicted measurements (columns of Y).
struct Prediction {
  Vector x_pred;
  Matrix P_pred;
  Vector y_pred;
  Matrix X;
  Matrix Y;
  Vector weights_mean;
  Vector weights_cov;
};

SigmaPointSet generate_sigma_points(const UkfEstimate& est, const Matrix& P_w, const Matrix& P_v,
                                    const UkfParams& params);

Prediction time_update(const SigmaPointSet& sp, const SystemCallbacks& sys, const Vector& u);

UkfEstimate measurement_update(const Prediction& pred, const Vector& y);

UkfEstimate ukf_step(const UkfEstimate& est, const SystemCallbacks& sys, const Vector& u,
                     const Vector& y, const Matrix& P_w, const Matrix& P_v,
                     const UkfParams& params);

// Weighted moments over the columns of a point matrix. The mean is
// accumulated as offsets from column 0, which keeps it accurate when the
// weights are large and of mixed sign.
Vector weighted_mean(const Matrix& points, const Vector& weights);
Matrix weighted_cross_covariance(const Matrix& A, const Vector& a_mean, const Matrix& B,
                                 const Vector& b_mean, const Vector& weights);

}  // namespace ukfse
