#include "ukfse/ukf.hpp"

#include <cmath>
#include <sstream>

namespace ukfse {

double UkfParams::lambda(Eigen::Index L) const {
  const auto n = static_cast<double>(L);
  return gamma * gamma * (n + kappa) - n;
}

void UkfParams::validate(Eigen::Index L) const {
  if (!(gamma > 0.0)) throw NumericalError("UkfParams: gamma must be positive");
  if (static_cast<double>(L) + lambda(L) == 0.0) {
    throw NumericalError("UkfParams: L + lambda must be nonzero");
  }
}

Vector weighted_mean(const Matrix& points, const Vector& weights) {
  const Vector base = points.col(0);
  Vector offset = Vector::Zero(points.rows());
  for (Eigen::Index i = 1; i < points.cols(); ++i) {
    offset.noalias() += weights(i) * (points.col(i) - base);
  }
  // Σ w = 1, so the base point carries the remaining weight.
  return base + offset;
}

Matrix weighted_cross_covariance(const Matrix& A, const Vector& a_mean, const Matrix& B,
                                 const Vector& b_mean, const Vector& weights) {
  const Matrix dA = A.colwise() - a_mean;
  const Matrix dB = B.colwise() - b_mean;
  return dA * weights.asDiagonal() * dB.transpose();
}

SigmaPointSet generate_sigma_points(const UkfEstimate& est, const Matrix& P_w, const Matrix& P_v,
                                    const UkfParams& params) {
  const Eigen::Index n_x = est.x.size();
  const Eigen::Index n_w = P_w.rows();
  const Eigen::Index n_v = P_v.rows();
  if (est.P.rows() != n_x || est.P.cols() != n_x || P_w.cols() != n_w || P_v.cols() != n_v) {
    throw NumericalError("generate_sigma_points: inconsistent dimensions");
  }
  const Eigen::Index L = n_x + n_w + n_v;
  params.validate(L);
  const double lambda = params.lambda(L);
  const double spread = static_cast<double>(L) + lambda;
  if (!(spread > 0.0)) {
    throw NumericalError("generate_sigma_points: L + lambda must be positive for real spread");
  }

  Matrix Pa = Matrix::Zero(L, L);
  Pa.block(0, 0, n_x, n_x) = est.P;
  Pa.block(n_x, n_x, n_w, n_w) = P_w;
  Pa.block(n_x + n_w, n_x + n_w, n_v, n_v) = P_v;

  Matrix S;
  try {
    S = cholesky_sqrt(Pa);
  } catch (const NumericalError&) {
    S = cholesky_sqrt(Pa + 1e-12 * Matrix::Identity(L, L));
  }
  S *= std::sqrt(spread);

  Vector xa = Vector::Zero(L);
  xa.head(n_x) = est.x;

  SigmaPointSet sp;
  sp.n_x = n_x;
  sp.n_w = n_w;
  sp.n_v = n_v;
  sp.points.resize(L, 2 * L + 1);
  sp.points.col(0) = xa;
  for (Eigen::Index i = 0; i < L; ++i) {
    sp.points.col(1 + i) = xa + S.col(i);
    sp.points.col(1 + L + i) = xa - S.col(i);
  }

  const double w_i = 1.0 / (2.0 * spread);
  sp.weights_mean = Vector::Constant(2 * L + 1, w_i);
  sp.weights_cov = Vector::Constant(2 * L + 1, w_i);
  sp.weights_mean(0) = lambda / spread;
  sp.weights_cov(0) = lambda / spread + (1.0 - params.gamma * params.gamma + params.beta);
  return sp;
}

Prediction time_update(const SigmaPointSet& sp, const SystemCallbacks& sys, const Vector& u) {
  if (sp.n_x != sys.n_x || sp.n_w != sys.n_w || sp.n_v != sys.n_v) {
    throw NumericalError("time_update: sigma set does not match system dimensions");
  }
  const Eigen::Index n = sp.size();
  Prediction pred;
  pred.X.resize(sys.n_x, n);
  pred.Y.resize(sys.n_y, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vector xi = sys.f(sp.x_part(i), u, sp.w_part(i));
    if (xi.size() != sys.n_x || !xi.allFinite()) {
      std::ostringstream msg;
      msg << "time_update: process model returned invalid output at sigma point " << i;
      throw NumericalError(msg.str());
    }
    pred.X.col(i) = xi;
    Vector yi = sys.g(xi, u, sp.v_part(i));
    if (yi.size() != sys.n_y || !yi.allFinite()) {
      std::ostringstream msg;
      msg << "time_update: measurement model returned invalid output at sigma point " << i;
      throw NumericalError(msg.str());
    }
    pred.Y.col(i) = yi;
  }
  pred.weights_mean = sp.weights_mean;
  pred.weights_cov = sp.weights_cov;
  pred.x_pred = weighted_mean(pred.X, sp.weights_mean);
  pred.y_pred = weighted_mean(pred.Y, sp.weights_mean);
  pred.P_pred = symmetrize(
      weighted_cross_covariance(pred.X, pred.x_pred, pred.X, pred.x_pred, sp.weights_cov));
  return pred;
}

UkfEstimate measurement_update(const Prediction& pred, const Vector& y) {
  if (y.size() != pred.y_pred.size()) {
    throw NumericalError("measurement_update: measurement dimension mismatch");
  }
  const Matrix P_yy = symmetrize(
      weighted_cross_covariance(pred.Y, pred.y_pred, pred.Y, pred.y_pred, pred.weights_cov));
  const Matrix P_xy =
      weighted_cross_covariance(pred.X, pred.x_pred, pred.Y, pred.y_pred, pred.weights_cov);

  Eigen::LLT<Matrix> llt(P_yy);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("measurement_update: innovation covariance is not positive definite");
  }
  const double rcond = llt.rcond();
  if (!(rcond >= 1e-14)) {
    std::ostringstream msg;
    msg << "measurement_update: innovation covariance is singular (rcond " << rcond << ")";
    throw NumericalError(msg.str());
  }
  // K = P_xy P_yy⁻¹  ⇔  P_yy Kᵀ = P_xyᵀ
  const Matrix K = llt.solve(P_xy.transpose()).transpose();

  UkfEstimate out;
  out.x = pred.x_pred + K * (y - pred.y_pred);
  out.P = symmetrize(pred.P_pred - K * P_yy * K.transpose());
  return out;
}

UkfEstimate ukf_step(const UkfEstimate& est, const SystemCallbacks& sys, const Vector& u,
                     const Vector& y, const Matrix& P_w, const Matrix& P_v,
                     const UkfParams& params) {
  const SigmaPointSet sp = generate_sigma_points(est, P_w, P_v, params);
  const Prediction pred = time_update(sp, sys, u);
  return measurement_update(pred, y);
}

}  // namespace ukfse
