#include "ukfse/embedding.hpp"

#include <stdexcept>

namespace ukfse {

StateVector StableEmbedding::embed(const StateVector& f_e, const StateVector& x) const {
  return f_e - alpha * gradient(x);
}

StableEmbedding StableEmbedding::unit_quaternion(double alpha) {
  return {alpha, [](const StateVector& x) { return v_value(x); },
          [](const StateVector& x) { return v_gradient(x); }};
}

double v_value(const StateVector& x) {
  const double e = x.head<4>().squaredNorm() - 1.0;
  return 0.25 * e * e;
}

StateVector v_gradient(const StateVector& x) {
  StateVector g = StateVector::Zero();
  g.head<4>() = (x.head<4>().squaredNorm() - 1.0) * x.head<4>();
  return g;
}

StateVector se_drift(const StateVector& x, const SatParams& p, double alpha) {
  return drift(x, p) - alpha * v_gradient(x);
}

StateVector euler_step(const StateVector& x, double h, double alpha, const SatParams& p,
                       const StateVector& w) {
  return x + h * se_drift(x, p, alpha) + w;
}

DiscreteNoise discretize_noise(const Matrix& P_w_cont, const Matrix& P_v_cont, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("discretize_noise: h must be positive");
  return {h * P_w_cont, P_v_cont / h};
}

Matrix satellite_process_noise(double h, const SatParams& p) {
  Matrix P = Matrix::Zero(7, 7);
  P.diagonal().head<4>().setConstant(1e-8);
  P.diagonal().tail<3>().setConstant(h * p.sigma_omega_c * p.sigma_omega_c);
  return P;
}

DiscretizedSystem DiscretizedSystem::satellite(const SatParams& p, double h, double alpha,
                                               bool rescale_measurement_noise) {
  if (!(h > 0.0)) throw std::invalid_argument("DiscretizedSystem: h must be positive");
  DiscretizedSystem sys;
  sys.h = h;
  sys.alpha = alpha;
  sys.sat = p;
  sys.P_w_discrete = satellite_process_noise(h, p);
  sys.P_v_discrete = measurement_noise_covariance(p);
  if (rescale_measurement_noise) sys.P_v_discrete /= h;
  return sys;
}

}  // namespace ukfse
