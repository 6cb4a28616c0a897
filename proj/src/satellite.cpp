#include "ukfse/satellite.hpp"

#include <cmath>
#include <stdexcept>

namespace ukfse {

double SatParams::omega0() const { return std::sqrt(mu_earth / (r0 * r0 * r0)); }

void SatParams::validate() const {
  const bool ok = (inertia.array() > 0.0).all() && sigma_omega_c > 0.0 && mu_earth > 0.0 &&
                  r0 > 0.0 && M_e > 0.0 && epsilon > 0.0 && inclination > 0.0 &&
                  omega_e > 0.0 && sigma_mag_c > 0.0 && sigma_rate_c > 0.0 && f_sample > 0.0;
  if (!ok) throw std::invalid_argument("SatParams: all parameters must be positive");
}

StateVector SatState::to_vector() const {
  StateVector x;
  x << q.coeffs(), omega;
  return x;
}

SatState SatState::from_vector(const StateVector& x) {
  return {Quaternion(Eigen::Vector4d(x.head<4>())), x.tail<3>()};
}

MeasurementVector Measurement::stacked() const {
  MeasurementVector y;
  y << mag, gyro;
  return y;
}

Eigen::Vector3d omega_bo(const SatState& s, const SatParams& p) {
  return s.omega + rotation_matrix(s.q) * Eigen::Vector3d(0.0, -p.omega0(), 0.0);
}

Eigen::Vector3d gravity_torque(const Quaternion& q, const SatParams& p) {
  const double w0 = p.omega0();
  const Eigen::Vector3d a = rotation_matrix(q).col(2);
  return 3.0 * w0 * w0 * a.cross(p.inertia.cwiseProduct(a));
}

StateVector drift(const SatState& s, const SatParams& p) {
  const Eigen::Vector3d w_bo = omega_bo(s, p);
  const Eigen::Vector4d pure(0.0, w_bo(0), w_bo(1), w_bo(2));
  const Eigen::Vector3d I_omega = p.inertia.cwiseProduct(s.omega);
  const Eigen::Vector3d omega_dot =
      (I_omega.cross(s.omega) + gravity_torque(s.q, p)).cwiseQuotient(p.inertia);
  StateVector dx;
  dx << 0.5 * lambda_matrix(s.q) * pure, omega_dot;
  return dx;
}

StateVector drift(const StateVector& x, const SatParams& p) {
  return drift(SatState::from_vector(x), p);
}

Eigen::Vector3d earth_field(double t, const SatParams& p) {
  const double k = p.M_e / (p.r0 * p.r0 * p.r0);
  const double ce = std::cos(p.epsilon), se = std::sin(p.epsilon);
  const double ci = std::cos(p.inclination), si = std::sin(p.inclination);
  const double c0 = std::cos(p.omega0() * t), s0 = std::sin(p.omega0() * t);
  const double cE = std::cos(p.omega_e * t), sE = std::sin(p.omega_e * t);
  const double inner = ce * si - se * ci * cE;
  // H3 follows the published form, including the sin(ω₀t) in its second term.
  return {k * (c0 * inner - s0 * se * sE),
          -k * (ce * ci + se * si * cE),
          2.0 * k * (s0 * inner - 2.0 * s0 * se * sE)};
}

Measurement measure(const SatState& s, double t, const SatParams& p) {
  return {rotation_matrix(s.q) * earth_field(t, p), s.omega};
}

Measurement measure(const SatState& s, double t, const SatParams& p, Rng& rng) {
  Measurement m = measure(s, t, p);
  for (int i = 0; i < 3; ++i) m.mag(i) += p.sigma_mag_c * rng.normal();
  for (int i = 0; i < 3; ++i) m.gyro(i) += p.sigma_rate_c * rng.normal();
  return m;
}

Matrix measurement_noise_covariance(const SatParams& p) {
  Matrix R = Matrix::Zero(6, 6);
  R.diagonal().head<3>().setConstant(p.sigma_mag_c * p.sigma_mag_c);
  R.diagonal().tail<3>().setConstant(p.sigma_rate_c * p.sigma_rate_c);
  return R;
}

}  // namespace ukfse
