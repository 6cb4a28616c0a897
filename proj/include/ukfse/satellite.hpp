#pragma once

#include "ukfse/numerics.hpp"
#include "ukfse/s3.hpp"

#include <numbers>

namespace ukfse {

using StateVector = Eigen::Matrix<double, 7, 1>;  // (q_BO, Ω_BI)
using MeasurementVector = Eigen::Matrix<double, 6, 1>;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Small-satellite testbed parameters, SI units, angles in radians.
struct SatParams {
  Eigen::Vector3d inertia{2.1e-3, 2.0e-3, 1.9e-3};  // diagonal [kg m²]
  double sigma_omega_c = 0.01;                     // [rad/s]
  double mu_earth = 3.98601e14;                    // [m³/s²]
  double r0 = 6928140.0;                           // [m]
  double M_e = 7.943e15;                           // [Wb m]
  double epsilon = deg_to_rad(11.7);               // dipole tilt [rad]
  double inclination = deg_to_rad(97.0);           // [rad]
  double omega_e = 7.29e-5;                        // [rad/s]
  double sigma_mag_c = 200e-9;                     // [T]
  double sigma_rate_c = 1.84e-4;                   // [rad/s]
  double f_sample = 10.0;                          // [Hz]

  /// Orbital rate √(μ/r0³).
  double omega0() const;
  /// Throws std::invalid_argument if any parameter is non-positive.
  void validate() const;
};

struct SatState {
  Quaternion q;
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();  // Ω_BI

  StateVector to_vector() const;
  static SatState from_vector(const StateVector& x);
};

struct Measurement {
  Eigen::Vector3d mag = Eigen::Vector3d::Zero();   // body-frame field [T]
  Eigen::Vector3d gyro = Eigen::Vector3d::Zero();  // [rad/s]

  MeasurementVector stacked() const;
};

/// Ω_BO = Ω_BI + A_BO·(0, −ω₀, 0).
Eigen::Vector3d omega_bo(const SatState& s, const SatParams& p);

/// 3ω₀²·a × (𝕀a) with a the third column of A_BO.
Eigen::Vector3d gravity_torque(const Quaternion& q, const SatParams& p);

/// Deterministic drift (q̇, Ω̇) of the attitude dynamics. Valid off S³.
StateVector drift(const SatState& s, const SatParams& p);
StateVector drift(const StateVector& x, const SatParams& p);

/// Dipole field (H₁, H₂, H₃) in the orbit frame [T].
Eigen::Vector3d earth_field(double t, const SatParams& p);

/// Noise-free magnetometer and gyro readings.
Measurement measure(const SatState& s, double t, const SatParams& p);
/// Readings with N(0, σ²) sensor noise drawn from rng.
Measurement measure(const SatState& s, double t, const SatParams& p, Rng& rng);

/// diag(σ_mag²·I₃, σ_rate²·I₃), used directly as the discrete sensor noise.
Matrix measurement_noise_covariance(const SatParams& p);

}  // namespace ukfse
