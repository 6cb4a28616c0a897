#include "ukfse/monte_carlo.hpp"

#include <cmath>

namespace ukfse {

namespace {

StateVector rk4_increment(const StateVector& x, double dt, const SatParams& p) {
  const StateVector k1 = drift(x, p);
  const StateVector k2 = drift(StateVector(x + 0.5 * dt * k1), p);
  const StateVector k3 = drift(StateVector(x + 0.5 * dt * k2), p);
  const StateVector k4 = drift(StateVector(x + dt * k3), p);
  return dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

SatState sample_initial_state(const SimConfig& cfg, Rng& rng) {
  Vector mean(7);
  mean << cfg.q0_mean, cfg.omega0_mean;
  Matrix P0 = Matrix::Zero(7, 7);
  P0.diagonal().head<4>().setConstant(cfg.q0_variance);
  P0.diagonal().tail<3>().setConstant(cfg.omega0_variance_truth);
  const Vector x = sample_gaussian(mean, P0, rng);
  SatState s = SatState::from_vector(x);
  s.q = project_formula(s.q);
  return s;
}

Trajectory generate_truth_from(const SimConfig& cfg, const SatState& x0, Rng& rng) {
  const std::int64_t n = cfg.n_steps();
  const std::int64_t sub = cfg.substeps();
  const double h = cfg.h_filter();
  const double dt = h / static_cast<double>(sub);
  const double noise_scale = (cfg.noise_free || !cfg.truth_process_noise) ? 0.0 : cfg.sat.sigma_omega_c * std::sqrt(dt);

  Trajectory traj;
  traj.t.reserve(static_cast<std::size_t>(n + 1));
  traj.states.reserve(static_cast<std::size_t>(n + 1));
  traj.measurements.reserve(static_cast<std::size_t>(n + 1));

  auto record = [&](std::int64_t k, const StateVector& x) {
    const double t = static_cast<double>(k) * h;
    const SatState s = SatState::from_vector(x);
    traj.t.push_back(t);
    traj.states.push_back(s);
    traj.measurements.push_back(cfg.noise_free ? measure(s, t, cfg.sat)
                                               : measure(s, t, cfg.sat, rng));
  };

  StateVector x = x0.to_vector();
  record(0, x);
  for (std::int64_t k = 1; k <= n; ++k) {
    for (std::int64_t j = 0; j < sub; ++j) {
      if (cfg.truth_integrator == TruthIntegrator::Rk4) {
        x += rk4_increment(x, dt, cfg.sat);
      } else {
        x += dt * drift(x, cfg.sat);
      }
      if (noise_scale > 0.0) {
        for (int i = 4; i < 7; ++i) x(i) += noise_scale * rng.normal();
      }
      x.head<4>().normalize();
    }
    record(k, x);
  }
  return traj;
}

Trajectory generate_truth(const SimConfig& cfg, std::int64_t run_index) {
  Rng rng = Rng::for_stream(cfg.master_seed, static_cast<std::uint64_t>(run_index));
  SatState x0;
  if (cfg.noise_free) {
    x0 = {project_formula(Quaternion(cfg.q0_mean)), cfg.omega0_mean};
  } else {
    x0 = sample_initial_state(cfg, rng);
  }
  return generate_truth_from(cfg, x0, rng);
}

}  // namespace ukfse
