#pragma once

#include "ukfse/satellite.hpp"

#include <functional>

namespace ukfse {

/// A constraint function V ≥ 0 vanishing exactly on the manifold, with its
/// gradient, and the gain α of the −α∇V correction added to the drift.
struct StableEmbedding {
  double alpha = 0.0;
  std::function<double(const StateVector&)> value;
  std::function<StateVector(const StateVector&)> gradient;

  /// f_E(x) − α∇V(x).
  StateVector embed(const StateVector& f_e, const StateVector& x) const;

  /// V = ¼(‖q‖² − 1)² on ℍ × ℝ³.
  static StableEmbedding unit_quaternion(double alpha);
};

double v_value(const StateVector& x);
StateVector v_gradient(const StateVector& x);

/// Satellite drift minus α∇V. α = 0 gives the plain extended drift.
StateVector se_drift(const StateVector& x, const SatParams& p, double alpha);

/// x + h·se_drift(x) + w.
StateVector euler_step(const StateVector& x, double h, double alpha, const SatParams& p,
                       const StateVector& w);

struct DiscreteNoise {
  Matrix P_w;
  Matrix P_v;
};

/// P_w·h and P_v/h: the usual discretisation of continuous white noise.
DiscreteNoise discretize_noise(const Matrix& P_w_cont, const Matrix& P_v_cont, double h);

/// diag(1e-8·I₄, h·σ_Ω²·I₃): the discrete process noise the filters assume.
Matrix satellite_process_noise(double h, const SatParams& p);

/// The Euler-discretised embedded system together with its noise model.
struct DiscretizedSystem {
  double h = 0.1;
  double alpha = 0.0;
  SatParams sat;
  Matrix P_w_discrete;
  Matrix P_v_discrete;

  StateVector f_step(const StateVector& x, const StateVector& w) const {
    return euler_step(x, h, alpha, sat, w);
  }

  static DiscretizedSystem satellite(const SatParams& p, double h, double alpha,
                                     bool rescale_measurement_noise = false);
};

}  // namespace ukfse
