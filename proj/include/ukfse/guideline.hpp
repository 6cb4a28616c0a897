#pragma once

#include "ukfse/numerics.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ukfse::guideline {

/// Inputs of the α-selection conditions. epsilon bounds |e| = |‖q‖² − 1|,
/// U bounds ‖Ω_BO‖, beta is the required per-step decay margin.
struct GuidelineInput {
  double epsilon = 0.5;
  double U = 0.2;
  double h = 0.1;
  double alpha = 2.0;
  double beta = 0.01;
};

struct GuidelineResult {
  bool cond1_ok = false;  // 0 < αh < 2/3
  bool cond2_ok = false;  // 0 < β < B(αh, ε) < 1
  bool cond3_ok = false;  // δ(h, αh, β) < ε
  double decay_bound = 0.0;            // B(αh, ε)
  std::optional<double> delta;         // δ(h, αh, β), empty if infeasible
  std::optional<double> delta0;        // δ(h, αh, 0)
  double alpha_upper = 0.0;            // 2/(3h): cond1 ⇔ 0 < α < alpha_upper
  std::string note;

  bool all_ok() const { return cond1_ok && cond2_ok && cond3_ok; }
};

/// One step of the quaternion-norm error map
/// e' = −1 + (1 + e)((1 − αh·e)² + h²‖Ω‖²/4).
double error_step(double e, double omega_norm, double alpha, double h);

/// B(αh, ε) = αh(1−ε)(2−αhε)(2 − 2αh − αh(2−αh)ε + (αh)²ε²).
double decay_bound(double alpha_h, double epsilon);

/// δ(h, αh, β); std::nullopt when the radicand is not strictly positive.
std::optional<double> delta(double h, double alpha_h, double beta, double epsilon, double U);

GuidelineResult check_conditions(const GuidelineInput& in);

struct AttractorReport {
  std::int64_t trajectories = 0;
  std::int64_t steps = 0;
  std::int64_t violations = 0;   // left S_δ after entering, or left S_ε
  std::int64_t not_entered = 0;  // never reached S_δ within the horizon
  std::int64_t max_entry_step = 0;
  double max_post_entry_abs_e = 0.0;
  double delta = 0.0;
  /// First offending trajectory, if any: index, initial e, step, value.
  std::string counterexample;

  bool ok() const { return violations == 0; }
};

/**
 * Brute-force check of the attractor claim. Initial errors are spread over
 * [−ε, ε] (endpoints included); per-step ‖Ω_BO‖ is drawn uniformly from
 * [0, U] for even trajectories and pinned at U for odd ones. Trajectories
 * run in parallel; the result does not depend on the thread count.
 * Throws std::invalid_argument unless all three conditions hold.
 */
AttractorReport verify_attractor(const GuidelineInput& in, std::int64_t n_trajectories,
                                 std::int64_t n_steps, std::uint64_t seed);

/// Single-threaded reference for verify_attractor; identical output.
AttractorReport verify_attractor_serial(const GuidelineInput& in, std::int64_t n_trajectories,
                                        std::int64_t n_steps, std::uint64_t seed);

}  // namespace ukfse::guideline
