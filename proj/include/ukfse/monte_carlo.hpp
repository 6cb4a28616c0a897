#pragma once

#include "ukfse/config.hpp"
#include "ukfse/filters.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ukfse {

/// True states and sensor readings at the filter instants t_k = k·h.
struct Trajectory {
  std::vector<double> t;
  std::vector<SatState> states;
  std::vector<Measurement> measurements;
};

/// Initial state drawn from N((q̄₀, Ω̄₀), diag(σ_q²·I₄, σ_Ω²·I₃)), q renormalised.
SatState sample_initial_state(const SimConfig& cfg, Rng& rng);

/// Integrate the attitude dynamics with stochastic Euler (or RK4 plus Euler
/// noise) at cfg.h_truth, renormalising the quaternion each substep, and
/// record state and measurement at every filter instant. Depends only on
/// (cfg, run_index).
Trajectory generate_truth(const SimConfig& cfg, std::int64_t run_index);

/// Same, from a given initial state with its own random stream.
Trajectory generate_truth_from(const SimConfig& cfg, const SatState& x0, Rng& rng);

struct FilterSeries {
  FilterKind kind = FilterKind::Standard;
  std::vector<double> sq_err;  // ‖q − q̂‖²
  std::vector<double> md;      // |‖q̂‖ − 1|
  std::vector<StateVector> x_hat;  // only when estimates are kept
  double wall_clock_s = 0.0;
  std::int64_t steps = 0;
  bool failed = false;
  std::string failure;
};

/// One Monte Carlo run: every selected filter on one shared trajectory.
struct RunRecord {
  std::int64_t run_index = 0;
  std::vector<FilterSeries> filters;  // aligned with cfg.filters
};

RunRecord run_filters(const SimConfig& cfg, const Trajectory& truth, std::int64_t run_index,
                      bool keep_estimates = false);

struct Curve {
  std::vector<double> values;
  double window_average = 0.0;
};

// Monte Carlo averages over the runs in which the filter did not fail.
Curve mse_q(std::span<const RunRecord> records, std::size_t filter_slot,
            std::span<const double> t, double window_start, double window_end);
Curve md_q(std::span<const RunRecord> records, std::size_t filter_slot,
           std::span<const double> t, double window_start, double window_end);

/// Mean of values[k] over t_k ∈ [start, end].
double window_average(std::span<const double> values, std::span<const double> t, double start,
                      double end);

struct FilterMetrics {
  FilterKind kind = FilterKind::Standard;
  std::vector<double> mse_curve;
  std::vector<double> md_curve;
  double avg_mse_q = 0.0;
  double avg_md_q = 0.0;
  double wall_clock_s = 0.0;
  double mean_step_s = 0.0;
  std::int64_t failures = 0;
  std::int64_t runs_used = 0;
  Eigen::Index sigma_points = 0;
  std::string first_failure;
};

struct MetricsTable {
  std::vector<double> t;
  std::vector<FilterMetrics> filters;

  const FilterMetrics& at(FilterKind kind) const;
};

/**
 * Full benchmark. Runs execute in parallel batches; each run owns its random
 * stream and filter instances and per-run results are reduced in run order,
 * so the table (wall clocks aside) matches run_monte_carlo_serial exactly.
 */
MetricsTable run_monte_carlo(const SimConfig& cfg);
MetricsTable run_monte_carlo_serial(const SimConfig& cfg);

}  // namespace ukfse
