#pragma once

#include "ukfse/filters.hpp"
#include "ukfse/satellite.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ukfse {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TruthIntegrator { Euler, Rk4 };

/// Everything that determines a Monte Carlo benchmark. Together with the
/// master seed it fixes every reported number except wall-clock times.
struct SimConfig {
  SatParams sat;
  double duration = 200.0;  // [s]
  double h_truth = 1e-3;    // truth integration substep [s]
  std::int64_t n_runs = 1000;
  std::uint64_t master_seed = 1;
  std::vector<FilterKind> filters{kAllFilterKinds.begin(), kAllFilterKinds.end()};
  double alpha = 2.0;
  UkfParams ukf;
  double window_start = 150.0;
  double window_end = 200.0;

  Eigen::Vector4d q0_mean{std::cos(std::numbers::pi / 4), std::sin(std::numbers::pi / 4), 0.0,
                          0.0};
  Eigen::Vector3d omega0_mean{-0.01, 0.01, 0.01};
  double q0_variance = 1e-8;
  double omega0_variance_truth = 0.01 * 0.01;  // dispersion of the true initial rate
  double omega0_variance_filter = 0.01;        // filter prior

  bool noise_free = false;
  bool truth_process_noise = true;  // rate diffusion in the true trajectory
  bool rescale_measurement_noise = false;
  TruthIntegrator truth_integrator = TruthIntegrator::Euler;
  std::string out_dir = "out";
  int threads = 0;  // 0: OpenMP default

  double h_filter() const { return 1.0 / sat.f_sample; }
  /// Number of filter steps; measurements exist at k = 0..n_steps().
  std::int64_t n_steps() const;
  /// Truth substeps per filter step.
  std::int64_t substeps() const;
  /// Throws ConfigError if the configuration is inconsistent.
  void validate() const;

  FilterSettings filter_settings() const;
  StateVector filter_prior_mean() const;
  Matrix filter_prior_covariance() const;
};

/// Apply one `key = value` entry. Throws ConfigError for unknown keys or
/// malformed values.
void apply_config_entry(SimConfig& cfg, const std::string& key, const std::string& value);

/// Parse a flat `key = value` file (`#` starts a comment) on top of `base`.
SimConfig load_config(const std::filesystem::path& path, SimConfig base = {});

/// Every configurable field as key → value text, in the config-file syntax.
std::map<std::string, std::string> config_entries(const SimConfig& cfg);

std::string_view truth_integrator_name(TruthIntegrator t);

}  // namespace ukfse
