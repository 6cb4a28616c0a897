#pragma once

#include "ukfse/embedding.hpp"
#include "ukfse/ukf.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ukfse {

enum class FilterKind { Standard, ProjOptim, ProjFormula, UkfSe, LieAlgebra, TangentSpace };

inline constexpr std::array<FilterKind, 6> kAllFilterKinds = {
    FilterKind::Standard, FilterKind::ProjOptim,  FilterKind::ProjFormula,
    FilterKind::UkfSe,    FilterKind::LieAlgebra, FilterKind::TangentSpace};

/// CLI name: standard, proj-optim, proj-formula, ukf-se, lie-algebra, tangent-space.
std::string_view filter_name(FilterKind kind);
/// Throws std::invalid_argument for unknown names.
FilterKind parse_filter_kind(std::string_view name);
/// Comma-separated list of names; "all" selects every kind.
std::vector<FilterKind> parse_filter_list(std::string_view list);

/// A filter step could not be completed (chart singularity, failed
/// projection, corrupted covariance, ...).
class FilterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FilterSettings {
  SatParams sat;
  UkfParams ukf;
  double h = 0.1;
  double alpha = 2.0;  // used by UkfSe only
  bool rescale_measurement_noise = false;
};

/**
 * Filter state between steps.
 *
 * `est` lives in the filter's own coordinates: the ambient 7-vector for the
 * Euclidean kinds, the identity-chart (v, Ω) for LieAlgebra, and the tangent
 * chart (ξ, Ω) at the current attitude estimate for TangentSpace (ξ is
 * re-centred to zero after every step). `x_hat` is always the ambient
 * (q̂, Ω̂) estimate.
 */
struct FilterInstance {
  FilterKind kind = FilterKind::Standard;
  FilterSettings settings;
  UkfEstimate est;
  StateVector x_hat = StateVector::Zero();
  Matrix P_w;
  Matrix P_v;

  Quaternion attitude() const { return Quaternion(Eigen::Vector4d(x_hat.head<4>())); }
  Eigen::Index sigma_points() const;
};

/// Initialise a filter from an ambient prior (x0, P0) with P0 7×7.
FilterInstance make_filter(FilterKind kind, const FilterSettings& settings, const StateVector& x0,
                           const Matrix& P0);

// One predict/correct cycle with the measurement y taken at time t.
FilterInstance step_standard(const FilterInstance& inst, const Measurement& y, double t);
FilterInstance step_proj_optim(const FilterInstance& inst, const Measurement& y, double t);
FilterInstance step_proj_formula(const FilterInstance& inst, const Measurement& y, double t);
FilterInstance step_ukf_se(const FilterInstance& inst, const Measurement& y, double t);
FilterInstance step_lie_algebra(const FilterInstance& inst, const Measurement& y, double t);
FilterInstance step_tangent_space(const FilterInstance& inst, const Measurement& y, double t);

/// Dispatch on inst.kind.
FilterInstance step(const FilterInstance& inst, const Measurement& y, double t);

/// Kinematics used by the chart filters: q ⊗ exp(h·Ω_BO/2) and an Euler step
/// for Ω_BI. Stays on S³ for unit q.
SatState manifold_step(const SatState& s, double h, const SatParams& p);

}  // namespace ukfse
