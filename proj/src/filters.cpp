#include "ukfse/filters.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace ukfse {

namespace {

constexpr Eigen::Index kChartDim = 6;

Matrix chart_process_noise(const FilterSettings& s) {
  // Quaternion-block noise 1e-8 mapped isotropically onto the 3-d chart.
  Matrix P = Matrix::Zero(kChartDim, kChartDim);
  P.diagonal().head<3>().setConstant(1e-8);
  P.diagonal().tail<3>().setConstant(s.h * s.sat.sigma_omega_c * s.sat.sigma_omega_c);
  return P;
}

Matrix measurement_noise(const FilterSettings& s) {
  Matrix R = measurement_noise_covariance(s.sat);
  if (s.rescale_measurement_noise) R /= s.h;
  return R;
}

// Attitude block of an ambient covariance expressed in the tangent frame at q.
Matrix chart_covariance(const Matrix& P0, const Quaternion& q) {
  const Eigen::Matrix<double, 4, 3> E = tangent_basis(q);
  Matrix P = Matrix::Zero(kChartDim, kChartDim);
  P.topLeftCorner<3, 3>() = E.transpose() * P0.topLeftCorner<4, 4>() * E;
  P.bottomRightCorner<3, 3>() = P0.bottomRightCorner<3, 3>();
  P.topRightCorner<3, 3>() = E.transpose() * P0.topRightCorner<4, 3>();
  P.bottomLeftCorner<3, 3>() = P.topRightCorner<3, 3>().transpose();
  return P;
}

Vector measurement_with_noise(const SatState& s, double t, const SatParams& p, const Vector& v) {
  return measure(s, t, p).stacked() + v;
}

FilterInstance euclidean_step(const FilterInstance& inst, const Measurement& y, double t,
                              double alpha) {
  const FilterSettings& cfg = inst.settings;
  SystemCallbacks sys;
  sys.n_x = 7;
  sys.n_w = 7;
  sys.n_v = 6;
  sys.n_y = 6;
  sys.f = [&](const Vector& x, const Vector&, const Vector& w) -> Vector {
    return euler_step(x, cfg.h, alpha, cfg.sat, w);
  };
  sys.g = [&](const Vector& x, const Vector&, const Vector& v) -> Vector {
    return measurement_with_noise(SatState::from_vector(x), t, cfg.sat, v);
  };

  FilterInstance out = inst;
  try {
    out.est = ukf_step(inst.est, sys, Vector(), y.stacked(), inst.P_w, inst.P_v, cfg.ukf);
  } catch (const NumericalError& e) {
    throw FilterError(std::string(filter_name(inst.kind)) + ": " + e.what());
  }
  out.x_hat = out.est.x;
  return out;
}

template <typename Project>
FilterInstance projected_step(const FilterInstance& inst, const Measurement& y, double t,
                              Project project) {
  FilterInstance out = euclidean_step(inst, y, t, 0.0);
  try {
    const Quaternion q = project(out.attitude());
    out.x_hat.head<4>() = q.coeffs();
  } catch (const GeometryError& e) {
    throw FilterError(std::string(filter_name(inst.kind)) + ": " + e.what());
  }
  // Only the estimate is moved onto S³; the covariance is kept as is.
  out.est.x = out.x_hat;
  return out;
}

}  // namespace

std::string_view filter_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::Standard: return "standard";
    case FilterKind::ProjOptim: return "proj-optim";
    case FilterKind::ProjFormula: return "proj-formula";
    case FilterKind::UkfSe: return "ukf-se";
    case FilterKind::LieAlgebra: return "lie-algebra";
    case FilterKind::TangentSpace: return "tangent-space";
  }
  return "unknown";
}

FilterKind parse_filter_kind(std::string_view name) {
  for (FilterKind k : kAllFilterKinds) {
    if (filter_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown filter '" + std::string(name) + "'");
}

std::vector<FilterKind> parse_filter_list(std::string_view list) {
  std::vector<FilterKind> kinds;
  if (list == "all") return {kAllFilterKinds.begin(), kAllFilterKinds.end()};
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    std::string_view item =
        list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty()) {
      const FilterKind k = parse_filter_kind(item);
      bool seen = false;
      for (FilterKind have : kinds) seen = seen || have == k;
      if (!seen) kinds.push_back(k);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (kinds.empty()) throw std::invalid_argument("empty filter list");
  return kinds;
}

Eigen::Index FilterInstance::sigma_points() const {
  return 2 * (est.x.size() + P_w.rows() + P_v.rows()) + 1;
}

SatState manifold_step(const SatState& s, double h, const SatParams& p) {
  const Eigen::Vector3d w_bo = omega_bo(s, p);
  const StateVector dx = drift(s, p);
  return {s.q * lie_exp(0.5 * h * w_bo), s.omega + h * dx.tail<3>()};
}

FilterInstance make_filter(FilterKind kind, const FilterSettings& settings, const StateVector& x0,
                           const Matrix& P0) {
  if (P0.rows() != 7 || P0.cols() != 7) throw FilterError("make_filter: P0 must be 7x7");
  settings.sat.validate();
  if (!(settings.h > 0.0)) throw FilterError("make_filter: h must be positive");

  FilterInstance inst;
  inst.kind = kind;
  inst.settings = settings;
  inst.x_hat = x0;
  inst.P_v = measurement_noise(settings);

  switch (kind) {
    case FilterKind::Standard:
    case FilterKind::ProjOptim:
    case FilterKind::ProjFormula:
    case FilterKind::UkfSe:
      inst.est = {x0, P0};
      inst.P_w = satellite_process_noise(settings.h, settings.sat);
      break;
    case FilterKind::LieAlgebra: {
      const Quaternion q = project_formula(Quaternion(Eigen::Vector4d(x0.head<4>())));
      inst.x_hat.head<4>() = q.coeffs();
      Vector z(kChartDim);
      try {
        z << lie_log(q), x0.tail<3>();
      } catch (const GeometryError& e) {
        throw FilterError(std::string("lie-algebra: ") + e.what());
      }
      inst.est = {z, chart_covariance(P0, q)};
      inst.P_w = chart_process_noise(settings);
      break;
    }
    case FilterKind::TangentSpace: {
      const Quaternion q = project_formula(Quaternion(Eigen::Vector4d(x0.head<4>())));
      inst.x_hat.head<4>() = q.coeffs();
      Vector z = Vector::Zero(kChartDim);
      z.tail<3>() = x0.tail<3>();
      inst.est = {z, chart_covariance(P0, q)};
      inst.P_w = chart_process_noise(settings);
      break;
    }
  }
  return inst;
}

FilterInstance step_standard(const FilterInstance& inst, const Measurement& y, double t) {
  return euclidean_step(inst, y, t, 0.0);
}

FilterInstance step_ukf_se(const FilterInstance& inst, const Measurement& y, double t) {
  return euclidean_step(inst, y, t, inst.settings.alpha);
}

FilterInstance step_proj_optim(const FilterInstance& inst, const Measurement& y, double t) {
  return projected_step(inst, y, t, [](const Quaternion& q) { return project_optimize(q).q; });
}

FilterInstance step_proj_formula(const FilterInstance& inst, const Measurement& y, double t) {
  return projected_step(inst, y, t, [](const Quaternion& q) { return project_formula(q); });
}

FilterInstance step_lie_algebra(const FilterInstance& inst, const Measurement& y, double t) {
  const FilterSettings& cfg = inst.settings;
  SystemCallbacks sys;
  sys.n_x = kChartDim;
  sys.n_w = kChartDim;
  sys.n_v = 6;
  sys.n_y = 6;
  sys.f = [&](const Vector& z, const Vector&, const Vector& w) -> Vector {
    const SatState s{lie_exp(z.head<3>()), z.tail<3>()};
    const SatState next = manifold_step(s, cfg.h, cfg.sat);
    Vector out(kChartDim);
    out << lie_log(next.q) + w.head<3>(), next.omega + w.tail<3>();
    return out;
  };
  sys.g = [&](const Vector& z, const Vector&, const Vector& v) -> Vector {
    return measurement_with_noise({lie_exp(z.head<3>()), z.tail<3>()}, t, cfg.sat, v);
  };

  FilterInstance out = inst;
  try {
    out.est = ukf_step(inst.est, sys, Vector(), y.stacked(), inst.P_w, inst.P_v, cfg.ukf);
  } catch (const std::runtime_error& e) {
    throw FilterError(std::string("lie-algebra: ") + e.what());
  }
  out.x_hat << lie_exp(out.est.x.head<3>()).coeffs(), out.est.x.tail<3>();
  return out;
}

FilterInstance step_tangent_space(const FilterInstance& inst, const Measurement& y, double t) {
  const FilterSettings& cfg = inst.settings;
  const Quaternion base = inst.attitude();
  const Eigen::Matrix<double, 4, 3> E = tangent_basis(base);

  FilterInstance out = inst;
  try {
    const SigmaPointSet sp = generate_sigma_points(inst.est, inst.P_w, inst.P_v, cfg.ukf);
    const Eigen::Index n = sp.size();

    std::vector<Quaternion> attitudes(static_cast<std::size_t>(n));
    Matrix omegas(3, n);
    Prediction pred;
    pred.Y.resize(6, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto xi = sp.x_part(i);
      const auto wi = sp.w_part(i);
      const SatState s{riem_exp(base, E * xi.head<3>()), xi.tail<3>()};
      SatState next = manifold_step(s, cfg.h, cfg.sat);
      next.q = riem_exp(next.q, tangent_basis(next.q) * wi.head<3>());
      next.omega += wi.tail<3>();
      attitudes[static_cast<std::size_t>(i)] = next.q;
      omegas.col(i) = next.omega;
      pred.Y.col(i) = measurement_with_noise(next, t, cfg.sat, sp.v_part(i));
    }

    // The weights reach |W₀| ~ 1e4 with the default spread, so the residual
    // of the fixed point cannot drop below ~1e-12·Σ|w|.
    const double tol = 1e-12 * sp.weights_mean.cwiseAbs().sum();
    const std::span<const double> wm(sp.weights_mean.data(), static_cast<std::size_t>(n));
    const Quaternion mean = karcher_mean(attitudes, wm, tol).mean;
    const Eigen::Matrix<double, 4, 3> E_mean = tangent_basis(mean);

    pred.X.resize(kChartDim, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      pred.X.col(i) << E_mean.transpose() * riem_log(mean, attitudes[static_cast<std::size_t>(i)]),
          omegas.col(i);
    }
    pred.weights_mean = sp.weights_mean;
    pred.weights_cov = sp.weights_cov;
    pred.x_pred = weighted_mean(pred.X, sp.weights_mean);
    pred.y_pred = weighted_mean(pred.Y, sp.weights_mean);
    pred.P_pred = symmetrize(
        weighted_cross_covariance(pred.X, pred.x_pred, pred.X, pred.x_pred, sp.weights_cov));

    const UkfEstimate post = measurement_update(pred, y.stacked());
    const Quaternion q_hat = riem_exp(mean, E_mean * post.x.head<3>());
    out.x_hat << q_hat.coeffs().normalized(), post.x.tail<3>();
    // Re-centre the chart at the new estimate; the covariance is carried over
    // in the left-invariant frame q ⊗ {i, j, k}.
    out.est.x.setZero(kChartDim);
    out.est.x.tail<3>() = post.x.tail<3>();
    out.est.P = post.P;
  } catch (const std::runtime_error& e) {
    throw FilterError(std::string("tangent-space: ") + e.what());
  }
  return out;
}

FilterInstance step(const FilterInstance& inst, const Measurement& y, double t) {
  switch (inst.kind) {
    case FilterKind::Standard: return step_standard(inst, y, t);
    case FilterKind::ProjOptim: return step_proj_optim(inst, y, t);
    case FilterKind::ProjFormula: return step_proj_formula(inst, y, t);
    case FilterKind::UkfSe: return step_ukf_se(inst, y, t);
    case FilterKind::LieAlgebra: return step_lie_algebra(inst, y, t);
    case FilterKind::TangentSpace: return step_tangent_space(inst, y, t);
  }
  throw FilterError("step: unknown filter kind");
}

}  // namespace ukfse
