#include "ukfse/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ukfse {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: '" + key + "' expects a boolean, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value,
                               std::size_t expected) {
  std::string v = value;
  for (char& c : v) {
    if (c == ',') c = ' ';
  }
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(key, tok));
  if (out.size() != expected) {
    throw ConfigError("config: '" + key + "' expects " + std::to_string(expected) + " numbers");
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view truth_integrator_name(TruthIntegrator t) {
  return t == TruthIntegrator::Euler ? "euler" : "rk4";
}

std::int64_t SimConfig::n_steps() const {
  return static_cast<std::int64_t>(std::llround(duration / h_filter()));
}

std::int64_t SimConfig::substeps() const {
  return std::max<std::int64_t>(1, std::llround(h_filter() / h_truth));
}

void SimConfig::validate() const {
  try {
    sat.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(duration > 0.0)) throw ConfigError("config: duration must be positive");
  if (!(h_truth > 0.0) || h_truth > h_filter() * (1.0 + 1e-12)) {
    throw ConfigError("config: need 0 < h_truth <= 1/f_sample_hz");
  }
  const double ratio = h_filter() / h_truth;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ConfigError("config: 1/f_sample_hz must be an integer multiple of h_truth");
  }
  if (std::abs(static_cast<double>(n_steps()) * h_filter() - duration) > 1e-9 * duration) {
    throw ConfigError("config: duration must be a multiple of 1/f_sample_hz");
  }
  if (n_runs < 1) throw ConfigError("config: runs must be at least 1");
  if (filters.empty()) throw ConfigError("config: no filters selected");
  if (!(window_start >= 0.0 && window_start < window_end && window_end <= duration)) {
    throw ConfigError("config: need 0 <= window_start < window_end <= duration");
  }
  if (!(alpha >= 0.0)) throw ConfigError("config: alpha must be non-negative");
  if (!(q0_variance >= 0.0 && omega0_variance_truth >= 0.0 && omega0_variance_filter >= 0.0)) {
    throw ConfigError("config: initial variances must be non-negative");
  }
  if (std::abs(q0_mean.norm() - 1.0) > 1e-9) throw ConfigError("config: q0_mean must be unit");
}

FilterSettings SimConfig::filter_settings() const {
  FilterSettings s;
  s.sat = sat;
  s.ukf = ukf;
  s.h = h_filter();
  s.alpha = alpha;
  s.rescale_measurement_noise = rescale_measurement_noise;
  return s;
}

StateVector SimConfig::filter_prior_mean() const {
  StateVector x;
  x << q0_mean, omega0_mean;
  return x;
}

Matrix SimConfig::filter_prior_covariance() const {
  Matrix P = Matrix::Zero(7, 7);
  P.diagonal().head<4>().setConstant(q0_variance);
  P.diagonal().tail<3>().setConstant(omega0_variance_filter);
  return P;
}

void apply_config_entry(SimConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  SatParams& s = cfg.sat;
  if (key == "inertia") {
    const auto v = parse_list(key, value, 3);
    s.inertia = {v[0], v[1], v[2]};
  } else if (key == "sigma_omega_c") {
    s.sigma_omega_c = parse_double(key, value);
  } else if (key == "mu_earth") {
    s.mu_earth = parse_double(key, value);
  } else if (key == "r0") {
    s.r0 = parse_double(key, value);
  } else if (key == "M_e") {
    s.M_e = parse_double(key, value);
  } else if (key == "epsilon_deg") {
    s.epsilon = deg_to_rad(parse_double(key, value));
  } else if (key == "inclination_deg") {
    s.inclination = deg_to_rad(parse_double(key, value));
  } else if (key == "omega_e") {
    s.omega_e = parse_double(key, value);
  } else if (key == "sigma_mag_nT") {
    s.sigma_mag_c = parse_double(key, value) * 1e-9;
  } else if (key == "sigma_rate_c") {
    s.sigma_rate_c = parse_double(key, value);
  } else if (key == "f_sample_hz") {
    s.f_sample = parse_double(key, value);
  } else if (key == "duration") {
    cfg.duration = parse_double(key, value);
  } else if (key == "h_truth") {
    cfg.h_truth = parse_double(key, value);
  } else if (key == "runs") {
    cfg.n_runs = parse_int(key, value);
  } else if (key == "seed") {
    const std::int64_t seed = parse_int(key, value);
    if (seed < 0) throw ConfigError("config: seed must be non-negative");
    cfg.master_seed = static_cast<std::uint64_t>(seed);
  } else if (key == "filters") {
    try {
      cfg.filters = parse_filter_list(trim(value));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  } else if (key == "alpha") {
    cfg.alpha = parse_double(key, value);
  } else if (key == "ukf_gamma") {
    cfg.ukf.gamma = parse_double(key, value);
  } else if (key == "ukf_kappa") {
    cfg.ukf.kappa = parse_double(key, value);
  } else if (key == "ukf_beta") {
    cfg.ukf.beta = parse_double(key, value);
  } else if (key == "window_start") {
    cfg.window_start = parse_double(key, value);
  } else if (key == "window_end") {
    cfg.window_end = parse_double(key, value);
  } else if (key == "q0_mean") {
    const auto v = parse_list(key, value, 4);
    cfg.q0_mean = {v[0], v[1], v[2], v[3]};
  } else if (key == "omega0_mean") {
    const auto v = parse_list(key, value, 3);
    cfg.omega0_mean = {v[0], v[1], v[2]};
  } else if (key == "q0_variance") {
    cfg.q0_variance = parse_double(key, value);
  } else if (key == "omega0_variance_truth") {
    cfg.omega0_variance_truth = parse_double(key, value);
  } else if (key == "omega0_variance_filter") {
    cfg.omega0_variance_filter = parse_double(key, value);
  } else if (key == "noise_free") {
    cfg.noise_free = parse_bool(key, value);
  } else if (key == "truth_process_noise") {
    cfg.truth_process_noise = parse_bool(key, value);
  } else if (key == "rescale_measurement_noise") {
    cfg.rescale_measurement_noise = parse_bool(key, value);
  } else if (key == "truth_integrator") {
    const std::string v = trim(value);
    if (v == "euler") {
      cfg.truth_integrator = TruthIntegrator::Euler;
    } else if (v == "rk4") {
      cfg.truth_integrator = TruthIntegrator::Rk4;
    } else {
      throw ConfigError("config: truth_integrator must be 'euler' or 'rk4'");
    }
  } else if (key == "out_dir") {
    cfg.out_dir = trim(value);
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_int(key, value));
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_config_entry(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

std::map<std::string, std::string> config_entries(const SimConfig& cfg) {
  const SatParams& s = cfg.sat;
  std::string filters;
  for (FilterKind k : cfg.filters) {
    if (!filters.empty()) filters += ',';
    filters += filter_name(k);
  }
  auto vec = [](const auto& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? "," : "") + num(v(i));
    return out;
  };
  return {
      {"inertia", vec(s.inertia)},
      {"sigma_omega_c", num(s.sigma_omega_c)},
      {"mu_earth", num(s.mu_earth)},
      {"r0", num(s.r0)},
      {"M_e", num(s.M_e)},
      {"epsilon_deg", num(s.epsilon * 180.0 / std::numbers::pi)},
      {"inclination_deg", num(s.inclination * 180.0 / std::numbers::pi)},
      {"omega_e", num(s.omega_e)},
      {"sigma_mag_nT", num(s.sigma_mag_c * 1e9)},
      {"sigma_rate_c", num(s.sigma_rate_c)},
      {"f_sample_hz", num(s.f_sample)},
      {"duration", num(cfg.duration)},
      {"h_truth", num(cfg.h_truth)},
      {"runs", std::to_string(cfg.n_runs)},
      {"seed", std::to_string(cfg.master_seed)},
      {"filters", filters},
      {"alpha", num(cfg.alpha)},
      {"ukf_gamma", num(cfg.ukf.gamma)},
      {"ukf_kappa", num(cfg.ukf.kappa)},
      {"ukf_beta", num(cfg.ukf.beta)},
      {"window_start", num(cfg.window_start)},
      {"window_end", num(cfg.window_end)},
      {"q0_mean", vec(cfg.q0_mean)},
      {"omega0_mean", vec(cfg.omega0_mean)},
      {"q0_variance", num(cfg.q0_variance)},
      {"omega0_variance_truth", num(cfg.omega0_variance_truth)},
      {"omega0_variance_filter", num(cfg.omega0_variance_filter)},
      {"noise_free", cfg.noise_free ? "true" : "false"},
      {"truth_process_noise", cfg.truth_process_noise ? "true" : "false"},
      {"rescale_measurement_noise", cfg.rescale_measurement_noise ? "true" : "false"},
      {"truth_integrator", std::string(truth_integrator_name(cfg.truth_integrator))},
      {"out_dir", cfg.out_dir},
      {"threads", std::to_string(cfg.threads)},
  };
}

}  // namespace ukfse
