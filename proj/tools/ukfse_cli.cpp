#include "ukfse/config.hpp"
#include "ukfse/guideline.hpp"
#include "ukfse/monte_carlo.hpp"
#include "ukfse/outputs.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> runs;
  std::string filters;
  std::optional<double> alpha;
  std::optional<double> duration;
  std::string out_dir;
  bool noise_free = false;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config_path, "key = value configuration file")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--runs", o.runs, "number of Monte Carlo runs")->check(CLI::PositiveNumber);
  app->add_option("--filters", o.filters, "comma-separated filter names or 'all'");
  app->add_option("--alpha", o.alpha, "stabilisation gain of ukf-se");
  app->add_option("--duration", o.duration, "simulated time [s]");
  app->add_option("--out-dir", o.out_dir, "output directory");
  app->add_flag("--noise-free", o.noise_free, "disable process, measurement and prior noise");
}

ukfse::SimConfig build_config(const CommonOptions& o) {
  ukfse::SimConfig cfg;
  if (!o.config_path.empty()) cfg = ukfse::load_config(o.config_path, cfg);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.runs) cfg.n_runs = *o.runs;
  if (!o.filters.empty()) ukfse::apply_config_entry(cfg, "filters", o.filters);
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.duration) {
    cfg.duration = *o.duration;
    cfg.window_end = std::min(cfg.window_end, cfg.duration);
    cfg.window_start = std::min(cfg.window_start, 0.75 * cfg.duration);
  }
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.noise_free) cfg.noise_free = true;
  cfg.validate();
  return cfg;
}

void warn_alpha(const ukfse::SimConfig& cfg) {
  const double ah = cfg.alpha * cfg.h_filter();
  if (ah <= 0.0 || ah >= 2.0 / 3.0) {
    std::fprintf(stderr,
                 "warning: alpha*h = %g lies outside (0, 2/3); the norm-error bound does not "
                 "apply\n",
                 ah);
  }
}

int run_benchmark(const CommonOptions& o) {
  const ukfse::SimConfig cfg = build_config(o);
  warn_alpha(cfg);
  const ukfse::MetricsTable table = ukfse::run_monte_carlo(cfg);
  ukfse::write_outputs(table, cfg);
  std::printf("%-14s %14s %14s %12s %9s %6s\n", "filter", "avg_mse_q", "avg_md_q", "wall_s",
              "failures", "sigma");
  for (const ukfse::FilterMetrics& m : table.filters) {
    std::printf("%-14s %14.6e %14.6e %12.3f %9lld %6lld\n",
                std::string(ukfse::filter_name(m.kind)).c_str(), m.avg_mse_q, m.avg_md_q,
                m.wall_clock_s, static_cast<long long>(m.failures),
                static_cast<long long>(m.sigma_points));
    if (!m.first_failure.empty()) std::printf("  first failure: %s\n", m.first_failure.c_str());
  }
  std::printf("wrote %s\n", cfg.out_dir.c_str());
  return 0;
}

int run_simulate(const CommonOptions& o) {
  ukfse::SimConfig cfg = build_config(o);
  warn_alpha(cfg);
  const ukfse::Trajectory truth = ukfse::generate_truth(cfg, 0);
  const ukfse::RunRecord rec = ukfse::run_filters(cfg, truth, 0, true);
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = std::filesystem::path(cfg.out_dir) / "trajectory.csv";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  ukfse::write_trajectory_csv(out, truth, rec);
  std::ofstream manifest(std::filesystem::path(cfg.out_dir) / "manifest.json");
  ukfse::write_manifest_json(manifest, cfg, nullptr);
  for (const ukfse::FilterSeries& s : rec.filters) {
    if (s.failed) {
      std::fprintf(stderr, "%s failed: %s\n", std::string(ukfse::filter_name(s.kind)).c_str(),
                   s.failure.c_str());
    }
  }
  std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

struct AlphaOptions {
  ukfse::guideline::GuidelineInput in;
  bool verify = false;
  std::int64_t trajectories = 10000;
  std::int64_t steps = 1000;
  std::uint64_t seed = 1;
};

const char* mark(bool ok) { return ok ? "ok" : "FAIL"; }

int run_alpha_check(const AlphaOptions& o) {
  namespace g = ukfse::guideline;
  const g::GuidelineInput& in = o.in;
  if (!(in.h > 0.0)) throw std::invalid_argument("--h must be positive");
  const g::GuidelineResult r = g::check_conditions(in);
  std::printf("feasible interval: 0 < alpha < 2/(3h) = %.12g\n", r.alpha_upper);
  std::printf("alpha*h = %.12g\n", in.alpha * in.h);
  std::printf("cond1 0 < alpha*h < 2/3         : %s\n", mark(r.cond1_ok));
  std::printf("cond2 0 < beta < B < 1          : %s (B = %.12g, beta = %.12g)\n", mark(r.cond2_ok),
              r.decay_bound, in.beta);
  if (r.delta) {
    std::printf("cond3 delta < epsilon           : %s (delta = %.12g, epsilon = %.12g)\n",
                mark(r.cond3_ok), *r.delta, in.epsilon);
  } else {
    std::printf("cond3 delta < epsilon           : %s (delta undefined)\n", mark(r.cond3_ok));
  }
  if (r.delta0) std::printf("delta0 (beta = 0) = %.12g\n", *r.delta0);
  if (!r.note.empty()) std::printf("note: %s\n", r.note.c_str());
  if (o.verify) {
    if (!r.all_ok()) {
      std::printf("verify: skipped, conditions not met\n");
    } else {
      const g::AttractorReport rep = g::verify_attractor(in, o.trajectories, o.steps, o.seed);
      std::printf("verify: %lld trajectories x %lld steps, violations %lld, not entered %lld, "
                  "max entry step %lld, max |e| after entry %.6e\n",
                  static_cast<long long>(rep.trajectories), static_cast<long long>(rep.steps),
                  static_cast<long long>(rep.violations), static_cast<long long>(rep.not_entered),
                  static_cast<long long>(rep.max_entry_step), rep.max_post_entry_abs_e);
      if (!rep.counterexample.empty()) std::printf("counterexample: %s\n", rep.counterexample.c_str());
      if (!rep.ok()) return 2;
    }
  }
  return r.all_ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attitude estimation with a stable embedding in the unscented Kalman filter"};
  app.set_version_flag("--version", std::string(ukfse::library_version()));
  app.require_subcommand(1);

  CommonOptions bench_opts;
  CLI::App* bench = app.add_subcommand("benchmark", "Monte Carlo comparison of all filters");
  add_common(bench, bench_opts);

  CommonOptions sim_opts;
  CLI::App* sim = app.add_subcommand("simulate", "one truth trajectory with filter estimates");
  add_common(sim, sim_opts);

  AlphaOptions alpha_opts;
  CLI::App* ac = app.add_subcommand("alpha-check", "check the stabilisation-gain conditions");
  ac->set_help_flag("--help", "print this help message and exit");
  ac->add_option("--h", alpha_opts.in.h, "time step")->capture_default_str();
  ac->add_option("--alpha", alpha_opts.in.alpha, "gain")->capture_default_str();
  ac->add_option("--epsilon", alpha_opts.in.epsilon, "bound on |norm^2 - 1|")->capture_default_str();
  ac->add_option("--U", alpha_opts.in.U, "bound on the body rate norm")->capture_default_str();
  ac->add_option("--beta", alpha_opts.in.beta, "decay margin")->capture_default_str();
  ac->add_flag("--verify", alpha_opts.verify, "brute-force check of the attractor");
  ac->add_option("--trajectories", alpha_opts.trajectories)->capture_default_str();
  ac->add_option("--steps", alpha_opts.steps)->capture_default_str();
  ac->add_option("--seed", alpha_opts.seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) return run_benchmark(bench_opts);
    if (*sim) return run_simulate(sim_opts);
    if (*ac) return run_alpha_check(alpha_opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
