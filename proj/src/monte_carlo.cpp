#include "ukfse/monte_carlo.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace ukfse {

namespace {

constexpr std::int64_t kBatchRuns = 64;

struct Accumulator {
  std::vector<double> sum_sq;
  std::vector<double> sum_md;
  double wall_clock_s = 0.0;
  std::int64_t steps = 0;
  std::int64_t runs_used = 0;
  std::int64_t failures = 0;
  std::string first_failure;
};

template <typename Get>
Curve average_curve(std::span<const RunRecord> records, std::size_t slot,
                    std::span<const double> t, double start, double end, Get get) {
  Curve c;
  c.values.assign(t.size(), 0.0);
  std::int64_t used = 0;
  for (const RunRecord& r : records) {
    const FilterSeries& s = r.filters.at(slot);
    if (s.failed) continue;
    const std::vector<double>& v = get(s);
    for (std::size_t k = 0; k < c.values.size(); ++k) c.values[k] += v[k];
    ++used;
  }
  if (used == 0) {
    c.values.assign(t.size(), std::numeric_limits<double>::quiet_NaN());
  } else {
    for (double& v : c.values) v /= static_cast<double>(used);
  }
  c.window_average = window_average(c.values, t, start, end);
  return c;
}

MetricsTable run(const SimConfig& cfg, bool parallel) {
  cfg.validate();
  const std::size_t n_filters = cfg.filters.size();
  const auto n_points = static_cast<std::size_t>(cfg.n_steps() + 1);

  std::vector<Accumulator> acc(n_filters);
  for (Accumulator& a : acc) {
    a.sum_sq.assign(n_points, 0.0);
    a.sum_md.assign(n_points, 0.0);
  }

  if (parallel && cfg.threads > 0) omp_set_num_threads(cfg.threads);

  for (std::int64_t first = 0; first < cfg.n_runs; first += kBatchRuns) {
    const std::int64_t count = std::min(kBatchRuns, cfg.n_runs - first);
    std::vector<RunRecord> batch(static_cast<std::size_t>(count));
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (std::int64_t i = 0; i < count; ++i) {
        const Trajectory truth = generate_truth(cfg, first + i);
        batch[static_cast<std::size_t>(i)] = run_filters(cfg, truth, first + i);
      }
    } else {
      for (std::int64_t i = 0; i < count; ++i) {
        const Trajectory truth = generate_truth(cfg, first + i);
        batch[static_cast<std::size_t>(i)] = run_filters(cfg, truth, first + i);
      }
    }
    // In-order reduction keeps the sums independent of scheduling.
    for (const RunRecord& r : batch) {
      for (std::size_t f = 0; f < n_filters; ++f) {
        const FilterSeries& s = r.filters[f];
        Accumulator& a = acc[f];
        a.wall_clock_s += s.wall_clock_s;
        a.steps += s.steps;
        if (s.failed) {
          if (a.failures == 0) {
            a.first_failure = "run " + std::to_string(r.run_index) + ": " + s.failure;
          }
          ++a.failures;
          continue;
        }
        ++a.runs_used;
        for (std::size_t k = 0; k < n_points; ++k) {
          a.sum_sq[k] += s.sq_err[k];
          a.sum_md[k] += s.md[k];
        }
      }
    }
  }

  MetricsTable table;
  table.t.resize(n_points);
  for (std::size_t k = 0; k < n_points; ++k) table.t[k] = static_cast<double>(k) * cfg.h_filter();

  for (std::size_t f = 0; f < n_filters; ++f) {
    const Accumulator& a = acc[f];
    FilterMetrics m;
    m.kind = cfg.filters[f];
    m.failures = a.failures;
    m.runs_used = a.runs_used;
    m.first_failure = a.first_failure;
    m.wall_clock_s = a.wall_clock_s;
    m.mean_step_s = a.steps > 0 ? a.wall_clock_s / static_cast<double>(a.steps) : 0.0;
    m.sigma_points = make_filter(m.kind, cfg.filter_settings(), cfg.filter_prior_mean(),
                                 cfg.filter_prior_covariance())
                         .sigma_points();
    m.mse_curve.resize(n_points);
    m.md_curve.resize(n_points);
    const double denom = a.runs_used > 0 ? static_cast<double>(a.runs_used)
                                         : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < n_points; ++k) {
      m.mse_curve[k] = a.sum_sq[k] / denom;
      m.md_curve[k] = a.sum_md[k] / denom;
    }
    m.avg_mse_q = window_average(m.mse_curve, table.t, cfg.window_start, cfg.window_end);
    m.avg_md_q = window_average(m.md_curve, table.t, cfg.window_start, cfg.window_end);
    table.filters.push_back(std::move(m));
  }
  return table;
}

}  // namespace

RunRecord run_filters(const SimConfig& cfg, const Trajectory& truth, std::int64_t run_index,
                      bool keep_estimates) {
  using Clock = std::chrono::steady_clock;
  const FilterSettings settings = cfg.filter_settings();
  const StateVector x0 = cfg.filter_prior_mean();
  const Matrix P0 = cfg.filter_prior_covariance();
  const std::size_t n_points = truth.t.size();

  RunRecord rec;
  rec.run_index = run_index;
  rec.filters.reserve(cfg.filters.size());
  for (FilterKind kind : cfg.filters) {
    FilterSeries s;
    s.kind = kind;
    s.sq_err.reserve(n_points);
    s.md.reserve(n_points);
    if (keep_estimates) s.x_hat.reserve(n_points);

    auto record = [&](const FilterInstance& inst, std::size_t k) {
      const Eigen::Vector4d q_hat = inst.x_hat.head<4>();
      s.sq_err.push_back((truth.states[k].q.coeffs() - q_hat).squaredNorm());
      s.md.push_back(std::abs(q_hat.norm() - 1.0));
      if (keep_estimates) s.x_hat.push_back(inst.x_hat);
    };

    const auto start = Clock::now();
    try {
      FilterInstance inst = make_filter(kind, settings, x0, P0);
      record(inst, 0);
      for (std::size_t k = 1; k < n_points; ++k) {
        inst = step(inst, truth.measurements[k], truth.t[k]);
        ++s.steps;
        record(inst, k);
      }
    } catch (const std::exception& e) {
      s.failed = true;
      s.failure = e.what();
    }
    s.wall_clock_s = std::chrono::duration<double>(Clock::now() - start).count();
    rec.filters.push_back(std::move(s));
  }
  return rec;
}

double window_average(std::span<const double> values, std::span<const double> t, double start,
                      double end) {
  double sum = 0.0;
  std::int64_t n = 0;
  for (std::size_t k = 0; k < values.size() && k < t.size(); ++k) {
    if (t[k] >= start - 1e-9 && t[k] <= end + 1e-9) {
      sum += values[k];
      ++n;
    }
  }
  return n > 0 ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

Curve mse_q(std::span<const RunRecord> records, std::size_t filter_slot,
            std::span<const double> t, double window_start, double window_end) {
  return average_curve(records, filter_slot, t, window_start, window_end,
                       [](const FilterSeries& s) -> const std::vector<double>& { return s.sq_err; });
}

Curve md_q(std::span<const RunRecord> records, std::size_t filter_slot,
           std::span<const double> t, double window_start, double window_end) {
  return average_curve(records, filter_slot, t, window_start, window_end,
                       [](const FilterSeries& s) -> const std::vector<double>& { return s.md; });
}

const FilterMetrics& MetricsTable::at(FilterKind kind) const {
  for (const FilterMetrics& m : filters) {
    if (m.kind == kind) return m;
  }
  throw std::out_of_range("MetricsTable: filter not present");
}

MetricsTable run_monte_carlo(const SimConfig& cfg) { return run(cfg, true); }

MetricsTable run_monte_carlo_serial(const SimConfig& cfg) { return run(cfg, false); }

}  // namespace ukfse
