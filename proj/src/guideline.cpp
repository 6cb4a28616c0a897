#include "ukfse/guideline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ukfse::guideline {

double error_step(double e, double omega_norm, double alpha, double h) {
  const double a = 1.0 - alpha * h * e;
  return -1.0 + (1.0 + e) * (a * a + h * h * omega_norm * omega_norm / 4.0);
}

double decay_bound(double alpha_h, double epsilon) {
  const double ah = alpha_h, eps = epsilon;
  return ah * (1.0 - eps) * (2.0 - ah * eps) *
         (2.0 - 2.0 * ah - ah * (2.0 - ah) * eps + ah * ah * eps * eps);
}

std::optional<double> delta(double h, double alpha_h, double beta, double epsilon, double U) {
  const double ah = alpha_h, eps = epsilon;
  const double numerator =
      (1.0 - 2.0 * ah * (1.0 - eps) + ah * ah * eps * (1.0 + eps)) * eps * (1.0 + eps) * U * U /
          2.0 +
      (1.0 + eps) * (1.0 + eps) * h * h * U * U * U * U / 16.0;
  const double denominator = decay_bound(ah, eps) - beta;
  if (!(denominator > 0.0) || numerator < 0.0) return std::nullopt;
  return h * std::sqrt(numerator / denominator);
}

GuidelineResult check_conditions(const GuidelineInput& in) {
  GuidelineResult r;
  const double ah = in.alpha * in.h;
  r.alpha_upper = 2.0 / (3.0 * in.h);
  r.cond1_ok = ah > 0.0 && ah < 2.0 / 3.0;
  r.decay_bound = decay_bound(ah, in.epsilon);
  r.cond2_ok = in.beta > 0.0 && in.beta < r.decay_bound && r.decay_bound < 1.0;
  r.delta = delta(in.h, ah, in.beta, in.epsilon, in.U);
  r.delta0 = delta(in.h, ah, 0.0, in.epsilon, in.U);
  r.cond3_ok = r.delta.has_value() && *r.delta < in.epsilon;

  std::ostringstream note;
  if (!(in.epsilon > 0.0 && in.epsilon < 1.0)) note << "epsilon must lie in (0, 1); ";
  if (!(in.U >= 0.0)) note << "U must be non-negative; ";
  if (!r.cond2_ok && r.cond1_ok) {
    note << "choose 0 < beta < " << r.decay_bound << " (shrinking alpha*h always makes this "
         << "bound feasible); ";
  }
  if (r.cond1_ok && r.cond2_ok && !r.cond3_ok) {
    note << "delta >= epsilon: reduce h at fixed alpha*h and beta; ";
  }
  r.note = note.str();
  if (!(in.epsilon > 0.0 && in.epsilon < 1.0)) r.cond2_ok = r.cond3_ok = false;
  return r;
}

namespace {

struct TrajectoryOutcome {
  bool violated = false;
  bool entered = false;
  std::int64_t entry_step = 0;
  double max_post_entry = 0.0;
  std::int64_t violation_step = 0;
  double violation_value = 0.0;
  double e0 = 0.0;
};

TrajectoryOutcome simulate_trajectory(const GuidelineInput& in, double dlt,
                                      std::int64_t guaranteed_entry, std::int64_t index,
                                      std::int64_t n_trajectories, std::int64_t n_steps,
                                      std::uint64_t seed) {
  TrajectoryOutcome out;
  Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(index));
  const bool pinned = index % 2 == 1;
  const double frac =
      n_trajectories > 1 ? static_cast<double>(index) / static_cast<double>(n_trajectories - 1)
                         : 0.0;
  double e = -in.epsilon + 2.0 * in.epsilon * frac;
  out.e0 = e;

  auto fail = [&](std::int64_t k, double value) {
    out.violated = true;
    out.violation_step = k;
    out.violation_value = value;
  };

  if (std::abs(e) < dlt) {
    out.entered = true;
    out.max_post_entry = std::abs(e);
  }
  for (std::int64_t k = 1; k <= n_steps; ++k) {
    const double w = pinned ? in.U : in.U * rng.uniform();
    e = error_step(e, w, in.alpha, in.h);
    const double ae = std::abs(e);
    if (!(ae <= in.epsilon)) {
      fail(k, e);
      return out;
    }
    if (out.entered) {
      out.max_post_entry = std::max(out.max_post_entry, ae);
      if (!(ae < dlt)) {
        fail(k, e);
        return out;
      }
    } else if (ae < dlt) {
      out.entered = true;
      out.entry_step = k;
      out.max_post_entry = ae;
    }
  }
  if (!out.entered && guaranteed_entry <= n_steps) fail(n_steps, e);
  return out;
}

AttractorReport run(const GuidelineInput& in, std::int64_t n_trajectories, std::int64_t n_steps,
                    std::uint64_t seed, bool parallel) {
  const GuidelineResult cond = check_conditions(in);
  if (!cond.all_ok()) {
    throw std::invalid_argument("verify_attractor: conditions do not hold for these inputs");
  }
  const double dlt = *cond.delta;
  // Worst-case entry time implied by V(e_{k+1}) ≤ (1 − β)V(e_k).
  const double bound = std::log(dlt * dlt / (in.epsilon * in.epsilon)) / std::log(1.0 - in.beta);
  const auto guaranteed_entry = static_cast<std::int64_t>(std::ceil(std::max(bound, 0.0)));

  std::vector<TrajectoryOutcome> outcomes(static_cast<std::size_t>(n_trajectories));
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n_trajectories; ++i) {
      outcomes[static_cast<std::size_t>(i)] =
          simulate_trajectory(in, dlt, guaranteed_entry, i, n_trajectories, n_steps, seed);
    }
  } else {
    for (std::int64_t i = 0; i < n_trajectories; ++i) {
      outcomes[static_cast<std::size_t>(i)] =
          simulate_trajectory(in, dlt, guaranteed_entry, i, n_trajectories, n_steps, seed);
    }
  }

  AttractorReport rep;
  rep.trajectories = n_trajectories;
  rep.steps = n_steps;
  rep.delta = dlt;
  for (std::int64_t i = 0; i < n_trajectories; ++i) {
    const TrajectoryOutcome& o = outcomes[static_cast<std::size_t>(i)];
    if (o.violated) {
      if (rep.violations == 0) {
        std::ostringstream ce;
        ce << "trajectory " << i << " (e0 = " << o.e0 << ", " << (i % 2 ? "pinned" : "uniform")
           << " omega) reached e = " << o.violation_value << " at step " << o.violation_step;
        rep.counterexample = ce.str();
      }
      ++rep.violations;
    }
    if (!o.entered) {
      ++rep.not_entered;
      continue;
    }
    rep.max_entry_step = std::max(rep.max_entry_step, o.entry_step);
    rep.max_post_entry_abs_e = std::max(rep.max_post_entry_abs_e, o.max_post_entry);
  }
  return rep;
}

}  // namespace

AttractorReport verify_attractor(const GuidelineInput& in, std::int64_t n_trajectories,
                                 std::int64_t n_steps, std::uint64_t seed) {
  return run(in, n_trajectories, n_steps, seed, true);
}

AttractorReport verify_attractor_serial(const GuidelineInput& in, std::int64_t n_trajectories,
                                        std::int64_t n_steps, std::uint64_t seed) {
  return run(in, n_trajectories, n_steps, seed, false);
}

}  // namespace ukfse::guideline
