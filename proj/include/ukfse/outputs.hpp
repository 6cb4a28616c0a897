#pragma once

#include "ukfse/config.hpp"
#include "ukfse/monte_carlo.hpp"

#include <filesystem>
#include <ostream>

namespace ukfse {

/// curves.csv: t,filter,mse_q,md_q (one row per filter instant and filter).
void write_curves_csv(std::ostream& out, const MetricsTable& table);

/// summary.csv: filter,avg_mse_q,avg_md_q,wall_clock_s,failures,sigma_points.
void write_summary_csv(std::ostream& out, const MetricsTable& table);

/// manifest.json: configuration, seed, version and per-filter failure notes.
void write_manifest_json(std::ostream& out, const SimConfig& cfg, const MetricsTable* table);

/// Writes the three files into cfg.out_dir (created if missing).
void write_outputs(const MetricsTable& table, const SimConfig& cfg);

/// t,source,q0,q1,q2,q3,omega1,omega2,omega3 for the truth and each filter.
void write_trajectory_csv(std::ostream& out, const Trajectory& truth, const RunRecord& run);

std::string_view library_version();

}  // namespace ukfse
