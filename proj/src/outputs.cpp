#include "ukfse/outputs.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

#ifndef UKFSE_VERSION
#define UKFSE_VERSION "0.0.0"
#endif

namespace ukfse {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string_view library_version() { return UKFSE_VERSION; }

void write_curves_csv(std::ostream& out, const MetricsTable& table) {
  out << "t,filter,mse_q,md_q\n";
  for (std::size_t k = 0; k < table.t.size(); ++k) {
    for (const FilterMetrics& m : table.filters) {
      out << num(table.t[k]) << ',' << filter_name(m.kind) << ',' << num(m.mse_curve[k]) << ','
          << num(m.md_curve[k]) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const MetricsTable& table) {
  out << "filter,avg_mse_q,avg_md_q,wall_clock_s,failures,sigma_points\n";
  for (const FilterMetrics& m : table.filters) {
    out << filter_name(m.kind) << ',' << num(m.avg_mse_q) << ',' << num(m.avg_md_q) << ','
        << num(m.wall_clock_s) << ',' << m.failures << ',' << m.sigma_points << '\n';
  }
}

void write_manifest_json(std::ostream& out, const SimConfig& cfg, const MetricsTable* table) {
  nlohmann::ordered_json j;
  j["version"] = std::string(library_version());
  j["seed"] = cfg.master_seed;
  nlohmann::ordered_json c;
  for (const auto& [key, value] : config_entries(cfg)) c[key] = value;
  j["config"] = c;
  if (table != nullptr) {
    nlohmann::ordered_json f = nlohmann::ordered_json::array();
    for (const FilterMetrics& m : table->filters) {
      f.push_back({{"filter", std::string(filter_name(m.kind))},
                   {"runs_used", m.runs_used},
                   {"failures", m.failures},
                   {"first_failure", m.first_failure}});
    }
    j["filters"] = f;
  }
  out << j.dump(2) << '\n';
}

void write_outputs(const MetricsTable& table, const SimConfig& cfg) {
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "curves.csv");
    write_curves_csv(out, table);
  }
  {
    auto out = open_out(dir / "summary.csv");
    write_summary_csv(out, table);
  }
  auto out = open_out(dir / "manifest.json");
  write_manifest_json(out, cfg, &table);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& truth, const RunRecord& run) {
  out << "t,source,q0,q1,q2,q3,omega1,omega2,omega3\n";
  auto row = [&](double t, std::string_view source, const StateVector& x) {
    out << num(t) << ',' << source;
    for (int i = 0; i < 7; ++i) out << ',' << num(x(i));
    out << '\n';
  };
  for (std::size_t k = 0; k < truth.t.size(); ++k) {
    row(truth.t[k], "truth", truth.states[k].to_vector());
    for (const FilterSeries& s : run.filters) {
      if (k < s.x_hat.size()) row(truth.t[k], filter_name(s.kind), s.x_hat[k]);
    }
  }
}

}  // namespace ukfse
