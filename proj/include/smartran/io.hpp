// Result emission. Floats print through %.17g so a rerun with the same seed
// produces byte-identical files.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "smartran/config.hpp"

namespace smartran {

struct Decision {
  long slot = 0;
  double x_cnt = 0.0;
  double x_dst = 0.0;
  double reward = 0.0;
};

struct RunSummary {
  int k = 0;
  std::string mode;  // centralized | distributed | smart
  double rate_bps = 0.0;
  double overhead_bits = 0.0;
  double complexity_mac = 0.0;
  double toc = 0.0;
  double wall_seconds = 0.0;
  std::vector<double> per_user_bps;
  std::vector<Decision> decisions;  // smart evaluation only
};

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("io: cannot open " + path + " for writing");
  return os;
}

}  // namespace detail

inline void write_summary_csv(const std::string& path, const std::vector<RunSummary>& rows) {
  auto os = detail::open_out(path);
  os << "k,mode,rate_bps,overhead_bits,complexity_mac,toc\n";
  for (const auto& r : rows)
    os << r.k << ',' << r.mode << ',' << format_g17(r.rate_bps) << ','
       << format_g17(r.overhead_bits) << ',' << format_g17(r.complexity_mac) << ','
       << format_g17(r.toc) << '\n';
}

// one file per figure: k, mode and the single metric of interest
inline void write_figure_csvs(const std::string& dir, const std::vector<RunSummary>& rows) {
  struct Fig {
    const char* file;
    const char* column;
    double RunSummary::*field;
  };
  const Fig figs[] = {
      {"rate_vs_k.csv", "rate_bps", &RunSummary::rate_bps},
      {"overhead_vs_k.csv", "overhead_bits", &RunSummary::overhead_bits},
      {"complexity_vs_k.csv", "complexity_mac", &RunSummary::complexity_mac},
      {"toc_vs_k.csv", "toc", &RunSummary::toc},
  };
  for (const auto& fig : figs) {
    auto os = detail::open_out(dir + "/" + fig.file);
    os << "k,mode," << fig.column << '\n';
    for (const auto& r : rows)
      os << r.k << ',' << r.mode << ',' << format_g17(r.*fig.field) << '\n';
  }
}

inline void write_user_rates_csv(const std::string& path, const std::vector<RunSummary>& rows) {
  auto os = detail::open_out(path);
  os << "k,mode,user,rate_bps\n";
  for (const auto& r : rows)
    for (std::size_t u = 0; u < r.per_user_bps.size(); ++u)
      os << r.k << ',' << r.mode << ',' << u << ',' << format_g17(r.per_user_bps[u]) << '\n';
}

inline void write_decision_log_csv(const std::string& path, const RunSummary& smart) {
  auto os = detail::open_out(path);
  os << "slot,x_cnt,x_dst,reward\n";
  for (const auto& d : smart.decisions)
    os << d.slot << ',' << format_g17(d.x_cnt) << ',' << format_g17(d.x_dst) << ','
       << format_g17(d.reward) << '\n';
}

inline void write_summary_json(const std::string& path, const ScenarioConfig& cfg,
                               const std::vector<RunSummary>& rows) {
  nlohmann::json j;
  j["scenario"] = {{"num_rrs", cfg.num_rrs},
                   {"area_radius_m", cfg.area_radius_m},
                   {"cell_radius_m", cfg.cell_radius_m},
                   {"num_subcarriers", cfg.num_subcarriers},
                   {"bandwidth_hz", cfg.bandwidth_hz},
                   {"max_power_dbm", cfg.max_power_dbm},
                   {"noise_dbm_hz", cfg.noise_dbm_hz},
                   {"l_max", cfg.l_max},
                   {"seed", cfg.seed}};
  j["runs"] = nlohmann::json::array();
  for (const auto& r : rows) {
    j["runs"].push_back({{"k", r.k},
                         {"mode", r.mode},
                         {"rate_bps", r.rate_bps},
                         {"overhead_bits", r.overhead_bits},
                         {"complexity_mac", r.complexity_mac},
                         {"toc", r.toc},
                         {"wall_seconds", r.wall_seconds}});
  }
  auto os = detail::open_out(path);
  os << j.dump(2) << '\n';
}

// writes the full output set for one sweep into dir
inline void emit_results(const std::string& dir, const ScenarioConfig& cfg,
                         const std::vector<RunSummary>& rows) {
  std::filesystem::create_directories(dir);
  write_summary_csv(dir + "/summary.csv", rows);
  write_figure_csvs(dir, rows);
  write_user_rates_csv(dir + "/user_rates.csv", rows);
  for (const auto& r : rows)
    if (r.mode == "smart" && !r.decisions.empty())
      write_decision_log_csv(dir + "/decision_log_k" + std::to_string(r.k) + ".csv", r);
  write_summary_json(dir + "/summary.json", cfg, rows);
}

}  // namespace smartran
