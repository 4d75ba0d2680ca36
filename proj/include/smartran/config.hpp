// Scenario configuration: two built-in profiles (full-scale and a fast
// profile sized for CI) overlaid by an INI-style file. Unknown keys are
// rejected by name so typos cannot silently fall back to defaults.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "smartran/metrics.hpp"
#include "smartran/topology.hpp"

namespace smartran {

struct ScenarioConfig {
  // [scenario]
  int num_rrs = 4;
  double area_radius_m = 500.0;
  double cell_radius_m = 100.0;
  int num_subcarriers = 32;
  double bandwidth_hz = 10e6;
  double max_power_dbm = 40.0;
  double noise_dbm_hz = -174.0;
  int l_max = 2;
  int num_users = 40;
  std::vector<int> user_counts = {40, 80, 120, 160, 200};

  // [bits]
  BitWidths bits;

  // [toc]
  double w_overhead = 0.1;
  double w_complexity = 0.1;
  double overhead_ref_bits = 0.0;   // 0 = derive from the centralized scheme at ref_users
  double complexity_ref_mac = 0.0;  // 0 = derive likewise
  int ref_users = 40;

  // [train]
  int train_slots = 20000;
  int eval_slots = 2000;
  int update_every = 1;
  int batch = 64;
  std::size_t buffer_capacity = 100000;
  double lr = 3e-4;
  double gamma_rap = 0.5;
  double gamma_sdn = 0.95;
  double alpha = 0.2;
  double tau = 0.005;
  double gumbel_tau = 1.0;
  std::vector<int> hidden_cnt = {128, 128};
  std::vector<int> hidden_dst = {32, 32};
  std::vector<int> hidden_sdn = {64, 64};
  int normalizer_warmup = 500;
  std::uint64_t seed = 1;

  // [sdn]
  int sdn_period = 50;
  double sdn_ema_beta = 0.05;
  std::string sdn_learner = "sac";  // sac | dqn
  double sdn_epsilon = 0.1;

  static ScenarioConfig full() { return {}; }

  // small nets, few carriers, tight geometry: minutes instead of hours
  static ScenarioConfig fast() {
    ScenarioConfig c;
    c.area_radius_m = 350.0;
    c.num_subcarriers = 8;
    c.user_counts = {8, 24, 48};
    c.train_slots = 1500;
    c.eval_slots = 300;
    c.update_every = 2;
    c.batch = 32;
    c.hidden_cnt = {64, 64};
    c.hidden_dst = {16, 16};
    c.hidden_sdn = {32, 32};
    c.normalizer_warmup = 200;
    return c;
  }

  TopologyParams topology_params(int k) const {
    TopologyParams p;
    p.num_rrs = num_rrs;
    p.area_radius_m = area_radius_m;
    p.cell_radius_m = cell_radius_m;
    p.num_users = k;
    p.num_subcarriers = num_subcarriers;
    p.subcarrier_bandwidth_hz = bandwidth_hz / num_subcarriers;
    p.max_power_w = dbm_to_watt(max_power_dbm);
    p.noise_psd_w_hz = dbm_to_watt(noise_dbm_hz);
    p.l_max = l_max;
    return p;
  }

  void validate() const {
    std::vector<std::string> bad;
    auto need = [&bad](bool ok, const char* msg) {
      if (!ok) bad.push_back(msg);
    };
    need(num_rrs >= 1, "num_rrs must be >= 1");
    need(area_radius_m > 0, "area_radius_m must be positive");
    need(cell_radius_m > 0, "cell_radius_m must be positive");
    need(num_subcarriers >= 1, "num_subcarriers must be >= 1");
    need(bandwidth_hz > 0, "bandwidth_hz must be positive");
    need(l_max >= 1, "l_max must be >= 1");
    need(num_users >= 0, "num_users must be >= 0");
    need(!user_counts.empty(), "user_counts must be nonempty");
    for (int k : user_counts) need(k >= 1, "user_counts entries must be >= 1");
    need(std::is_sorted(user_counts.begin(), user_counts.end()),
         "user_counts must be ascending");
    need(bits.csi > 0 && bits.subcarrier > 0 && bits.power > 0, "bit widths must be positive");
    need(w_overhead >= 0 && w_complexity >= 0, "toc weights must be >= 0");
    need(overhead_ref_bits >= 0 && complexity_ref_mac >= 0, "toc refs must be >= 0 (0 = auto)");
    need(ref_users >= 1, "ref_users must be >= 1");
    need(train_slots >= 0, "train_slots must be >= 0");
    need(eval_slots >= 0, "eval_slots must be >= 0");
    need(update_every >= 1, "update_every must be >= 1");
    need(batch >= 1, "batch must be >= 1");
    need(buffer_capacity >= static_cast<std::size_t>(batch),
         "buffer_capacity must hold at least one batch");
    need(lr > 0, "lr must be positive");
    need(gamma_rap >= 0 && gamma_rap < 1, "gamma_rap must be in [0, 1)");
    need(gamma_sdn >= 0 && gamma_sdn < 1, "gamma_sdn must be in [0, 1)");
    need(alpha >= 0, "alpha must be >= 0");
    need(tau > 0 && tau <= 1, "tau must be in (0, 1]");
    need(gumbel_tau > 0, "gumbel_tau must be positive");
    need(!hidden_cnt.empty() && !hidden_dst.empty() && !hidden_sdn.empty(),
         "hidden layer lists must be nonempty");
    for (const auto* h : {&hidden_cnt, &hidden_dst, &hidden_sdn})
      for (int w : *h) need(w >= 1, "hidden widths must be >= 1");
    need(normalizer_warmup >= 1, "normalizer_warmup must be >= 1");
    need(sdn_period >= 1, "sdn_period must be >= 1");
    need(sdn_ema_beta > 0 && sdn_ema_beta <= 1, "sdn_ema_beta must be in (0, 1]");
    need(sdn_learner == "sac" || sdn_learner == "dqn", "sdn_learner must be sac or dqn");
    need(sdn_epsilon >= 0 && sdn_epsilon <= 1, "sdn_epsilon must be in [0, 1]");
    if (!bad.empty()) {
      std::string msg = "config: invalid values:";
      for (const auto& b : bad) msg += "\n  - " + b;
      throw std::invalid_argument(msg);
    }
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline int parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("config: bad integer '" + v + "' for " + key);
  }
}

inline double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("config: bad number '" + v + "' for " + key);
  }
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("config: bad integer '" + v + "' for " + key);
  }
}

inline std::vector<int> parse_int_list(const std::string& v, const std::string& key) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("config: empty list entry for " + key);
    out.push_back(parse_int(item, key));
  }
  if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
  return out;
}

}  // namespace detail

// overlays `text` onto cfg; an empty file is a valid no-op
inline void parse_config_text(ScenarioConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section header at line " +
                                    std::to_string(lineno));
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "bits" && section != "toc" && section != "train" &&
          section != "sdn")
        throw std::invalid_argument("config: unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " + std::to_string(lineno));
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));
    std::string where = "[" + section + "] " + key;

    auto unknown = [&] {
      throw std::invalid_argument("config: unknown key '" + key + "' in [" + section + "]");
    };
    if (section == "scenario") {
      if (key == "num_rrs") cfg.num_rrs = detail::parse_int(val, where);
      else if (key == "area_radius_m") cfg.area_radius_m = detail::parse_double(val, where);
      else if (key == "cell_radius_m") cfg.cell_radius_m = detail::parse_double(val, where);
      else if (key == "num_subcarriers") cfg.num_subcarriers = detail::parse_int(val, where);
      else if (key == "bandwidth_hz") cfg.bandwidth_hz = detail::parse_double(val, where);
      else if (key == "max_power_dbm") cfg.max_power_dbm = detail::parse_double(val, where);
      else if (key == "noise_dbm_hz") cfg.noise_dbm_hz = detail::parse_double(val, where);
      else if (key == "l_max") cfg.l_max = detail::parse_int(val, where);
      else if (key == "num_users") cfg.num_users = detail::parse_int(val, where);
      else if (key == "user_counts") cfg.user_counts = detail::parse_int_list(val, where);
      else unknown();
    } else if (section == "bits") {
      if (key == "csi") cfg.bits.csi = detail::parse_int(val, where);
      else if (key == "subcarrier") cfg.bits.subcarrier = detail::parse_int(val, where);
      else if (key == "power") cfg.bits.power = detail::parse_int(val, where);
      else unknown();
    } else if (section == "toc") {
      if (key == "w_overhead") cfg.w_overhead = detail::parse_double(val, where);
      else if (key == "w_complexity") cfg.w_complexity = detail::parse_double(val, where);
      else if (key == "overhead_ref_bits") cfg.overhead_ref_bits = detail::parse_double(val, where);
      else if (key == "complexity_ref_mac")
        cfg.complexity_ref_mac = detail::parse_double(val, where);
      else if (key == "ref_users") cfg.ref_users = detail::parse_int(val, where);
      else unknown();
    } else if (section == "train") {
      if (key == "train_slots") cfg.train_slots = detail::parse_int(val, where);
      else if (key == "eval_slots") cfg.eval_slots = detail::parse_int(val, where);
      else if (key == "update_every") cfg.update_every = detail::parse_int(val, where);
      else if (key == "batch") cfg.batch = detail::parse_int(val, where);
      else if (key == "buffer_capacity")
        cfg.buffer_capacity = static_cast<std::size_t>(detail::parse_u64(val, where));
      else if (key == "lr") cfg.lr = detail::parse_double(val, where);
      else if (key == "gamma_rap") cfg.gamma_rap = detail::parse_double(val, where);
      else if (key == "gamma_sdn") cfg.gamma_sdn = detail::parse_double(val, where);
      else if (key == "alpha") cfg.alpha = detail::parse_double(val, where);
      else if (key == "tau") cfg.tau = detail::parse_double(val, where);
      else if (key == "gumbel_tau") cfg.gumbel_tau = detail::parse_double(val, where);
      else if (key == "hidden_cnt") cfg.hidden_cnt = detail::parse_int_list(val, where);
      else if (key == "hidden_dst") cfg.hidden_dst = detail::parse_int_list(val, where);
      else if (key == "hidden_sdn") cfg.hidden_sdn = detail::parse_int_list(val, where);
      else if (key == "normalizer_warmup") cfg.normalizer_warmup = detail::parse_int(val, where);
      else if (key == "seed") cfg.seed = detail::parse_u64(val, where);
      else unknown();
    } else if (section == "sdn") {
      if (key == "period") cfg.sdn_period = detail::parse_int(val, where);
      else if (key == "ema_beta") cfg.sdn_ema_beta = detail::parse_double(val, where);
      else if (key == "learner") cfg.sdn_learner = val;
      else if (key == "epsilon") cfg.sdn_epsilon = detail::parse_double(val, where);
      else unknown();
    } else {
      throw std::invalid_argument("config: key '" + key + "' before any section header");
    }
  }
}

inline void load_config_file(ScenarioConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  parse_config_text(cfg, ss.str());
}

}  // namespace smartran
