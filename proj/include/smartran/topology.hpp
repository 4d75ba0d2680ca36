// Network geometry: serving sites (RRSs) on a fixed symmetric ring inside the
// coverage disk, users dropped uniformly inside their serving cell.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "smartran/rng.hpp"

namespace smartran {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct TopologyParams {
  int num_rrs = 4;
  double area_radius_m = 500.0;
  double cell_radius_m = 100.0;
  int num_users = 40;
  int num_subcarriers = 32;
  double subcarrier_bandwidth_hz = 10e6 / 32;
  double max_power_w = 10.0;       // per RRS
  double noise_psd_w_hz = 3.9810717055349695e-21;  // -174 dBm/Hz
  int l_max = 2;                   // max co-scheduled users per (rrs, subcarrier)
};

struct Topology {
  double area_radius_m = 0.0;
  double cell_radius_m = 0.0;
  std::vector<Vec2> rrs_positions;   // B entries
  std::vector<Vec2> user_positions;  // K entries
  std::vector<int> serving_rrs;      // K entries, user -> rrs
  int num_subcarriers = 0;
  double subcarrier_bandwidth_hz = 0.0;
  double max_power_w = 0.0;
  double noise_psd_w_hz = 0.0;
  int l_max = 2;

  int num_rrs() const { return static_cast<int>(rrs_positions.size()); }
  int num_users() const { return static_cast<int>(user_positions.size()); }

  std::vector<int> users_of(int b) const {
    std::vector<int> out;
    for (int k = 0; k < num_users(); ++k)
      if (serving_rrs[k] == b) out.push_back(k);
    return out;
  }

  std::vector<int> users_per_rrs() const {
    std::vector<int> counts(num_rrs(), 0);
    for (int s : serving_rrs) counts[s]++;
    return counts;
  }

  // noise power per subcarrier, W
  double noise_per_subcarrier_w() const { return noise_psd_w_hz * subcarrier_bandwidth_hz; }
};

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

// Sites sit on a ring of radius area/2 (single site at the center). Users are
// assigned to sites round-robin and placed uniformly inside the serving cell.
inline Topology generate_topology(const TopologyParams& p, std::uint64_t seed) {
  if (p.num_rrs < 1) throw std::invalid_argument("generate_topology: num_rrs must be >= 1");
  if (p.num_users < 0) throw std::invalid_argument("generate_topology: num_users must be >= 0");
  if (p.num_subcarriers < 1)
    throw std::invalid_argument("generate_topology: num_subcarriers must be >= 1");
  if (p.area_radius_m <= 0 || p.cell_radius_m <= 0)
    throw std::invalid_argument("generate_topology: radii must be positive");
  if (p.max_power_w <= 0) throw std::invalid_argument("generate_topology: max_power_w must be > 0");
  if (p.subcarrier_bandwidth_hz <= 0 || p.noise_psd_w_hz <= 0)
    throw std::invalid_argument("generate_topology: bandwidth and noise psd must be positive");
  if (p.l_max < 1) throw std::invalid_argument("generate_topology: l_max must be >= 1");

  const double ring = (p.num_rrs == 1) ? 0.0 : p.area_radius_m / 2.0;
  if (ring + p.cell_radius_m > p.area_radius_m + 1e-9)
    throw std::invalid_argument(
        "generate_topology: cells do not fit inside the area (ring " + std::to_string(ring) +
        " m + cell " + std::to_string(p.cell_radius_m) + " m > area " +
        std::to_string(p.area_radius_m) + " m)");

  Topology t;
  t.area_radius_m = p.area_radius_m;
  t.cell_radius_m = p.cell_radius_m;
  t.num_subcarriers = p.num_subcarriers;
  t.subcarrier_bandwidth_hz = p.subcarrier_bandwidth_hz;
  t.max_power_w = p.max_power_w;
  t.noise_psd_w_hz = p.noise_psd_w_hz;
  t.l_max = p.l_max;

  t.rrs_positions.resize(p.num_rrs);
  for (int b = 0; b < p.num_rrs; ++b) {
    double ang = 2.0 * M_PI * b / p.num_rrs;
    t.rrs_positions[b] = {ring * std::cos(ang), ring * std::sin(ang)};
  }

  Rng rng(seed, stream::topology);
  t.user_positions.resize(p.num_users);
  t.serving_rrs.resize(p.num_users);
  for (int k = 0; k < p.num_users; ++k) {
    int b = k % p.num_rrs;
    double r = p.cell_radius_m * std::sqrt(rng.uniform());
    double ang = 2.0 * M_PI * rng.uniform();
    t.serving_rrs[k] = b;
    t.user_positions[k] = {t.rrs_positions[b].x + r * std::cos(ang),
                           t.rrs_positions[b].y + r * std::sin(ang)};
  }
  return t;
}

}  // namespace smartran
