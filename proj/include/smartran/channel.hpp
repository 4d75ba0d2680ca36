// Per-slot channel realizations: distance path loss times unit-mean
// exponential fast fading (Rayleigh envelope), i.i.d. across users, sites,
// subcarriers and slots. Deterministic per (seed, slot).
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "smartran/rng.hpp"
#include "smartran/topology.hpp"

namespace smartran {

// 128.1 + 37.6 log10(d/km), distance clamped below at 1 m
inline double path_loss_db(double d_m) {
  double d = std::max(d_m, 1.0);
  return 128.1 + 37.6 * std::log10(d / 1000.0);
}

inline double path_gain_linear(double d_m) { return std::pow(10.0, -path_loss_db(d_m) / 10.0); }

struct ChannelState {
  int num_users = 0;
  int num_rrs = 0;
  int num_subcarriers = 0;
  int slot_index = 0;
  std::vector<double> gains;  // (k, b, n) row-major, linear power gains

  double gain(int k, int b, int n) const {
    return gains[(static_cast<std::size_t>(k) * num_rrs + b) * num_subcarriers + n];
  }
  double& gain(int k, int b, int n) {
    return gains[(static_cast<std::size_t>(k) * num_rrs + b) * num_subcarriers + n];
  }

  // total gain-weighted power RRS b radiates toward user k on carrier n is
  // assembled by the rate model; this type only stores the raw tensor
};

inline ChannelState sample_channels(const Topology& topo, int slot, std::uint64_t seed) {
  ChannelState ch;
  ch.num_users = topo.num_users();
  ch.num_rrs = topo.num_rrs();
  ch.num_subcarriers = topo.num_subcarriers;
  ch.slot_index = slot;
  ch.gains.resize(static_cast<std::size_t>(ch.num_users) * ch.num_rrs * ch.num_subcarriers);

  Rng rng(seed, stream::channel, static_cast<std::uint64_t>(slot));
  std::size_t i = 0;
  for (int k = 0; k < ch.num_users; ++k) {
    for (int b = 0; b < ch.num_rrs; ++b) {
      double pl = path_gain_linear(distance(topo.user_positions[k], topo.rrs_positions[b]));
      for (int n = 0; n < ch.num_subcarriers; ++n) {
        double fading = rng.exponential();
        if (fading < 1e-300) fading = 1e-300;  // keep gains strictly positive
        ch.gains[i++] = pl * fading;
      }
    }
  }
  return ch;
}

}  // namespace smartran
