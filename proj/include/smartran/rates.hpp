// Achievable downlink PD-NOMA rates for one slot. Per (rrs, carrier) the
// co-scheduled users are SIC-ordered by descending channel gain: a receiver
// cancels everything sent to weaker-gain users and keeps the stronger-gain
// users' power as interference. Equal gains rank the lower user index as
// weaker so the ordering is total.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "smartran/allocation.hpp"
#include "smartran/channel.hpp"
#include "smartran/topology.hpp"

namespace smartran {

struct RateReport {
  std::vector<double> per_user_bps;             // K entries
  std::vector<std::vector<double>> per_carrier_bps;  // [b][n]
  double total_bps = 0.0;
};

inline RateReport compute_rates(const Topology& topo, const ChannelState& ch,
                                const Allocation& alloc) {
  auto feas = validate_allocation(topo, alloc);
  if (!feas.ok) {
    std::string msg = "compute_rates: infeasible allocation:";
    for (const auto& v : feas.violations) msg += "\n  " + v;
    throw FeasibilityError(msg);
  }

  const int B = topo.num_rrs();
  const int N = topo.num_subcarriers;
  const int K = topo.num_users();
  const double noise_w = topo.noise_per_subcarrier_w();
  const double w_sc = topo.subcarrier_bandwidth_hz;

  RateReport rep;
  rep.per_user_bps.assign(K, 0.0);
  rep.per_carrier_bps.assign(B, std::vector<double>(N, 0.0));

  // carrier_power[b][n], reused for inter-cell interference
  std::vector<std::vector<double>> cpow(B, std::vector<double>(N, 0.0));
  for (int b = 0; b < B; ++b)
    for (int n = 0; n < N; ++n) cpow[b][n] = alloc.carrier_power(b, n);

  for (int b = 0; b < B; ++b) {
    for (int n = 0; n < N; ++n) {
      auto users = alloc.users_on(b, n);
      if (users.empty()) continue;
      // descending gain; ties rank the lower index as weaker (later in SIC)
      std::sort(users.begin(), users.end(), [&](int i, int j) {
        double gi = ch.gain(i, b, n), gj = ch.gain(j, b, n);
        if (gi != gj) return gi > gj;
        return i > j;
      });
      double stronger_power = 0.0;  // sum of powers ranked stronger than the current user
      for (int k : users) {
        double g = ch.gain(k, b, n);
        double p = alloc.power(b, n, k);
        double inter = 0.0;
        for (int b2 = 0; b2 < B; ++b2)
          if (b2 != b) inter += ch.gain(k, b2, n) * cpow[b2][n];
        double sinr = p * g / (g * stronger_power + inter + noise_w);
        double r = w_sc * std::log2(1.0 + sinr);
        rep.per_user_bps[k] += r;
        rep.per_carrier_bps[b][n] += r;
        stronger_power += p;
      }
    }
  }
  rep.total_bps = std::accumulate(rep.per_user_bps.begin(), rep.per_user_bps.end(), 0.0);
  return rep;
}

}  // namespace smartran
