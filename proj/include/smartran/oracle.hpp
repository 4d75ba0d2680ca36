// Exhaustive grid search over allocations for very small problems: every
// subset of at most l_max users per (cell, carrier), every assigned user at a
// power fraction from a uniform grid, subject to the per-cell budget. Used as
// a ground-truth ceiling when judging trained agents.
#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "smartran/allocation.hpp"
#include "smartran/channel.hpp"
#include "smartran/rates.hpp"
#include "smartran/topology.hpp"

namespace smartran {

struct OracleResult {
  double best_rate_bps = 0.0;
  Allocation best;
  long long leaves_evaluated = 0;
};

namespace detail {

struct CarrierOption {
  std::vector<std::pair<int, double>> picks;  // (user, power fraction of P_max)
  double f_sum = 0.0;
};

// all user subsets of size <= l_max with per-user grid levels 1..G-1
// (zero-power assignment is dominated by leaving the user off)
inline std::vector<CarrierOption> carrier_options(const std::vector<int>& users, int l_max,
                                                  int levels) {
  std::vector<CarrierOption> out;
  out.push_back({});  // idle carrier
  const int n = static_cast<int>(users.size());
  auto levels_of = [&](auto&& self, const std::vector<int>& chosen, std::size_t at,
                       CarrierOption acc) -> void {
    if (at == chosen.size()) {
      out.push_back(acc);
      return;
    }
    for (int lv = 1; lv < levels; ++lv) {
      CarrierOption next = acc;
      double f = static_cast<double>(lv) / (levels - 1);
      next.picks.push_back({chosen[at], f});
      next.f_sum += f;
      self(self, chosen, at + 1, std::move(next));
    }
  };
  for (int sz = 1; sz <= l_max && sz <= n; ++sz) {
    std::vector<int> idx(sz);
    for (int i = 0; i < sz; ++i) idx[i] = i;
    while (true) {  // lexicographic subsets of size sz
      std::vector<int> chosen;
      for (int i : idx) chosen.push_back(users[i]);
      levels_of(levels_of, chosen, 0, {});
      int p = sz - 1;
      while (p >= 0 && idx[p] == n - sz + p) --p;
      if (p < 0) break;
      idx[p]++;
      for (int q = p + 1; q < sz; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  return out;
}

}  // namespace detail

inline OracleResult brute_force_best_rate(const Topology& topo, const ChannelState& ch,
                                          int power_levels) {
  const int B = topo.num_rrs(), N = topo.num_subcarriers, K = topo.num_users();
  if (power_levels < 2) throw std::invalid_argument("oracle: need at least 2 power levels");
  if (B > 2 || K > 4 || N > 4 || power_levels > 6 || topo.l_max > 2) {
    std::ostringstream ss;
    ss << "oracle: search space too large (limits: 2 cells, 4 users, 4 carriers, 6 levels, "
          "l_max 2; got "
       << B << " cells, " << K << " users, " << N << " carriers, " << power_levels
       << " levels, l_max " << topo.l_max << ")";
    throw std::runtime_error(ss.str());
  }

  std::vector<std::vector<detail::CarrierOption>> options(B);
  double combos = 1.0;
  for (int b = 0; b < B; ++b) {
    options[b] = detail::carrier_options(topo.users_of(b), topo.l_max, power_levels);
    for (int n = 0; n < N; ++n) combos *= static_cast<double>(options[b].size());
  }
  if (combos > 1e7) {
    std::ostringstream ss;
    ss << "oracle: search space too large (" << combos << " raw combinations > 1e7)";
    throw std::runtime_error(ss.str());
  }

  OracleResult res;
  res.best = Allocation(B, N, K);
  Allocation work(B, N, K);
  std::vector<double> f_used(B, 0.0);

  // depth walks carriers cell-major: (b, n) = (depth / N, depth % N)
  auto walk = [&](auto&& self, int depth) -> void {
    if (depth == B * N) {
      RateReport rep = compute_rates(topo, ch, work);
      res.leaves_evaluated++;
      if (rep.total_bps > res.best_rate_bps) {
        res.best_rate_bps = rep.total_bps;
        res.best = work;
      }
      return;
    }
    const int b = depth / N, n = depth % N;
    for (const auto& opt : options[b]) {
      if (f_used[b] + opt.f_sum > 1.0 + 1e-12) continue;  // budget prune
      for (const auto& [user, f] : opt.picks) work.assign(b, n, user, f * topo.max_power_w);
      f_used[b] += opt.f_sum;
      self(self, depth + 1);
      f_used[b] -= opt.f_sum;
      for (const auto& [user, f] : opt.picks) work.clear(b, n, user);
    }
  };
  walk(walk, 0);
  return res;
}

}  // namespace smartran
