// One slot's resource allocation: which users are scheduled on which carrier
// of their serving RRS and at what transmit power, plus feasibility checking
// against the per-RRS power budget and the NOMA multiplexing cap.
#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "smartran/topology.hpp"

namespace smartran {

struct Allocation {
  int num_rrs = 0;
  int num_subcarriers = 0;
  int num_users = 0;
  std::vector<std::uint8_t> assigned;  // (b, n, k) row-major
  std::vector<double> power_w;         // (b, n, k) row-major

  Allocation() = default;
  Allocation(int B, int N, int K)
      : num_rrs(B),
        num_subcarriers(N),
        num_users(K),
        assigned(static_cast<std::size_t>(B) * N * K, 0),
        power_w(static_cast<std::size_t>(B) * N * K, 0.0) {}

  std::size_t idx(int b, int n, int k) const {
    return (static_cast<std::size_t>(b) * num_subcarriers + n) * num_users + k;
  }

  bool is_assigned(int b, int n, int k) const { return assigned[idx(b, n, k)] != 0; }
  double power(int b, int n, int k) const { return power_w[idx(b, n, k)]; }

  void assign(int b, int n, int k, double p_w) {
    assigned[idx(b, n, k)] = 1;
    power_w[idx(b, n, k)] = p_w;
  }

  void clear(int b, int n, int k) {
    assigned[idx(b, n, k)] = 0;
    power_w[idx(b, n, k)] = 0.0;
  }

  // users scheduled on carrier n of RRS b
  std::vector<int> users_on(int b, int n) const {
    std::vector<int> out;
    for (int k = 0; k < num_users; ++k)
      if (is_assigned(b, n, k)) out.push_back(k);
    return out;
  }

  // total power RRS b spends on carrier n
  double carrier_power(int b, int n) const {
    double s = 0.0;
    for (int k = 0; k < num_users; ++k) s += power(b, n, k);
    return s;
  }

  double rrs_power(int b) const {
    double s = 0.0;
    for (int n = 0; n < num_subcarriers; ++n) s += carrier_power(b, n);
    return s;
  }
};

struct Feasibility {
  bool ok = true;
  std::vector<std::string> violations;
};

// Budget boundary is inclusive; a small relative tolerance absorbs the
// floating-point error left by power projection.
inline constexpr double kBudgetRelTol = 1e-9;

inline Feasibility validate_allocation(const Topology& topo, const Allocation& a) {
  if (a.num_rrs != topo.num_rrs() || a.num_subcarriers != topo.num_subcarriers ||
      a.num_users != topo.num_users())
    throw std::invalid_argument("validate_allocation: allocation shape does not match topology");

  Feasibility f;
  auto add = [&f](const std::string& v) {
    f.ok = false;
    f.violations.push_back(v);
  };

  for (int b = 0; b < a.num_rrs; ++b) {
    for (int n = 0; n < a.num_subcarriers; ++n) {
      int count = 0;
      for (int k = 0; k < a.num_users; ++k) {
        double p = a.power(b, n, k);
        bool on = a.is_assigned(b, n, k);
        if (on) count++;
        if (p < 0) {
          std::ostringstream ss;
          ss << "negative power at rrs " << b << " carrier " << n << " user " << k;
          add(ss.str());
        }
        if (p > 0 && !on) {
          std::ostringstream ss;
          ss << "power without assignment at rrs " << b << " carrier " << n << " user " << k;
          add(ss.str());
        }
        if (on && topo.serving_rrs[k] != b) {
          std::ostringstream ss;
          ss << "user " << k << " assigned on rrs " << b << " but served by rrs "
             << topo.serving_rrs[k];
          add(ss.str());
        }
      }
      if (count > topo.l_max) {
        std::ostringstream ss;
        ss << "l_max exceeded at rrs " << b << " carrier " << n << ": " << count << " > "
           << topo.l_max;
        add(ss.str());
      }
    }
    double total = a.rrs_power(b);
    if (total > topo.max_power_w * (1.0 + kBudgetRelTol)) {
      std::ostringstream ss;
      ss << "power budget exceeded at rrs " << b << ": " << total << " W > " << topo.max_power_w
         << " W";
      add(ss.str());
    }
  }
  return f;
}

struct FeasibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace smartran
