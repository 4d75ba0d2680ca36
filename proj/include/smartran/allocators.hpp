// Resource-allocation agents for the two regimes.
//
// Action decoding per cell: heads are ordered (carrier, layer); each picks
// {0 = idle, 1..k_max = local user slot}. Picks of empty slots and repeat
// picks of a user already on that carrier are dropped. Raw power fractions
// f = (c+1)/2 from the tanh-squashed continuous outputs are projected onto the
// cell budget as p = f * P_max / max(1, sum_cell f), so the budget can never
// be exceeded but may be left partly unused.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "smartran/allocation.hpp"
#include "smartran/channel.hpp"
#include "smartran/codec.hpp"
#include "smartran/metrics.hpp"
#include "smartran/rates.hpp"
#include "smartran/sac.hpp"
#include "smartran/topology.hpp"

namespace smartran {

// decodes one cell's slice of heads/fractions into assignments on `out`;
// cats/cont index (carrier * l_max + layer), both of length N * l_max
inline void decode_cell_action(const Topology& topo, int b, int k_max,
                               const std::vector<int>& cats, const VectorXd& cont,
                               Allocation& out) {
  const int N = topo.num_subcarriers, L = topo.l_max;
  if (static_cast<int>(cats.size()) != N * L || cont.size() != N * L)
    throw std::invalid_argument("decode_cell_action: action length mismatch");
  auto users = topo.users_of(b);

  struct Pick {
    int n, user;
    double f;
  };
  std::vector<Pick> picks;
  double f_sum = 0.0;
  for (int n = 0; n < N; ++n) {
    for (int l = 0; l < L; ++l) {
      int c = cats[n * L + l];
      if (c == 0) continue;  // idle
      int slot = c - 1;
      if (slot >= static_cast<int>(users.size())) continue;  // empty user slot
      int user = users[slot];
      bool dup = false;
      for (const Pick& p : picks)
        if (p.n == n && p.user == user) dup = true;
      if (dup) continue;
      double f = 0.5 * (cont[n * L + l] + 1.0);
      picks.push_back({n, user, f});
      f_sum += f;
    }
  }
  double scale = topo.max_power_w / std::max(1.0, f_sum);
  for (const Pick& p : picks) out.assign(b, p.n, p.user, p.f * scale);
}

// sum of scheduled-user rates within one cell
inline double cell_rate_bps(const Topology& topo, const RateReport& report, int b) {
  double s = 0.0;
  for (int k = 0; k < topo.num_users(); ++k)
    if (topo.serving_rrs[k] == b) s += report.per_user_bps[k];
  return s;
}

// rewards are rates scaled to O(1): a nominal 4 bit/s/Hz per user over one
// subcarrier bandwidth
inline double rap_reward_scale(const Topology& topo, int scope_users) {
  return std::max(1, scope_users) * topo.subcarrier_bandwidth_hz * 4.0;
}

struct RapTrainConfig {
  std::vector<int> hidden = {128, 128};
  double lr = 3e-4;
  double gamma = 0.5;
  double tau = 0.005;
  double alpha = 0.2;
  double gumbel_tau = 1.0;
  int batch = 64;
  std::size_t buffer_capacity = 100000;
  int normalizer_warmup = 500;
  std::uint64_t seed = 1;
};

inline HybridSacConfig make_rap_agent_config(const RapDims& dims, const RapTrainConfig& tc,
                                             std::uint64_t seed) {
  HybridSacConfig c;
  c.state_dim = dims.state_dim;
  c.spec.head_sizes = dims.head_sizes;
  c.spec.cont_dim = dims.cont_dim;
  c.spec.alpha = tc.alpha;
  c.spec.gamma = tc.gamma;
  c.spec.gumbel_tau = tc.gumbel_tau;
  c.hidden = tc.hidden;
  c.lr = tc.lr;
  c.tau = tc.tau;
  c.batch = tc.batch;
  c.buffer_capacity = tc.buffer_capacity;
  c.seed = seed;
  return c;
}

class CentralizedAllocator {
 public:
  CentralizedAllocator(const Topology& topo, const RapTrainConfig& tc)
      : k_max_(per_cell_budget(topo.num_users(), topo.num_rrs())),
        codec_(topo, k_max_, tc.normalizer_warmup),
        agent_(make_rap_agent_config(codec_.dims(), tc, tc.seed)) {}

  VectorXd encode(const Topology& topo, const ChannelState& ch, bool learn) {
    return codec_.encode(topo, ch, learn);
  }

  HybridAction decide(const VectorXd& s, bool explore) { return agent_.act(s, explore); }

  Allocation apply(const Topology& topo, const HybridAction& a) const {
    const int N = topo.num_subcarriers, L = topo.l_max;
    Allocation out(topo.num_rrs(), N, topo.num_users());
    for (int b = 0; b < topo.num_rrs(); ++b) {
      std::vector<int> cats(a.cats.begin() + static_cast<std::ptrdiff_t>(b) * N * L,
                            a.cats.begin() + static_cast<std::ptrdiff_t>(b + 1) * N * L);
      VectorXd cont = a.cont.segment(static_cast<Eigen::Index>(b) * N * L, N * L);
      decode_cell_action(topo, b, k_max_, cats, cont, out);
    }
    return out;
  }

  double reward(const Topology& topo, const RateReport& report) const {
    return report.total_bps / rap_reward_scale(topo, topo.num_users());
  }

  // actor and both online critics count as trained networks
  std::vector<std::vector<int>> trained_layer_sizes() const {
    return {agent_.actor.sizes, agent_.q1.sizes, agent_.q2.sizes};
  }

  int k_max() const { return k_max_; }
  CentralizedCodec& codec() { return codec_; }
  HybridSacAgent& agent() { return agent_; }
  const HybridSacAgent& agent() const { return agent_; }

 private:
  int k_max_;
  CentralizedCodec codec_;
  HybridSacAgent agent_;
};

// one independent agent per RRS; no information crosses cell boundaries
class DistributedAllocator {
 public:
  DistributedAllocator(const Topology& topo, const RapTrainConfig& tc)
      : k_max_(per_cell_budget(topo.num_users(), topo.num_rrs())) {
    for (int b = 0; b < topo.num_rrs(); ++b) {
      codecs_.emplace_back(topo, b, k_max_, tc.normalizer_warmup);
      agents_.emplace_back(make_rap_agent_config(codecs_.back().dims(), tc,
                                                 splitmix64(tc.seed + 0x9e3779b9u * (b + 1))));
    }
  }

  int num_agents() const { return static_cast<int>(agents_.size()); }

  VectorXd encode(const Topology& topo, const ChannelState& ch, int b, bool learn) {
    return codecs_[b].encode(topo, ch, learn);
  }

  HybridAction decide(int b, const VectorXd& s, bool explore) { return agents_[b].act(s, explore); }

  Allocation apply(const Topology& topo, const std::vector<HybridAction>& actions) const {
    if (static_cast<int>(actions.size()) != static_cast<int>(agents_.size()))
      throw std::invalid_argument("DistributedAllocator: one action per cell required");
    Allocation out(topo.num_rrs(), topo.num_subcarriers, topo.num_users());
    for (int b = 0; b < static_cast<int>(agents_.size()); ++b)
      decode_cell_action(topo, b, k_max_, actions[b].cats, actions[b].cont, out);
    return out;
  }

  // each agent is rewarded with its own cell throughput only
  double reward(const Topology& topo, const RateReport& report, int b) const {
    int kb = static_cast<int>(topo.users_of(b).size());
    return cell_rate_bps(topo, report, b) / rap_reward_scale(topo, kb);
  }

  std::vector<std::vector<int>> trained_layer_sizes(int b) const {
    return {agents_[b].actor.sizes, agents_[b].q1.sizes, agents_[b].q2.sizes};
  }

  int k_max() const { return k_max_; }
  DistributedCodec& codec(int b) { return codecs_[b]; }
  HybridSacAgent& agent(int b) { return agents_[b]; }
  const HybridSacAgent& agent(int b) const { return agents_[b]; }

 private:
  int k_max_;
  std::vector<DistributedCodec> codecs_;
  std::vector<HybridSacAgent> agents_;
};

}  // namespace smartran
