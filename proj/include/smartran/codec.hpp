// State encoding for the allocation agents. Gains enter as log10 values
// standardized by running statistics that freeze after a warm-up period, so
// training and evaluation see the same affine map.
//
// The per-cell user budget is k_max = ceil(K / B). Centralized states hold one
// block per cell (k_max user slots x N gains on the serving cell) plus the B
// normalized user counts; a distributed agent sees only its own block and
// count. Empty user slots encode as zero.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "smartran/channel.hpp"
#include "smartran/mlp.hpp"
#include "smartran/sac.hpp"
#include "smartran/topology.hpp"

namespace smartran {

class GainNormalizer {
 public:
  explicit GainNormalizer(int warmup_slots = 500) : warmup_slots_(warmup_slots) {}

  void observe(double x) {
    if (frozen_) return;
    count_ += 1.0;
    double d = x - mean_;
    mean_ += d / count_;
    m2_ += d * (x - mean_);
  }

  // called once per encoded slot; freezes the stats after the warm-up
  void end_slot() {
    if (frozen_) return;
    slots_ += 1;
    if (slots_ >= warmup_slots_) frozen_ = true;
  }

  double normalize(double x) const {
    if (count_ < 2.0) return 0.0;
    return (x - mean_) / std();
  }

  double mean() const { return mean_; }
  double std() const {
    if (count_ < 2.0) return 1.0;
    return std::max(std::sqrt(m2_ / (count_ - 1.0)), 1e-6);
  }
  bool frozen() const { return frozen_; }
  int warmup_slots() const { return warmup_slots_; }

  // for checkpoint restore
  void restore(double mean, double stddev) {
    mean_ = mean;
    m2_ = stddev * stddev * 1.0;
    count_ = 2.0;
    frozen_ = true;
  }

 private:
  int warmup_slots_;
  int slots_ = 0;
  bool frozen_ = false;
  double count_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline int per_cell_budget(int num_users, int num_rrs) {
  if (num_rrs < 1) throw std::invalid_argument("per_cell_budget: no cells");
  return num_users == 0 ? 1 : (num_users + num_rrs - 1) / num_rrs;
}

// action layout shared by both regimes: one categorical head per
// (cell, carrier, layer) choosing among {idle, user slot 0..k_max-1}, and one
// power fraction per head
struct RapDims {
  int state_dim = 0;
  std::vector<int> head_sizes;
  int cont_dim = 0;
};

inline RapDims centralized_rap_dims(int num_rrs, int num_subcarriers, int l_max, int k_max) {
  RapDims d;
  d.state_dim = num_rrs * k_max * num_subcarriers + num_rrs;
  d.head_sizes.assign(static_cast<std::size_t>(num_rrs) * num_subcarriers * l_max, k_max + 1);
  d.cont_dim = num_rrs * num_subcarriers * l_max;
  return d;
}

inline RapDims distributed_rap_dims(int num_subcarriers, int l_max, int k_max) {
  RapDims d;
  d.state_dim = k_max * num_subcarriers + 1;
  d.head_sizes.assign(static_cast<std::size_t>(num_subcarriers) * l_max, k_max + 1);
  d.cont_dim = num_subcarriers * l_max;
  return d;
}

inline RapDims centralized_rap_dims(const Topology& topo, int k_max) {
  return centralized_rap_dims(topo.num_rrs(), topo.num_subcarriers, topo.l_max, k_max);
}

inline RapDims distributed_rap_dims(const Topology& topo, int k_max) {
  return distributed_rap_dims(topo.num_subcarriers, topo.l_max, k_max);
}

namespace detail {

// fills one cell block: k_max user slots x N standardized log-gains
inline void encode_cell_block(const Topology& topo, const ChannelState& ch, int b, int k_max,
                              GainNormalizer& norm, bool learn, VectorXd& out, int offset) {
  const int N = topo.num_subcarriers;
  auto users = topo.users_of(b);
  for (int u = 0; u < k_max; ++u) {
    for (int n = 0; n < N; ++n) {
      double v = 0.0;
      if (u < static_cast<int>(users.size())) {
        double lg = std::log10(ch.gain(users[u], b, n));
        if (learn) norm.observe(lg);
        v = norm.normalize(lg);
      }
      out[offset + u * N + n] = v;
    }
  }
}

}  // namespace detail

class CentralizedCodec {
 public:
  CentralizedCodec(const Topology& topo, int k_max, int warmup_slots)
      : k_max_(k_max), norm_(warmup_slots) {
    for (int b = 0; b < topo.num_rrs(); ++b)
      if (static_cast<int>(topo.users_of(b).size()) > k_max)
        throw std::invalid_argument("CentralizedCodec: cell exceeds the user budget");
    dims_ = centralized_rap_dims(topo, k_max);
  }

  // learn=true updates the running stats (training phase only)
  VectorXd encode(const Topology& topo, const ChannelState& ch, bool learn) {
    const int B = topo.num_rrs(), N = topo.num_subcarriers;
    VectorXd s(dims_.state_dim);
    for (int b = 0; b < B; ++b)
      detail::encode_cell_block(topo, ch, b, k_max_, norm_, learn, s, b * k_max_ * N);
    for (int b = 0; b < B; ++b)
      s[B * k_max_ * N + b] =
          static_cast<double>(topo.users_of(b).size()) / static_cast<double>(k_max_);
    if (learn) norm_.end_slot();
    return s;
  }

  const RapDims& dims() const { return dims_; }
  int k_max() const { return k_max_; }
  GainNormalizer& normalizer() { return norm_; }
  const GainNormalizer& normalizer() const { return norm_; }

 private:
  int k_max_;
  RapDims dims_;
  GainNormalizer norm_;
};

class DistributedCodec {
 public:
  DistributedCodec(const Topology& topo, int rrs, int k_max, int warmup_slots)
      : rrs_(rrs), k_max_(k_max), norm_(warmup_slots) {
    if (static_cast<int>(topo.users_of(rrs).size()) > k_max)
      throw std::invalid_argument("DistributedCodec: cell exceeds the user budget");
    dims_ = distributed_rap_dims(topo, k_max);
  }

  VectorXd encode(const Topology& topo, const ChannelState& ch, bool learn) {
    const int N = topo.num_subcarriers;
    VectorXd s(dims_.state_dim);
    detail::encode_cell_block(topo, ch, rrs_, k_max_, norm_, learn, s, 0);
    s[k_max_ * N] =
        static_cast<double>(topo.users_of(rrs_).size()) / static_cast<double>(k_max_);
    if (learn) norm_.end_slot();
    return s;
  }

  const RapDims& dims() const { return dims_; }
  int rrs() const { return rrs_; }
  int k_max() const { return k_max_; }
  GainNormalizer& normalizer() { return norm_; }
  const GainNormalizer& normalizer() const { return norm_; }

 private:
  int rrs_;
  int k_max_;
  RapDims dims_;
  GainNormalizer norm_;
};

}  // namespace smartran
