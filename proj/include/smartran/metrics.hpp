// Signaling overhead, learning-agent compute cost, and the TOC score that
// trades throughput against both. All pure functions.
//
// Overhead per slot, in bits:
//   distributed:  every user reports CSI for each carrier to its own RRS only
//                 -> sum_b K_b * N * b_csi
//   centralized:  the same CSI is additionally forwarded RRS -> BBU, and the
//                 chosen subcarrier indicator + power value travel back down
//                 -> K * N * (2*b_csi + b_sc + b_pw)
//
// Agent compute per slot, in multiply-accumulate units:
//   O_agent = U * M * sum_nets 2 * sum_l n_l * n_{l+1}
//   (forward + backward over each trained network, per sample, per update)
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "smartran/topology.hpp"

namespace smartran {

enum class Mode : int { Cnt = 0, Dst = 1 };

inline const char* mode_name(Mode m) { return m == Mode::Cnt ? "centralized" : "distributed"; }

struct BitWidths {
  int csi = 16;         // bits per channel-status report
  int subcarrier = 4;   // bits per subcarrier indicator
  int power = 4;        // bits per power value
};

struct ComplexityModel {
  std::vector<std::vector<int>> layer_sizes;  // one entry per trained network
  int minibatch = 1;
  double updates_per_slot = 1.0;  // average; 0 for evaluation-only operation
};

struct TocWeights {
  double w_overhead = 0.1;    // per normalized overhead unit
  double w_complexity = 0.1;  // per normalized MAC unit
  double overhead_ref_bits = 1.0;
  double complexity_ref_mac = 1.0;
};

struct SlotReport {
  Mode mode = Mode::Cnt;
  double rate_bps = 0.0;
  double overhead_bits = 0.0;
  double complexity_mac = 0.0;
  double toc = 0.0;
};

inline double overhead_bits(Mode mode, const Topology& topo, const BitWidths& bw) {
  if (bw.csi <= 0 || bw.subcarrier <= 0 || bw.power <= 0)
    throw std::invalid_argument("overhead_bits: bit widths must be positive");
  const double kn = static_cast<double>(topo.num_users()) * topo.num_subcarriers;
  if (mode == Mode::Dst) return kn * bw.csi;
  return kn * (2.0 * bw.csi + bw.subcarrier + bw.power);
}

// fixed per-slot cost of keeping the controller's view fresh, charged to both
// modes alike; deliberately not part of overhead_bits so the per-mode formulas
// stay exactly linear in K and N
inline double sdn_monitoring_bits(const Topology& topo, const BitWidths& bw) {
  return static_cast<double>(topo.num_rrs()) * bw.csi;
}

inline double agent_complexity_mac(const ComplexityModel& cm) {
  if (cm.layer_sizes.empty())
    throw std::invalid_argument("agent_complexity_mac: layer_sizes must be nonempty");
  if (cm.minibatch < 1) throw std::invalid_argument("agent_complexity_mac: minibatch must be >= 1");
  if (cm.updates_per_slot < 0)
    throw std::invalid_argument("agent_complexity_mac: updates_per_slot must be >= 0");
  double macs = 0.0;
  for (const auto& net : cm.layer_sizes) {
    for (std::size_t l = 0; l + 1 < net.size(); ++l)
      macs += 2.0 * static_cast<double>(net[l]) * net[l + 1];
  }
  return cm.updates_per_slot * cm.minibatch * macs;
}

// centralized: the single BBU agent; distributed: one agent per RRS
inline double scheme_complexity_mac(Mode mode, const Topology& topo,
                                    const std::vector<ComplexityModel>& agents) {
  const std::size_t expected = (mode == Mode::Cnt) ? 1 : static_cast<std::size_t>(topo.num_rrs());
  if (agents.size() != expected)
    throw std::invalid_argument("scheme_complexity_mac: expected " + std::to_string(expected) +
                                " agent models, got " + std::to_string(agents.size()));
  double total = 0.0;
  for (const auto& cm : agents) total += agent_complexity_mac(cm);
  return total;
}

inline double toc_score(double rate_bps, double overhead_bits, double complexity_mac,
                        const TocWeights& w) {
  if (rate_bps < 0 || overhead_bits < 0 || complexity_mac < 0)
    throw std::invalid_argument("toc_score: inputs must be nonnegative");
  if (w.overhead_ref_bits <= 0 || w.complexity_ref_mac <= 0)
    throw std::invalid_argument("toc_score: normalizers must be positive");
  return rate_bps / (1.0 + w.w_overhead * (overhead_bits / w.overhead_ref_bits) +
                     w.w_complexity * (complexity_mac / w.complexity_ref_mac));
}

}  // namespace smartran
