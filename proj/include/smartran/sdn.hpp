// The controller that picks the allocation regime each slot. It sees a small
// monitoring digest (2B+5 features), not full CSI: per-cell load, per-cell
// mean channel quality, global channel dispersion, its previous choice,
// recent normalized TOC per mode, and the slot phase.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "smartran/baselines.hpp"
#include "smartran/channel.hpp"
#include "smartran/metrics.hpp"
#include "smartran/sac.hpp"
#include "smartran/topology.hpp"

namespace smartran {

// affine squash for log10 path gains; typical serving-link values sit near -9
constexpr double kLogGainCenter = -9.0;
constexpr double kLogGainScale = 3.0;

inline int sdn_state_dim(int num_rrs) { return 2 * num_rrs + 5; }

// running peak of |TOC| with slow decay, used to keep rewards O(1)
class TocNormalizer {
 public:
  double update(double toc) {
    peak_ = std::max(0.999 * peak_, std::abs(toc));
    return value();
  }
  double value() const { return std::max(peak_, 1e-12); }
  void restore(double peak) { peak_ = peak; }

 private:
  double peak_ = 0.0;
};

inline double sdn_reward(double toc, double normalizer) {
  if (normalizer <= 0) throw std::invalid_argument("sdn_reward: normalizer must be positive");
  return toc / normalizer;
}

// per-mode exponential averages of the normalized TOC; the unchosen mode's
// estimate slowly decays toward zero so stale values lose weight
struct ModeEmas {
  double cnt = 0.0;
  double dst = 0.0;

  void update(Mode chosen, double normalized_toc, double beta) {
    double& own = (chosen == Mode::Cnt) ? cnt : dst;
    double& other = (chosen == Mode::Cnt) ? dst : cnt;
    own = (1.0 - beta) * own + beta * normalized_toc;
    other *= 0.99;
  }
};

inline std::pair<double, double> mode_one_hot(Mode m) {
  return m == Mode::Cnt ? std::make_pair(1.0, 0.0) : std::make_pair(0.0, 1.0);
}

inline VectorXd build_sdn_state(const Topology& topo, const ChannelState& ch,
                                std::optional<Mode> prev_mode, const ModeEmas& emas, long slot,
                                int period) {
  if (period < 1) throw std::invalid_argument("build_sdn_state: period must be >= 1");
  const int B = topo.num_rrs(), N = topo.num_subcarriers, K = topo.num_users();
  VectorXd s = VectorXd::Zero(sdn_state_dim(B));

  auto counts = topo.users_per_rrs();
  for (int b = 0; b < B; ++b)
    s[b] = K == 0 ? 0.0 : static_cast<double>(counts[b]) / K;

  // per-cell mean and global variance of squashed serving-link gains
  double g_sum = 0.0, g_sq = 0.0;
  long g_n = 0;
  for (int b = 0; b < B; ++b) {
    double m = 0.0;
    long n_b = 0;
    for (int k = 0; k < K; ++k) {
      if (topo.serving_rrs[k] != b) continue;
      for (int n = 0; n < N; ++n) {
        double x = (std::log10(ch.gain(k, b, n)) - kLogGainCenter) / kLogGainScale;
        m += x;
        g_sum += x;
        g_sq += x * x;
        n_b++;
      }
    }
    s[B + b] = n_b == 0 ? 0.0 : m / n_b;
    g_n += n_b;
  }
  double var = 0.0;
  if (g_n > 1) {
    double mean = g_sum / g_n;
    var = std::max(0.0, g_sq / g_n - mean * mean);
  }
  s[2 * B] = var;
  s[2 * B + 1] = prev_mode ? (*prev_mode == Mode::Cnt ? 1.0 : -1.0) : 0.0;
  s[2 * B + 2] = emas.cnt;
  s[2 * B + 3] = emas.dst;
  s[2 * B + 4] = static_cast<double>(slot % period) / period;
  return s;
}

enum class SdnLearner { Sac, Dqn };

struct SdnConfig {
  SdnLearner learner = SdnLearner::Sac;
  int state_dim = 13;
  std::vector<int> hidden = {64, 64};
  double lr = 3e-4;
  double gamma = 0.95;
  double tau = 0.005;
  double alpha = 0.2;    // sac
  double epsilon = 0.1;  // dqn
  int batch = 64;
  std::size_t buffer_capacity = 100000;
  std::uint64_t seed = 1;
};

// action 0 = centralized, action 1 = distributed
class SdnAgent {
 public:
  explicit SdnAgent(const SdnConfig& cfg) : cfg_(cfg) {
    if (cfg.learner == SdnLearner::Sac) {
      DiscreteSacConfig c;
      c.state_dim = cfg.state_dim;
      c.num_actions = 2;
      c.hidden = cfg.hidden;
      c.lr = cfg.lr;
      c.gamma = cfg.gamma;
      c.tau = cfg.tau;
      c.alpha = cfg.alpha;
      c.batch = cfg.batch;
      c.buffer_capacity = cfg.buffer_capacity;
      c.seed = cfg.seed;
      sac.emplace(c);
    } else {
      DqnConfig c;
      c.state_dim = cfg.state_dim;
      c.num_actions = 2;
      c.hidden = cfg.hidden;
      c.lr = cfg.lr;
      c.gamma = cfg.gamma;
      c.tau = cfg.tau;
      c.epsilon = cfg.epsilon;
      c.batch = cfg.batch;
      c.buffer_capacity = cfg.buffer_capacity;
      c.seed = cfg.seed;
      dqn.emplace(c);
    }
  }

  Mode select_mode(const VectorXd& s, bool explore) {
    int a = sac ? sac->act(s, explore) : dqn->act(s, explore);
    return a == 0 ? Mode::Cnt : Mode::Dst;
  }

  void store(Transition<int> t) { sac ? sac->store(std::move(t)) : dqn->store(std::move(t)); }

  UpdateDiagnostics update() { return sac ? sac->update() : dqn->update(); }

  const SdnConfig& config() const { return cfg_; }

  std::optional<DiscreteSacAgent> sac;
  std::optional<DqnAgent> dqn;

 private:
  SdnConfig cfg_;
};

}  // namespace smartran
