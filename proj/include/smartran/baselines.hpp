// Baseline learners used for comparison runs: DQN over a categorical action
// set and DDPG over a tanh-bounded continuous action. Same conventions as the
// SAC agents (column batches, exposed loss functions, soft target updates).
#pragma once

#include <cmath>
#include <vector>

#include "smartran/sac.hpp"

namespace smartran {

// --------------------------------------------------------------------- dqn

// L = mean (q(s,a) - r - gamma(1-done) max_a' qbar(s',a'))^2
inline double dqn_loss(const Mlp& q, const Mlp& tq, const DiscreteBatch& batch,
                       double gamma, MlpGrads* g = nullptr) {
  const int n = static_cast<int>(batch.a.size());
  MatrixXd q2 = mlp_forward(tq, batch.s2);
  MlpCache c;
  MatrixXd qs = mlp_forward(q, batch.s, g ? &c : nullptr);
  double loss = 0.0;
  MatrixXd d = MatrixXd::Zero(qs.rows(), n);
  for (int i = 0; i < n; ++i) {
    double y = batch.r[i] + gamma * (1.0 - batch.done[i]) * q2.col(i).maxCoeff();
    double e = qs(batch.a[i], i) - y;
    loss += e * e / n;
    d(batch.a[i], i) = 2.0 * e / n;
  }
  if (g) mlp_backward(q, c, d, *g);
  return loss;
}

struct DqnConfig {
  int state_dim = 1;
  int num_actions = 2;
  std::vector<int> hidden = {128, 128};
  double lr = 3e-4;
  double gamma = 0.95;
  double tau = 0.005;
  double epsilon = 0.1;
  int batch = 64;
  std::size_t buffer_capacity = 100000;
  std::uint64_t seed = 1;
};

class DqnAgent {
 public:
  explicit DqnAgent(DqnConfig cfg)
      : cfg(std::move(cfg)),
        buffer(this->cfg.buffer_capacity),
        init_rng(this->cfg.seed, stream::agent_init),
        rng(this->cfg.seed, stream::agent_noise),
        replay_rng(this->cfg.seed, stream::replay) {
    std::vector<int> sizes{this->cfg.state_dim};
    sizes.insert(sizes.end(), this->cfg.hidden.begin(), this->cfg.hidden.end());
    sizes.push_back(this->cfg.num_actions);
    q = Mlp::make(sizes, init_rng);
    tq = q;
    opt = AdamState::make(q, this->cfg.lr);
  }

  int act(const VectorXd& s, bool explore) {
    if (explore && rng.uniform() < cfg.epsilon)
      return static_cast<int>(rng.uniform_int(cfg.num_actions));
    int best = 0;
    mlp_forward1(q, s).maxCoeff(&best);
    return best;
  }

  void store(Transition<int> t) { buffer.push(std::move(t)); }

  UpdateDiagnostics update() {
    if (buffer.size() < static_cast<std::size_t>(cfg.batch)) return {true, 0, 0, 0};
    return update_batch(make_discrete_batch(buffer.sample(cfg.batch, replay_rng)));
  }

  UpdateDiagnostics update_batch(const DiscreteBatch& batch) {
    UpdateDiagnostics d;
    MlpGrads g = MlpGrads::zeros_like(q);
    d.critic_loss = dqn_loss(q, tq, batch, cfg.gamma, &g);
    adam_step(opt, q, g);
    soft_update(tq, q, cfg.tau);
    return d;
  }

  DqnConfig cfg;
  Mlp q, tq;
  AdamState opt;
  ReplayBuffer<int> buffer;
  Rng init_rng, rng, replay_rng;
};

// -------------------------------------------------------------------- ddpg

struct ContBatch {
  MatrixXd s, s2, a;
  VectorXd r, done;
};

inline ContBatch make_cont_batch(const std::vector<const Transition<VectorXd>*>& ts) {
  const int n = static_cast<int>(ts.size());
  const int sd = static_cast<int>(ts[0]->state.size());
  const int ad = static_cast<int>(ts[0]->action.size());
  ContBatch b;
  b.s.resize(sd, n);
  b.s2.resize(sd, n);
  b.a.resize(ad, n);
  b.r.resize(n);
  b.done.resize(n);
  for (int i = 0; i < n; ++i) {
    b.s.col(i) = ts[i]->state;
    b.s2.col(i) = ts[i]->next_state;
    b.a.col(i) = ts[i]->action;
    b.r[i] = ts[i]->reward;
    b.done[i] = ts[i]->done ? 1.0 : 0.0;
  }
  return b;
}

// L = mean (Q(s,a) - r - gamma(1-done) Qbar(s', actorbar(s')))^2
inline double ddpg_critic_loss(const Mlp& critic, const Mlp& t_critic, const Mlp& t_actor,
                               const ContBatch& batch, double gamma, MlpGrads* g = nullptr) {
  const int n = static_cast<int>(batch.r.size());
  const int sd = static_cast<int>(batch.s.rows());
  const int ad = static_cast<int>(batch.a.rows());
  MatrixXd a2 = mlp_forward(t_actor, batch.s2);
  MatrixXd qin2(sd + ad, n);
  qin2.topRows(sd) = batch.s2;
  qin2.bottomRows(ad) = a2;
  VectorXd q2 = mlp_forward(t_critic, qin2).row(0).transpose();
  VectorXd y = batch.r.array() + gamma * (1.0 - batch.done.array()) * q2.array();

  MatrixXd qin(sd + ad, n);
  qin.topRows(sd) = batch.s;
  qin.bottomRows(ad) = batch.a;
  MlpCache c;
  VectorXd qs = mlp_forward(critic, qin, g ? &c : nullptr).row(0).transpose();
  VectorXd e = qs - y;
  if (g) mlp_backward(critic, c, (2.0 / n) * e.transpose(), *g);
  return e.squaredNorm() / n;
}

// L = -mean Q(s, actor(s))
inline double ddpg_actor_loss(const Mlp& actor, const Mlp& critic, const ContBatch& batch,
                              MlpGrads* ga = nullptr) {
  const int n = static_cast<int>(batch.r.size());
  const int sd = static_cast<int>(batch.s.rows());
  const int ad = static_cast<int>(batch.a.rows());
  MlpCache ca, cc;
  MatrixXd a = mlp_forward(actor, batch.s, ga ? &ca : nullptr);
  MatrixXd qin(sd + ad, n);
  qin.topRows(sd) = batch.s;
  qin.bottomRows(ad) = a;
  VectorXd qs = mlp_forward(critic, qin, ga ? &cc : nullptr).row(0).transpose();
  double loss = -qs.mean();
  if (ga) {
    MatrixXd dq = MatrixXd::Constant(1, n, -1.0 / n);
    MlpGrads sink = MlpGrads::zeros_like(critic);
    MatrixXd din = mlp_backward(critic, cc, dq, sink);
    mlp_backward(actor, ca, din.bottomRows(ad), *ga);
  }
  return loss;
}

struct DdpgConfig {
  int state_dim = 1;
  int action_dim = 1;
  std::vector<int> hidden = {128, 128};
  double lr = 3e-4;
  double gamma = 0.95;
  double tau = 0.005;
  double noise_std = 0.1;
  int batch = 64;
  std::size_t buffer_capacity = 100000;
  std::uint64_t seed = 1;
};

class DdpgAgent {
 public:
  explicit DdpgAgent(DdpgConfig cfg)
      : cfg(std::move(cfg)),
        buffer(this->cfg.buffer_capacity),
        init_rng(this->cfg.seed, stream::agent_init),
        rng(this->cfg.seed, stream::agent_noise),
        replay_rng(this->cfg.seed, stream::replay) {
    std::vector<int> a_sizes{this->cfg.state_dim};
    a_sizes.insert(a_sizes.end(), this->cfg.hidden.begin(), this->cfg.hidden.end());
    a_sizes.push_back(this->cfg.action_dim);
    actor = Mlp::make(a_sizes, init_rng, Mlp::Output::Tanh);
    std::vector<int> q_sizes{this->cfg.state_dim + this->cfg.action_dim};
    q_sizes.insert(q_sizes.end(), this->cfg.hidden.begin(), this->cfg.hidden.end());
    q_sizes.push_back(1);
    critic = Mlp::make(q_sizes, init_rng);
    t_actor = actor;
    t_critic = critic;
    opt_actor = AdamState::make(actor, this->cfg.lr);
    opt_critic = AdamState::make(critic, this->cfg.lr);
  }

  VectorXd act(const VectorXd& s, bool explore) {
    VectorXd a = mlp_forward1(actor, s);
    if (explore)
      for (int i = 0; i < a.size(); ++i)
        a[i] = std::clamp(a[i] + cfg.noise_std * rng.normal(), -1.0, 1.0);
    return a;
  }

  void store(Transition<VectorXd> t) { buffer.push(std::move(t)); }

  UpdateDiagnostics update() {
    if (buffer.size() < static_cast<std::size_t>(cfg.batch)) return {true, 0, 0, 0};
    return update_batch(make_cont_batch(buffer.sample(cfg.batch, replay_rng)));
  }

  UpdateDiagnostics update_batch(const ContBatch& batch) {
    UpdateDiagnostics d;
    MlpGrads gc = MlpGrads::zeros_like(critic);
    d.critic_loss = ddpg_critic_loss(critic, t_critic, t_actor, batch, cfg.gamma, &gc);
    adam_step(opt_critic, critic, gc);
    MlpGrads ga = MlpGrads::zeros_like(actor);
    d.actor_loss = ddpg_actor_loss(actor, critic, batch, &ga);
    adam_step(opt_actor, actor, ga);
    soft_update(t_critic, critic, cfg.tau);
    soft_update(t_actor, actor, cfg.tau);
    return d;
  }

  DdpgConfig cfg;
  Mlp actor, critic, t_actor, t_critic;
  AdamState opt_actor, opt_critic;
  ReplayBuffer<VectorXd> buffer;
  Rng init_rng, rng, replay_rng;
};

}  // namespace smartran
