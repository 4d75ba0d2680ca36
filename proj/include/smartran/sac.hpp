// Soft actor-critic, two flavours:
//   DiscreteSacAgent - expected-value form over a small categorical action set
//                      (twin critics output Q(s,.) as a vector per action).
//   HybridSacAgent   - factorized action of several categorical heads plus
//                      tanh-squashed Gaussian dimensions, scored by scalar
//                      twin critics Q(s, action-encoding). Actor gradients use
//                      a Gumbel-softmax relaxation of the heads; execution and
//                      critic targets use hard samples.
// Loss functions are exposed standalone with explicit frozen noise so their
// analytic gradients can be finite-difference checked.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "smartran/adam.hpp"
#include "smartran/mlp.hpp"
#include "smartran/replay.hpp"
#include "smartran/rng.hpp"

namespace smartran {

struct UpdateDiagnostics {
  bool skipped = false;  // buffer below batch size
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double mean_entropy = 0.0;
};

inline void soft_update(Mlp& target, const Mlp& online, double tau) {
  if (target.sizes != online.sizes)
    throw std::invalid_argument("soft_update: mismatched architectures");
  for (int l = 0; l < online.num_layers(); ++l) {
    target.w[l] = tau * online.w[l] + (1.0 - tau) * target.w[l];
    target.b[l] = tau * online.b[l] + (1.0 - tau) * target.b[l];
  }
}

// ---------------------------------------------------------------- discrete

struct DiscreteBatch {
  MatrixXd s, s2;
  std::vector<int> a;
  VectorXd r, done;
};

inline DiscreteBatch make_discrete_batch(const std::vector<const Transition<int>*>& ts) {
  const int n = static_cast<int>(ts.size());
  if (n == 0) throw std::invalid_argument("make_discrete_batch: empty batch");
  const int sd = static_cast<int>(ts[0]->state.size());
  DiscreteBatch b;
  b.s.resize(sd, n);
  b.s2.resize(sd, n);
  b.a.resize(n);
  b.r.resize(n);
  b.done.resize(n);
  for (int i = 0; i < n; ++i) {
    b.s.col(i) = ts[i]->state;
    b.s2.col(i) = ts[i]->next_state;
    b.a[i] = ts[i]->action;
    b.r[i] = ts[i]->reward;
    b.done[i] = ts[i]->done ? 1.0 : 0.0;
  }
  return b;
}

// L = mean(q1(s,a)-y)^2 + mean(q2(s,a)-y)^2 with
// y = r + gamma(1-done) * sum_a pi'(a)[min Qbar(s',a) - alpha log pi'(a)]
inline double discrete_critic_loss(const Mlp& actor, const Mlp& q1, const Mlp& q2,
                                   const Mlp& tq1, const Mlp& tq2, const DiscreteBatch& batch,
                                   double alpha, double gamma, MlpGrads* g1 = nullptr,
                                   MlpGrads* g2 = nullptr) {
  const int n = static_cast<int>(batch.a.size());
  MatrixXd logits2 = mlp_forward(actor, batch.s2);
  MatrixXd pi2 = softmax_cols(logits2);
  MatrixXd logpi2 = log_softmax_cols(logits2);
  MatrixXd qmin2 = mlp_forward(tq1, batch.s2).cwiseMin(mlp_forward(tq2, batch.s2));
  VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = pi2.col(i).dot(qmin2.col(i) - alpha * logpi2.col(i));
  VectorXd y = batch.r.array() + gamma * (1.0 - batch.done.array()) * v.array();

  MlpCache c1, c2;
  MatrixXd qa = mlp_forward(q1, batch.s, g1 ? &c1 : nullptr);
  MatrixXd qb = mlp_forward(q2, batch.s, g2 ? &c2 : nullptr);
  double loss = 0.0;
  MatrixXd d1 = MatrixXd::Zero(qa.rows(), n), d2 = MatrixXd::Zero(qb.rows(), n);
  for (int i = 0; i < n; ++i) {
    double e1 = qa(batch.a[i], i) - y[i];
    double e2 = qb(batch.a[i], i) - y[i];
    loss += (e1 * e1 + e2 * e2) / n;
    d1(batch.a[i], i) = 2.0 * e1 / n;
    d2(batch.a[i], i) = 2.0 * e2 / n;
  }
  if (g1) mlp_backward(q1, c1, d1, *g1);
  if (g2) mlp_backward(q2, c2, d2, *g2);
  return loss;
}

// L = mean_s sum_a pi(a|s) [alpha log pi(a|s) - min Q(s,a)]
inline double discrete_actor_loss(const Mlp& actor, const Mlp& q1, const Mlp& q2,
                                  const DiscreteBatch& batch, double alpha,
                                  MlpGrads* ga = nullptr, double* mean_entropy = nullptr) {
  const int n = static_cast<int>(batch.a.size());
  MlpCache ca;
  MatrixXd logits = mlp_forward(actor, batch.s, ga ? &ca : nullptr);
  MatrixXd pi = softmax_cols(logits);
  MatrixXd logpi = log_softmax_cols(logits);
  MatrixXd qmin = mlp_forward(q1, batch.s).cwiseMin(mlp_forward(q2, batch.s));
  MatrixXd t = alpha * logpi - qmin;
  double loss = 0.0, ent = 0.0;
  MatrixXd dlogits(logits.rows(), n);
  for (int i = 0; i < n; ++i) {
    double li = pi.col(i).dot(t.col(i));
    loss += li / n;
    ent += entropy_of(pi.col(i)) / n;
    // d/dlogit_j = pi_j (t_j - sum_a pi_a t_a); the alpha entropy part of the
    // product-rule cancels against itself
    dlogits.col(i) = pi.col(i).cwiseProduct(t.col(i).array().matrix() -
                                            VectorXd::Constant(t.rows(), li)) /
                     n;
  }
  if (ga) mlp_backward(actor, ca, dlogits, *ga);
  if (mean_entropy) *mean_entropy = ent;
  return loss;
}

struct DiscreteSacConfig {
  int state_dim = 1;
  int num_actions = 2;
  std::vector<int> hidden = {128, 128};
  double lr = 3e-4;
  double gamma = 0.95;
  double tau = 0.005;
  double alpha = 0.2;
  int batch = 64;
  std::size_t buffer_capacity = 100000;
  std::uint64_t seed = 1;
};

class DiscreteSacAgent {
 public:
  explicit DiscreteSacAgent(DiscreteSacConfig cfg)
      : cfg(std::move(cfg)),
        buffer(this->cfg.buffer_capacity),
        init_rng(this->cfg.seed, stream::agent_init),
        rng(this->cfg.seed, stream::agent_noise),
        replay_rng(this->cfg.seed, stream::replay) {
    std::vector<int> a_sizes{this->cfg.state_dim};
    a_sizes.insert(a_sizes.end(), this->cfg.hidden.begin(), this->cfg.hidden.end());
    a_sizes.push_back(this->cfg.num_actions);
    actor = Mlp::make(a_sizes, init_rng);
    q1 = Mlp::make(a_sizes, init_rng);
    q2 = Mlp::make(a_sizes, init_rng);
    tq1 = q1;
    tq2 = q2;
    opt_actor = AdamState::make(actor, this->cfg.lr);
    opt_q1 = AdamState::make(q1, this->cfg.lr);
    opt_q2 = AdamState::make(q2, this->cfg.lr);
  }

  VectorXd policy(const VectorXd& s) const { return softmax(mlp_forward1(actor, s)); }

  int act(const VectorXd& s, bool explore) {
    VectorXd p = policy(s);
    if (!explore) {
      int best = 0;
      p.maxCoeff(&best);
      return best;
    }
    double u = rng.uniform(), acc = 0.0;
    for (int i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) return i;
    }
    return static_cast<int>(p.size()) - 1;
  }

  void store(Transition<int> t) { buffer.push(std::move(t)); }

  UpdateDiagnostics update() {
    if (buffer.size() < static_cast<std::size_t>(cfg.batch)) return {true, 0, 0, 0};
    return update_batch(make_discrete_batch(buffer.sample(cfg.batch, replay_rng)));
  }

  UpdateDiagnostics update_batch(const DiscreteBatch& batch) {
    UpdateDiagnostics d;
    MlpGrads g1 = MlpGrads::zeros_like(q1), g2 = MlpGrads::zeros_like(q2);
    d.critic_loss =
        discrete_critic_loss(actor, q1, q2, tq1, tq2, batch, cfg.alpha, cfg.gamma, &g1, &g2);
    adam_step(opt_q1, q1, g1);
    adam_step(opt_q2, q2, g2);
    MlpGrads ga = MlpGrads::zeros_like(actor);
    d.actor_loss = discrete_actor_loss(actor, q1, q2, batch, cfg.alpha, &ga, &d.mean_entropy);
    adam_step(opt_actor, actor, ga);
    soft_update(tq1, q1, cfg.tau);
    soft_update(tq2, q2, cfg.tau);
    return d;
  }

  DiscreteSacConfig cfg;
  Mlp actor, q1, q2, tq1, tq2;
  AdamState opt_actor, opt_q1, opt_q2;
  ReplayBuffer<int> buffer;
  Rng init_rng, rng, replay_rng;
};

// ----------------------------------------------------------------- hybrid

struct HybridAction {
  std::vector<int> cats;  // one pick per categorical head
  VectorXd cont;          // squashed values in (-1,1)
};

struct HybridSpec {
  std::vector<int> head_sizes;
  int cont_dim = 0;
  double alpha = 0.2;
  double gamma = 0.95;
  double gumbel_tau = 1.0;

  int num_heads() const { return static_cast<int>(head_sizes.size()); }
  int total_cat() const {
    int s = 0;
    for (int c : head_sizes) s += c;
    return s;
  }
  int action_enc_dim() const { return total_cat() + cont_dim; }
  // actor emits [head logits..., mu, rho]
  int actor_out_dim() const { return total_cat() + 2 * cont_dim; }
  // temperature is spread per head / per dimension
  double alpha_d() const { return head_sizes.empty() ? 0.0 : alpha / num_heads(); }
  double alpha_c() const { return cont_dim == 0 ? 0.0 : alpha / cont_dim; }
};

constexpr double kLogStdMin = -20.0;
constexpr double kLogStdMax = 2.0;
constexpr double kTanhEps = 1e-6;

// differentiable clamp of the pre-activation into [kLogStdMin, kLogStdMax]
inline double softclamp_logstd(double rho) {
  return kLogStdMin + 0.5 * (kLogStdMax - kLogStdMin) * (std::tanh(rho) + 1.0);
}
inline double softclamp_logstd_d(double rho) {
  double t = std::tanh(rho);
  return 0.5 * (kLogStdMax - kLogStdMin) * (1.0 - t * t);
}

inline MatrixXd encode_hybrid_action(const HybridSpec& spec, const HybridAction& a) {
  MatrixXd enc = MatrixXd::Zero(spec.action_enc_dim(), 1);
  int off = 0;
  for (int h = 0; h < spec.num_heads(); ++h) {
    enc(off + a.cats[h], 0) = 1.0;
    off += spec.head_sizes[h];
  }
  for (int d = 0; d < spec.cont_dim; ++d) enc(off + d, 0) = a.cont[d];
  return enc;
}

struct HybridBatch {
  MatrixXd s, s2;
  MatrixXd a_enc;  // encoded taken actions, one column per sample
  VectorXd r, done;
};

// frozen stochastic draws so losses are deterministic functions of parameters
struct HybridNoise {
  MatrixXd gumbel_cur, xi_cur;    // actor loss, current state
  MatrixXd gumbel_next, xi_next;  // critic target, next state
};

inline HybridNoise draw_hybrid_noise(const HybridSpec& spec, int batch, Rng& rng) {
  HybridNoise nz;
  nz.gumbel_cur.resize(spec.total_cat(), batch);
  nz.gumbel_next.resize(spec.total_cat(), batch);
  nz.xi_cur.resize(spec.cont_dim, batch);
  nz.xi_next.resize(spec.cont_dim, batch);
  for (int i = 0; i < batch; ++i) {
    for (int j = 0; j < spec.total_cat(); ++j) nz.gumbel_cur(j, i) = rng.gumbel();
    for (int j = 0; j < spec.total_cat(); ++j) nz.gumbel_next(j, i) = rng.gumbel();
    for (int j = 0; j < spec.cont_dim; ++j) nz.xi_cur(j, i) = rng.normal();
    for (int j = 0; j < spec.cont_dim; ++j) nz.xi_next(j, i) = rng.normal();
  }
  return nz;
}

namespace detail {

// per-column pieces of the squashed-Gaussian sample derived from actor output
struct ContSample {
  MatrixXd sigma, xi, a;   // cont_dim x batch (a = tanh(mu + sigma*xi))
  VectorXd logp;           // per-sample log density, summed over dimensions
};

inline ContSample squash_sample(const HybridSpec& spec, const MatrixXd& mu, const MatrixXd& rho,
                                const MatrixXd& xi) {
  const int n = static_cast<int>(mu.cols());
  ContSample cs;
  cs.sigma.resize(spec.cont_dim, n);
  cs.xi = xi;
  cs.a.resize(spec.cont_dim, n);
  cs.logp = VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < spec.cont_dim; ++d) {
      double ls = softclamp_logstd(rho(d, i));
      double sg = std::exp(ls);
      double u = mu(d, i) + sg * xi(d, i);
      double a = std::tanh(u);
      cs.sigma(d, i) = sg;
      cs.a(d, i) = a;
      cs.logp[i] += -0.5 * xi(d, i) * xi(d, i) - ls - 0.5 * std::log(2.0 * M_PI) -
                    std::log(1.0 - a * a + kTanhEps);
    }
  return cs;
}

}  // namespace detail

// L = mean(q1(s,a)-y)^2 + mean(q2(s,a)-y)^2 with hard-sampled next action:
// y = r + gamma(1-done)[min Qbar(s',a') - alpha_d sum_h log pi_h(a'_h) - alpha_c log pi_c(a'_c)]
inline double hybrid_critic_loss(const HybridSpec& spec, const Mlp& actor, const Mlp& q1,
                                 const Mlp& q2, const Mlp& tq1, const Mlp& tq2,
                                 const HybridBatch& batch, const HybridNoise& noise,
                                 MlpGrads* g1 = nullptr, MlpGrads* g2 = nullptr) {
  const int n = static_cast<int>(batch.r.size());
  const int sd = static_cast<int>(batch.s.rows());
  MatrixXd out2 = mlp_forward(actor, batch.s2);

  MatrixXd enc2 = MatrixXd::Zero(spec.action_enc_dim(), n);
  VectorXd logp_d = VectorXd::Zero(n);
  int off = 0;
  for (int h = 0; h < spec.num_heads(); ++h) {
    const int c = spec.head_sizes[h];
    for (int i = 0; i < n; ++i) {
      VectorXd z = out2.block(off, i, c, 1) + noise.gumbel_next.block(off, i, c, 1);
      int pick = 0;
      z.maxCoeff(&pick);
      enc2(off + pick, i) = 1.0;
      logp_d[i] += log_softmax(out2.block(off, i, c, 1))[pick];
    }
    off += c;
  }
  VectorXd logp_c = VectorXd::Zero(n);
  if (spec.cont_dim > 0) {
    const int tc = spec.total_cat();
    detail::ContSample cs = detail::squash_sample(
        spec, out2.middleRows(tc, spec.cont_dim), out2.middleRows(tc + spec.cont_dim, spec.cont_dim),
        noise.xi_next);
    enc2.bottomRows(spec.cont_dim) = cs.a;
    logp_c = cs.logp;
  }

  MatrixXd qin2(sd + spec.action_enc_dim(), n);
  qin2.topRows(sd) = batch.s2;
  qin2.bottomRows(spec.action_enc_dim()) = enc2;
  VectorXd qt = mlp_forward(tq1, qin2).row(0).cwiseMin(mlp_forward(tq2, qin2).row(0)).transpose();
  VectorXd y = batch.r.array() +
               spec.gamma * (1.0 - batch.done.array()) *
                   (qt.array() - spec.alpha_d() * logp_d.array() - spec.alpha_c() * logp_c.array());

  MatrixXd qin(sd + spec.action_enc_dim(), n);
  qin.topRows(sd) = batch.s;
  qin.bottomRows(spec.action_enc_dim()) = batch.a_enc;
  MlpCache c1, c2;
  VectorXd qa = mlp_forward(q1, qin, g1 ? &c1 : nullptr).row(0).transpose();
  VectorXd qb = mlp_forward(q2, qin, g2 ? &c2 : nullptr).row(0).transpose();
  VectorXd e1 = qa - y, e2 = qb - y;
  double loss = (e1.squaredNorm() + e2.squaredNorm()) / n;
  if (g1) mlp_backward(q1, c1, (2.0 / n) * e1.transpose(), *g1);
  if (g2) mlp_backward(q2, c2, (2.0 / n) * e2.transpose(), *g2);
  return loss;
}

// L = mean_b [alpha_d sum_h log pi_h(c_h) + alpha_c log pi_c - min Q(s, yhat, a)]
// with yhat the Gumbel-softmax relaxation that carries the gradient into the heads
inline double hybrid_actor_loss(const HybridSpec& spec, const Mlp& actor, const Mlp& q1,
                                const Mlp& q2, const HybridBatch& batch, const HybridNoise& noise,
                                MlpGrads* ga = nullptr, double* mean_entropy = nullptr) {
  const int n = static_cast<int>(batch.r.size());
  const int sd = static_cast<int>(batch.s.rows());
  const int tc = spec.total_cat();
  MlpCache ca;
  MatrixXd out = mlp_forward(actor, batch.s, ga ? &ca : nullptr);

  MatrixXd yhat = MatrixXd::Zero(tc, n);       // relaxed one-hots
  MatrixXd pi = MatrixXd::Zero(tc, n);         // per-head softmax of raw logits
  std::vector<std::vector<int>> hard(spec.num_heads(), std::vector<int>(n, 0));
  VectorXd logp_d = VectorXd::Zero(n);
  double ent = 0.0;
  int off = 0;
  for (int h = 0; h < spec.num_heads(); ++h) {
    const int c = spec.head_sizes[h];
    for (int i = 0; i < n; ++i) {
      VectorXd logits = out.block(off, i, c, 1);
      VectorXd z = logits + noise.gumbel_cur.block(off, i, c, 1);
      int pick = 0;
      z.maxCoeff(&pick);
      hard[h][i] = pick;
      yhat.block(off, i, c, 1) = softmax(z / spec.gumbel_tau);
      VectorXd p = softmax(logits);
      pi.block(off, i, c, 1) = p;
      logp_d[i] += log_softmax(logits)[pick];
      ent += entropy_of(p) / n;
    }
    off += c;
  }

  detail::ContSample cs;
  if (spec.cont_dim > 0)
    cs = detail::squash_sample(spec, out.middleRows(tc, spec.cont_dim),
                               out.middleRows(tc + spec.cont_dim, spec.cont_dim), noise.xi_cur);

  MatrixXd qin(sd + spec.action_enc_dim(), n);
  qin.topRows(sd) = batch.s;
  qin.middleRows(sd, tc) = yhat;
  if (spec.cont_dim > 0) qin.bottomRows(spec.cont_dim) = cs.a;
  MlpCache cq1, cq2;
  VectorXd qa = mlp_forward(q1, qin, ga ? &cq1 : nullptr).row(0).transpose();
  VectorXd qb = mlp_forward(q2, qin, ga ? &cq2 : nullptr).row(0).transpose();
  VectorXd qmin = qa.cwiseMin(qb);

  double loss = 0.0;
  for (int i = 0; i < n; ++i)
    loss += (spec.alpha_d() * logp_d[i] + (spec.cont_dim > 0 ? spec.alpha_c() * cs.logp[i] : 0.0) -
             qmin[i]) /
            n;
  if (mean_entropy) *mean_entropy = ent;
  if (!ga) return loss;

  // route -1/n into whichever critic attains the per-sample min, then pull the
  // resulting input gradient back through the action encoding
  MatrixXd d1 = MatrixXd::Zero(1, n), d2 = MatrixXd::Zero(1, n);
  for (int i = 0; i < n; ++i) (qa[i] <= qb[i] ? d1(0, i) : d2(0, i)) = -1.0 / n;
  MlpGrads sink1 = MlpGrads::zeros_like(q1), sink2 = MlpGrads::zeros_like(q2);
  MatrixXd din = mlp_backward(q1, cq1, d1, sink1) + mlp_backward(q2, cq2, d2, sink2);

  MatrixXd dout = MatrixXd::Zero(out.rows(), n);
  off = 0;
  for (int h = 0; h < spec.num_heads(); ++h) {
    const int c = spec.head_sizes[h];
    for (int i = 0; i < n; ++i) {
      VectorXd dy = din.block(sd + off, i, c, 1);
      VectorXd yh = yhat.block(off, i, c, 1);
      double dot = yh.dot(dy);
      VectorXd dlog = yh.cwiseProduct(dy.array().matrix() - VectorXd::Constant(c, dot)) /
                      spec.gumbel_tau;
      // entropy term: d log pi(c_h)/d logit_j = [j == c_h] - pi_j
      dlog[hard[h][i]] += spec.alpha_d() / n;
      dlog -= (spec.alpha_d() / n) * pi.block(off, i, c, 1);
      dout.block(off, i, c, 1) = dlog;
    }
    off += c;
  }
  if (spec.cont_dim > 0) {
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < spec.cont_dim; ++d) {
        double a = cs.a(d, i), sg = cs.sigma(d, i), xi = cs.xi(d, i);
        double sech2 = 1.0 - a * a;
        double da_q = din(sd + tc + d, i);
        double dlogp_du = 2.0 * a * sech2 / (sech2 + kTanhEps);
        double du = da_q * sech2 + (spec.alpha_c() / n) * dlogp_du;
        double dls = du * sg * xi - spec.alpha_c() / n;
        dout(tc + d, i) = du;
        dout(tc + spec.cont_dim + d, i) = dls * softclamp_logstd_d(out(tc + spec.cont_dim + d, i));
      }
  }
  mlp_backward(actor, ca, dout, *ga);
  return loss;
}

struct HybridSacConfig {
  int state_dim = 1;
  HybridSpec spec;
  std::vector<int> hidden = {128, 128};
  double lr = 3e-4;
  double tau = 0.005;
  int batch = 64;
  std::size_t buffer_capacity = 100000;
  std::uint64_t seed = 1;
};

class HybridSacAgent {
 public:
  explicit HybridSacAgent(HybridSacConfig cfg)
      : cfg(std::move(cfg)),
        buffer(this->cfg.buffer_capacity),
        init_rng(this->cfg.seed, stream::agent_init),
        rng(this->cfg.seed, stream::agent_noise),
        replay_rng(this->cfg.seed, stream::replay) {
    const HybridSpec& sp = this->cfg.spec;
    std::vector<int> a_sizes{this->cfg.state_dim};
    a_sizes.insert(a_sizes.end(), this->cfg.hidden.begin(), this->cfg.hidden.end());
    a_sizes.push_back(sp.actor_out_dim());
    actor = Mlp::make(a_sizes, init_rng);
    std::vector<int> q_sizes{this->cfg.state_dim + sp.action_enc_dim()};
    q_sizes.insert(q_sizes.end(), this->cfg.hidden.begin(), this->cfg.hidden.end());
    q_sizes.push_back(1);
    q1 = Mlp::make(q_sizes, init_rng);
    q2 = Mlp::make(q_sizes, init_rng);
    tq1 = q1;
    tq2 = q2;
    opt_actor = AdamState::make(actor, this->cfg.lr);
    opt_q1 = AdamState::make(q1, this->cfg.lr);
    opt_q2 = AdamState::make(q2, this->cfg.lr);
  }

  HybridAction act(const VectorXd& s, bool explore) {
    const HybridSpec& sp = cfg.spec;
    VectorXd out = mlp_forward1(actor, s);
    HybridAction a;
    a.cats.resize(sp.num_heads());
    a.cont = VectorXd::Zero(sp.cont_dim);
    int off = 0;
    for (int h = 0; h < sp.num_heads(); ++h) {
      const int c = sp.head_sizes[h];
      VectorXd z = out.segment(off, c);
      if (explore)
        for (int j = 0; j < c; ++j) z[j] += rng.gumbel();
      int pick = 0;
      z.maxCoeff(&pick);
      a.cats[h] = pick;
      off += c;
    }
    for (int d = 0; d < sp.cont_dim; ++d) {
      double mu = out[off + d];
      double u = mu;
      if (explore) u += std::exp(softclamp_logstd(out[off + sp.cont_dim + d])) * rng.normal();
      a.cont[d] = std::tanh(u);
    }
    return a;
  }

  void store(Transition<HybridAction> t) { buffer.push(std::move(t)); }

  HybridBatch make_batch(const std::vector<const Transition<HybridAction>*>& ts) const {
    const int n = static_cast<int>(ts.size());
    const int sd = static_cast<int>(ts[0]->state.size());
    HybridBatch b;
    b.s.resize(sd, n);
    b.s2.resize(sd, n);
    b.a_enc.resize(cfg.spec.action_enc_dim(), n);
    b.r.resize(n);
    b.done.resize(n);
    for (int i = 0; i < n; ++i) {
      b.s.col(i) = ts[i]->state;
      b.s2.col(i) = ts[i]->next_state;
      b.a_enc.col(i) = encode_hybrid_action(cfg.spec, ts[i]->action);
      b.r[i] = ts[i]->reward;
      b.done[i] = ts[i]->done ? 1.0 : 0.0;
    }
    return b;
  }

  UpdateDiagnostics update() {
    if (buffer.size() < static_cast<std::size_t>(cfg.batch)) return {true, 0, 0, 0};
    HybridBatch batch = make_batch(buffer.sample(cfg.batch, replay_rng));
    HybridNoise noise = draw_hybrid_noise(cfg.spec, static_cast<int>(batch.r.size()), rng);
    return update_batch(batch, noise);
  }

  UpdateDiagnostics update_batch(const HybridBatch& batch, const HybridNoise& noise) {
    UpdateDiagnostics d;
    MlpGrads g1 = MlpGrads::zeros_like(q1), g2 = MlpGrads::zeros_like(q2);
    d.critic_loss = hybrid_critic_loss(cfg.spec, actor, q1, q2, tq1, tq2, batch, noise, &g1, &g2);
    adam_step(opt_q1, q1, g1);
    adam_step(opt_q2, q2, g2);
    MlpGrads ga = MlpGrads::zeros_like(actor);
    d.actor_loss = hybrid_actor_loss(cfg.spec, actor, q1, q2, batch, noise, &ga, &d.mean_entropy);
    adam_step(opt_actor, actor, ga);
    soft_update(tq1, q1, cfg.tau);
    soft_update(tq2, q2, cfg.tau);
    return d;
  }

  HybridSacConfig cfg;
  Mlp actor, q1, q2, tq1, tq2;
  AdamState opt_actor, opt_q1, opt_q2;
  ReplayBuffer<HybridAction> buffer;
  Rng init_rng, rng, replay_rng;
};

}  // namespace smartran
