// Training / evaluation driver for one network size under the three regimes.
//
// Training interleaves, per slot: encode -> act -> project -> feasibility
// check -> rates -> reward, with the transition closed on the next slot's
// state. A smart run trains the centralized stack, the distributed stack and
// the controller in the same pass: both allocation stacks act on every slot
// (rates for the unchosen one are counterfactual but the channel is shared),
// so every agent sees exactly as many decisions and updates as it would in a
// fixed-mode run of the same length. Evaluation is greedy and touches no RNG,
// so a repeated run is bit-identical.
#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "smartran/allocators.hpp"
#include "smartran/checkpoint.hpp"
#include "smartran/config.hpp"
#include "smartran/io.hpp"
#include "smartran/sdn.hpp"

namespace smartran {

enum class RunMode { Centralized, Distributed, Smart };

inline const char* run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::Centralized: return "centralized";
    case RunMode::Distributed: return "distributed";
    default: return "smart";
  }
}

inline RunMode parse_run_mode(const std::string& s) {
  if (s == "centralized" || s == "cnt") return RunMode::Centralized;
  if (s == "distributed" || s == "dst") return RunMode::Distributed;
  if (s == "smart") return RunMode::Smart;
  throw std::invalid_argument("unknown mode '" + s + "' (centralized|distributed|smart)");
}

// ----------------------------------------------------------- configuration

inline RapTrainConfig rap_train_config(const ScenarioConfig& cfg, bool centralized) {
  RapTrainConfig tc;
  tc.hidden = centralized ? cfg.hidden_cnt : cfg.hidden_dst;
  tc.lr = cfg.lr;
  tc.gamma = cfg.gamma_rap;
  tc.tau = cfg.tau;
  tc.alpha = cfg.alpha;
  tc.gumbel_tau = cfg.gumbel_tau;
  tc.batch = cfg.batch;
  tc.buffer_capacity = cfg.buffer_capacity;
  tc.normalizer_warmup = cfg.normalizer_warmup;
  tc.seed = splitmix64(cfg.seed ^ (centralized ? 0x43ccd1u : 0x9d15e2u));
  return tc;
}

inline SdnConfig make_sdn_config(const ScenarioConfig& cfg, int num_rrs) {
  SdnConfig sc;
  sc.learner = cfg.sdn_learner == "dqn" ? SdnLearner::Dqn : SdnLearner::Sac;
  sc.state_dim = sdn_state_dim(num_rrs);
  sc.hidden = cfg.hidden_sdn;
  sc.lr = cfg.lr;
  sc.gamma = cfg.gamma_sdn;
  sc.tau = cfg.tau;
  sc.alpha = cfg.alpha;
  sc.epsilon = cfg.sdn_epsilon;
  sc.batch = cfg.batch;
  sc.buffer_capacity = cfg.buffer_capacity;
  sc.seed = splitmix64(cfg.seed ^ 0x5dc342u);
  return sc;
}

// ------------------------------------------------------------- complexity

inline std::vector<std::vector<int>> rap_layer_sizes(const RapDims& dims,
                                                     const std::vector<int>& hidden) {
  int tc = 0;
  for (int c : dims.head_sizes) tc += c;
  std::vector<int> actor{dims.state_dim};
  actor.insert(actor.end(), hidden.begin(), hidden.end());
  actor.push_back(tc + 2 * dims.cont_dim);
  std::vector<int> critic{dims.state_dim + tc + dims.cont_dim};
  critic.insert(critic.end(), hidden.begin(), hidden.end());
  critic.push_back(1);
  return {actor, critic, critic};
}

inline ComplexityModel make_complexity(std::vector<std::vector<int>> nets,
                                       const ScenarioConfig& cfg) {
  ComplexityModel cm;
  cm.layer_sizes = std::move(nets);
  cm.minibatch = cfg.batch;
  cm.updates_per_slot = 1.0 / cfg.update_every;
  return cm;
}

inline double centralized_complexity_mac(const ScenarioConfig& cfg, int k) {
  RapDims dims = centralized_rap_dims(cfg.num_rrs, cfg.num_subcarriers, cfg.l_max,
                                      per_cell_budget(k, cfg.num_rrs));
  return agent_complexity_mac(make_complexity(rap_layer_sizes(dims, cfg.hidden_cnt), cfg));
}

inline double distributed_complexity_mac(const ScenarioConfig& cfg, int k) {
  RapDims dims = distributed_rap_dims(cfg.num_subcarriers, cfg.l_max,
                                      per_cell_budget(k, cfg.num_rrs));
  return cfg.num_rrs *
         agent_complexity_mac(make_complexity(rap_layer_sizes(dims, cfg.hidden_dst), cfg));
}

// reference point for the TOC normalizers: the centralized scheme at ref_users
inline TocWeights resolve_toc_weights(const ScenarioConfig& cfg) {
  TocWeights w;
  w.w_overhead = cfg.w_overhead;
  w.w_complexity = cfg.w_complexity;
  w.overhead_ref_bits =
      cfg.overhead_ref_bits > 0
          ? cfg.overhead_ref_bits
          : static_cast<double>(cfg.ref_users) * cfg.num_subcarriers *
                (2.0 * cfg.bits.csi + cfg.bits.subcarrier + cfg.bits.power);
  w.complexity_ref_mac = cfg.complexity_ref_mac > 0 ? cfg.complexity_ref_mac
                                                    : centralized_complexity_mac(cfg, cfg.ref_users);
  return w;
}

// ------------------------------------------------------------ slot stacks

inline void assert_feasible(const Topology& topo, const Allocation& a) {
  Feasibility f = validate_allocation(topo, a);
  if (f.ok) return;
  std::string msg = "infeasible allocation:";
  for (const auto& v : f.violations) msg += "\n  - " + v;
  throw FeasibilityError(msg);
}

struct CntStack {
  CentralizedAllocator alloc;
  bool has_pending = false;
  VectorXd pend_s;
  HybridAction pend_a;
  double pend_r = 0.0;

  CntStack(const Topology& topo, const RapTrainConfig& tc) : alloc(topo, tc) {}

  RateReport train_step(const Topology& topo, const ChannelState& ch, bool update_now) {
    VectorXd s = alloc.encode(topo, ch, true);
    if (has_pending) alloc.agent().store({pend_s, pend_a, pend_r, s, false});
    HybridAction a = alloc.decide(s, true);
    Allocation al = alloc.apply(topo, a);
    assert_feasible(topo, al);
    RateReport rep = compute_rates(topo, ch, al);
    pend_s = std::move(s);
    pend_a = std::move(a);
    pend_r = alloc.reward(topo, rep);
    has_pending = true;
    if (update_now) alloc.agent().update();
    return rep;
  }

  RateReport eval_step(const Topology& topo, const ChannelState& ch) {
    VectorXd s = alloc.encode(topo, ch, false);
    Allocation al = alloc.apply(topo, alloc.decide(s, false));
    assert_feasible(topo, al);
    return compute_rates(topo, ch, al);
  }
};

struct DstStack {
  DistributedAllocator alloc;
  struct Pending {
    VectorXd s;
    HybridAction a;
    double r = 0.0;
  };
  std::vector<Pending> pend;
  bool has_pending = false;

  DstStack(const Topology& topo, const RapTrainConfig& tc)
      : alloc(topo, tc), pend(topo.num_rrs()) {}

  RateReport train_step(const Topology& topo, const ChannelState& ch, bool update_now) {
    const int B = alloc.num_agents();
    std::vector<VectorXd> states(B);
    for (int b = 0; b < B; ++b) states[b] = alloc.encode(topo, ch, b, true);
    if (has_pending)
      for (int b = 0; b < B; ++b)
        alloc.agent(b).store({pend[b].s, pend[b].a, pend[b].r, states[b], false});
    std::vector<HybridAction> acts(B);
    for (int b = 0; b < B; ++b) acts[b] = alloc.decide(b, states[b], true);
    Allocation al = alloc.apply(topo, acts);
    assert_feasible(topo, al);
    RateReport rep = compute_rates(topo, ch, al);
    for (int b = 0; b < B; ++b)
      pend[b] = {std::move(states[b]), std::move(acts[b]), alloc.reward(topo, rep, b)};
    has_pending = true;
    if (update_now)
      for (int b = 0; b < B; ++b) alloc.agent(b).update();
    return rep;
  }

  RateReport eval_step(const Topology& topo, const ChannelState& ch) {
    const int B = alloc.num_agents();
    std::vector<HybridAction> acts(B);
    for (int b = 0; b < B; ++b)
      acts[b] = alloc.decide(b, alloc.encode(topo, ch, b, false), false);
    Allocation al = alloc.apply(topo, acts);
    assert_feasible(topo, al);
    return compute_rates(topo, ch, al);
  }
};

// everything a finished training pass leaves behind
struct TrainedStacks {
  std::unique_ptr<CntStack> cnt;
  std::unique_ptr<DstStack> dst;
  std::unique_ptr<SdnAgent> sdn;
  TocNormalizer tracker;
  ModeEmas emas;
  std::optional<Mode> prev_mode;
};

// ------------------------------------------------------------------- runs

namespace detail {

struct EvalAccum {
  double rate = 0.0, over = 0.0, cmplx = 0.0;
  std::vector<double> per_user;
  long slots = 0;

  void add(const RateReport& rep, double over_bits, double cmplx_mac) {
    if (per_user.empty()) per_user.assign(rep.per_user_bps.size(), 0.0);
    for (std::size_t i = 0; i < rep.per_user_bps.size(); ++i) per_user[i] += rep.per_user_bps[i];
    rate += rep.total_bps;
    over += over_bits;
    cmplx += cmplx_mac;
    slots++;
  }

  void finish(RunSummary& out, const TocWeights& w) {
    double n = std::max<long>(slots, 1);
    out.rate_bps = rate / n;
    out.overhead_bits = over / n;
    out.complexity_mac = cmplx / n;
    out.toc = toc_score(out.rate_bps, out.overhead_bits, out.complexity_mac, w);
    out.per_user_bps = per_user;
    for (auto& v : out.per_user_bps) v /= n;
  }
};

}  // namespace detail

// greedy evaluation over the post-training slot range; the stacks are read
// but never mutated, so evaluating twice gives identical results
inline RunSummary eval_point(const ScenarioConfig& cfg, int k, RunMode mode, TrainedStacks& st) {
  const auto t0 = std::chrono::steady_clock::now();
  Topology topo = generate_topology(cfg.topology_params(k), cfg.seed);
  const TocWeights w = resolve_toc_weights(cfg);
  const double monitor = sdn_monitoring_bits(topo, cfg.bits);
  const double over_cnt = overhead_bits(Mode::Cnt, topo, cfg.bits) + monitor;
  const double over_dst = overhead_bits(Mode::Dst, topo, cfg.bits) + monitor;
  const double cx_cnt = centralized_complexity_mac(cfg, k);
  const double cx_dst = distributed_complexity_mac(cfg, k);

  RunSummary out;
  out.k = k;
  out.mode = run_mode_name(mode);
  detail::EvalAccum acc;
  ModeEmas emas = st.emas;  // local controller bookkeeping
  std::optional<Mode> prev = st.prev_mode;
  for (long slot = cfg.train_slots; slot < cfg.train_slots + cfg.eval_slots; ++slot) {
    ChannelState ch = sample_channels(topo, slot, cfg.seed);
    Mode m = mode == RunMode::Centralized   ? Mode::Cnt
             : mode == RunMode::Distributed ? Mode::Dst
                                            : st.sdn->select_mode(
                                                  build_sdn_state(topo, ch, prev, emas, slot,
                                                                  cfg.sdn_period),
                                                  false);
    RateReport rep = m == Mode::Cnt ? st.cnt->eval_step(topo, ch) : st.dst->eval_step(topo, ch);
    double over = m == Mode::Cnt ? over_cnt : over_dst;
    double cx = m == Mode::Cnt ? cx_cnt : cx_dst;
    acc.add(rep, over, cx);
    if (mode == RunMode::Smart) {
      double r = sdn_reward(toc_score(rep.total_bps, over, cx, w), st.tracker.value());
      emas.update(m, r, cfg.sdn_ema_beta);
      auto [xc, xd] = mode_one_hot(m);
      out.decisions.push_back({slot, xc, xd, r});
      prev = m;
    }
  }
  acc.finish(out, w);
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

inline TrainedStacks train_point(const ScenarioConfig& cfg, int k, RunMode mode) {
  cfg.validate();
  Topology topo = generate_topology(cfg.topology_params(k), cfg.seed);
  const TocWeights w = resolve_toc_weights(cfg);
  const double monitor = sdn_monitoring_bits(topo, cfg.bits);
  const double over_cnt = overhead_bits(Mode::Cnt, topo, cfg.bits) + monitor;
  const double over_dst = overhead_bits(Mode::Dst, topo, cfg.bits) + monitor;
  const double cx_cnt = centralized_complexity_mac(cfg, k);
  const double cx_dst = distributed_complexity_mac(cfg, k);

  TrainedStacks st;
  if (mode != RunMode::Distributed)
    st.cnt = std::make_unique<CntStack>(topo, rap_train_config(cfg, true));
  if (mode != RunMode::Centralized)
    st.dst = std::make_unique<DstStack>(topo, rap_train_config(cfg, false));

  if (mode != RunMode::Smart) {
    for (long slot = 0; slot < cfg.train_slots; ++slot) {
      ChannelState ch = sample_channels(topo, slot, cfg.seed);
      bool upd = slot % cfg.update_every == 0;
      if (st.cnt)
        st.cnt->train_step(topo, ch, upd);
      else
        st.dst->train_step(topo, ch, upd);
    }
    return st;
  }

  st.sdn = std::make_unique<SdnAgent>(make_sdn_config(cfg, topo.num_rrs()));
  bool has_pending = false;
  VectorXd pend_s;
  int pend_a = 0;
  double pend_r = 0.0;
  for (long slot = 0; slot < cfg.train_slots; ++slot) {
    ChannelState ch = sample_channels(topo, slot, cfg.seed);
    bool upd = slot % cfg.update_every == 0;
    RateReport rc = st.cnt->train_step(topo, ch, upd);
    RateReport rd = st.dst->train_step(topo, ch, upd);
    VectorXd s = build_sdn_state(topo, ch, st.prev_mode, st.emas, slot, cfg.sdn_period);
    if (has_pending) {
      st.sdn->store({pend_s, pend_a, pend_r, s, false});
      if (upd) st.sdn->update();
    }
    Mode m = st.sdn->select_mode(s, true);
    const RateReport& rep = m == Mode::Cnt ? rc : rd;
    double toc = toc_score(rep.total_bps, m == Mode::Cnt ? over_cnt : over_dst,
                           m == Mode::Cnt ? cx_cnt : cx_dst, w);
    double r = sdn_reward(toc, st.tracker.update(toc));
    st.emas.update(m, r, cfg.sdn_ema_beta);
    pend_s = std::move(s);
    pend_a = m == Mode::Cnt ? 0 : 1;
    pend_r = r;
    has_pending = true;
    st.prev_mode = m;
  }
  return st;
}

inline RunSummary run_point(const ScenarioConfig& cfg, int k, RunMode mode,
                            TrainedStacks* keep = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  TrainedStacks st = train_point(cfg, k, mode);
  RunSummary out = eval_point(cfg, k, mode, st);
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (keep) *keep = std::move(st);
  return out;
}

inline std::vector<RunSummary> run_sweep(const ScenarioConfig& cfg,
                                         const std::vector<RunMode>& modes) {
  std::vector<RunSummary> rows;
  for (int k : cfg.user_counts)
    for (RunMode m : modes) rows.push_back(run_point(cfg, k, m));
  return rows;
}

// ------------------------------------------------------------ checkpoints

namespace detail {

inline void write_json(const std::string& path, const nlohmann::json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  nlohmann::json j;
  is >> j;
  return j;
}

inline void save_hybrid(const std::string& stem, const HybridSacAgent& agent,
                        const GainNormalizer& norm, const nlohmann::json& extra) {
  save_networks(stem + ".ckpt",
                {{"actor", agent.actor}, {"q1", agent.q1}, {"q2", agent.q2}});
  nlohmann::json j = extra;
  j["state_dim"] = agent.cfg.state_dim;
  j["normalizer"] = {{"mean", norm.mean()}, {"std", norm.std()}};
  write_json(stem + ".json", j);
}

inline void load_hybrid(const std::string& stem, HybridSacAgent& agent, GainNormalizer& norm) {
  auto nets = load_networks(stem + ".ckpt");
  agent.actor = find_network(nets, "actor");
  agent.q1 = find_network(nets, "q1");
  agent.q2 = find_network(nets, "q2");
  agent.tq1 = agent.q1;
  agent.tq2 = agent.q2;
  nlohmann::json j = read_json(stem + ".json");
  norm.restore(j.at("normalizer").at("mean").get<double>(),
               j.at("normalizer").at("std").get<double>());
}

}  // namespace detail

inline void save_point_checkpoints(const std::string& dir, const ScenarioConfig& cfg, int k,
                                   const TrainedStacks& st) {
  std::filesystem::create_directories(dir);
  const std::string kk = std::to_string(k);
  if (st.cnt)
    detail::save_hybrid(dir + "/cnt_k" + kk, st.cnt->alloc.agent(),
                        st.cnt->alloc.codec().normalizer(),
                        {{"kind", "centralized"}, {"k", k}, {"k_max", st.cnt->alloc.k_max()}});
  if (st.dst)
    for (int b = 0; b < st.dst->alloc.num_agents(); ++b)
      detail::save_hybrid(dir + "/dst_rrs" + std::to_string(b) + "_k" + kk,
                          st.dst->alloc.agent(b), st.dst->alloc.codec(b).normalizer(),
                          {{"kind", "distributed"},
                           {"k", k},
                           {"rrs", b},
                           {"k_max", st.dst->alloc.k_max()}});
  if (st.sdn) {
    std::vector<NamedNet> nets;
    if (st.sdn->sac) {
      nets = {{"actor", st.sdn->sac->actor}, {"q1", st.sdn->sac->q1}, {"q2", st.sdn->sac->q2}};
    } else {
      nets = {{"q", st.sdn->dqn->q}};
    }
    save_networks(dir + "/sdn_k" + kk + ".ckpt", nets);
    nlohmann::json j = {{"kind", "sdn"},
                        {"k", k},
                        {"learner", st.sdn->sac ? "sac" : "dqn"},
                        {"toc_peak", st.tracker.value()},
                        {"ema_cnt", st.emas.cnt},
                        {"ema_dst", st.emas.dst},
                        {"prev_mode", st.prev_mode ? (*st.prev_mode == Mode::Cnt ? 0 : 1) : -1}};
    detail::write_json(dir + "/sdn_k" + kk + ".json", j);
  }
}

// rebuilds the stacks a mode needs and restores weights and codec statistics
inline TrainedStacks load_point_checkpoints(const std::string& dir, const ScenarioConfig& cfg,
                                            int k, const Topology& topo, RunMode mode) {
  TrainedStacks st;
  const std::string kk = std::to_string(k);
  const bool need_cnt = mode != RunMode::Distributed;
  const bool need_dst = mode != RunMode::Centralized;
  if (need_cnt) {
    st.cnt = std::make_unique<CntStack>(topo, rap_train_config(cfg, true));
    detail::load_hybrid(dir + "/cnt_k" + kk, st.cnt->alloc.agent(),
                        st.cnt->alloc.codec().normalizer());
  }
  if (need_dst) {
    st.dst = std::make_unique<DstStack>(topo, rap_train_config(cfg, false));
    for (int b = 0; b < st.dst->alloc.num_agents(); ++b)
      detail::load_hybrid(dir + "/dst_rrs" + std::to_string(b) + "_k" + kk,
                          st.dst->alloc.agent(b), st.dst->alloc.codec(b).normalizer());
  }
  if (mode == RunMode::Smart) {
    nlohmann::json j = detail::read_json(dir + "/sdn_k" + kk + ".json");
    ScenarioConfig sc = cfg;
    sc.sdn_learner = j.at("learner").get<std::string>();
    st.sdn = std::make_unique<SdnAgent>(make_sdn_config(sc, topo.num_rrs()));
    auto nets = load_networks(dir + "/sdn_k" + kk + ".ckpt");
    if (st.sdn->sac) {
      st.sdn->sac->actor = find_network(nets, "actor");
      st.sdn->sac->q1 = find_network(nets, "q1");
      st.sdn->sac->q2 = find_network(nets, "q2");
      st.sdn->sac->tq1 = st.sdn->sac->q1;
      st.sdn->sac->tq2 = st.sdn->sac->q2;
    } else {
      st.sdn->dqn->q = find_network(nets, "q");
      st.sdn->dqn->tq = st.sdn->dqn->q;
    }
    st.tracker.restore(j.at("toc_peak").get<double>());
    st.emas.cnt = j.at("ema_cnt").get<double>();
    st.emas.dst = j.at("ema_dst").get<double>();
    int pm = j.at("prev_mode").get<int>();
    if (pm >= 0) st.prev_mode = pm == 0 ? Mode::Cnt : Mode::Dst;
  }
  return st;
}

}  // namespace smartran
