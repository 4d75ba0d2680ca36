// Command-line front end: train-and-evaluate runs, user-count sweeps,
// checkpoint-based evaluation and the brute-force rate oracle.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime failure.
#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "smartran/harness.hpp"
#include "smartran/oracle.hpp"

namespace {

using namespace smartran;

struct CommonOpts {
  std::string profile = "full";
  std::string config_path;
  std::uint64_t seed = 0;  // 0 = keep profile/config value
  std::string out_dir;
};

ScenarioConfig build_config(const CommonOpts& o) {
  ScenarioConfig cfg;
  if (o.profile == "full") {
    cfg = ScenarioConfig::full();
  } else if (o.profile == "fast") {
    cfg = ScenarioConfig::fast();
  } else {
    throw std::invalid_argument("unknown profile '" + o.profile + "' (full|fast)");
  }
  if (!o.config_path.empty()) load_config_file(cfg, o.config_path);
  if (o.seed != 0) cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--profile", o.profile, "base parameter profile: full | fast");
  cmd->add_option("--config", o.config_path, "INI file overlaid on the profile");
  cmd->add_option("--seed", o.seed, "override the run seed (nonzero)");
  cmd->add_option("--out", o.out_dir, "output directory for CSV/JSON and checkpoints");
}

std::vector<RunMode> parse_modes(const std::string& csv) {
  std::vector<RunMode> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_run_mode(item));
  if (out.empty()) throw std::invalid_argument("--modes: empty mode list");
  return out;
}

void print_summary_line(const RunSummary& r) {
  std::printf("k=%d mode=%s rate_bps=%.6g overhead_bits=%.6g complexity_mac=%.6g toc=%.6g "
              "wall_s=%.1f\n",
              r.k, r.mode.c_str(), r.rate_bps, r.overhead_bits, r.complexity_mac, r.toc,
              r.wall_seconds);
}

int cmd_run(const CommonOpts& o, const std::string& mode_str, int users) {
  ScenarioConfig cfg = build_config(o);
  RunMode mode = parse_run_mode(mode_str);
  int k = users > 0 ? users : cfg.num_users;
  TrainedStacks st;
  RunSummary r = run_point(cfg, k, mode, &st);
  print_summary_line(r);
  if (!o.out_dir.empty()) {
    emit_results(o.out_dir, cfg, {r});
    save_point_checkpoints(o.out_dir, cfg, k, st);
  }
  return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& modes_str) {
  ScenarioConfig cfg = build_config(o);
  std::vector<RunMode> modes = parse_modes(modes_str);
  std::vector<RunSummary> rows;
  for (int k : cfg.user_counts) {
    for (RunMode m : modes) {
      TrainedStacks st;
      rows.push_back(run_point(cfg, k, m, &st));
      print_summary_line(rows.back());
      if (!o.out_dir.empty()) save_point_checkpoints(o.out_dir, cfg, k, st);
    }
  }
  if (!o.out_dir.empty()) emit_results(o.out_dir, cfg, rows);
  return 0;
}

int cmd_eval(const CommonOpts& o, const std::string& mode_str, int users,
             const std::string& ckpt_dir) {
  ScenarioConfig cfg = build_config(o);
  RunMode mode = parse_run_mode(mode_str);
  int k = users > 0 ? users : cfg.num_users;
  Topology topo = generate_topology(cfg.topology_params(k), cfg.seed);
  TrainedStacks st = load_point_checkpoints(ckpt_dir, cfg, k, topo, mode);
  RunSummary r = eval_point(cfg, k, mode, st);
  print_summary_line(r);
  if (!o.out_dir.empty()) emit_results(o.out_dir, cfg, {r});
  return 0;
}

int cmd_oracle(const CommonOpts& o, int users, int rrs, int carriers, int levels, long slot) {
  // the oracle enumerates every allocation, so it only accepts micro
  // instances; shrink the profile scenario to one rather than inheriting the
  // full-size topology
  ScenarioConfig cfg = build_config(o);
  TopologyParams p = cfg.topology_params(users);
  p.num_rrs = rrs;
  p.num_subcarriers = carriers;
  p.subcarrier_bandwidth_hz = cfg.bandwidth_hz / carriers;
  Topology topo = generate_topology(p, cfg.seed);
  ChannelState ch = sample_channels(topo, slot, cfg.seed);
  OracleResult res = brute_force_best_rate(topo, ch, levels);
  std::printf("k=%d rrs=%d carriers=%d slot=%ld levels=%d best_rate_bps=%.17g leaves=%lld\n",
              users, rrs, carriers, slot, levels, res.best_rate_bps, res.leaves_evaluated);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-cell NOMA downlink simulator with learned resource allocation"};
  app.require_subcommand(1);

  CommonOpts run_o, sweep_o, eval_o, oracle_o;
  std::string run_mode = "smart", sweep_modes = "centralized,distributed,smart";
  std::string eval_mode = "smart", ckpt_dir;
  int run_users = 0, eval_users = 0;
  int oracle_users = 2, oracle_rrs = 1, oracle_carriers = 2, oracle_levels = 5;
  long oracle_slot = 0;

  CLI::App* run = app.add_subcommand("run", "train and evaluate one point");
  add_common(run, run_o);
  run->add_option("--mode", run_mode, "centralized | distributed | smart");
  run->add_option("--users", run_users, "number of users (default: config num_users)");

  CLI::App* sweep = app.add_subcommand("sweep", "run every configured user count");
  add_common(sweep, sweep_o);
  sweep->add_option("--modes", sweep_modes, "comma-separated mode list");

  CLI::App* eval = app.add_subcommand("eval", "evaluate stored checkpoints");
  add_common(eval, eval_o);
  eval->add_option("--mode", eval_mode, "centralized | distributed | smart");
  eval->add_option("--users", eval_users, "number of users (default: config num_users)");
  eval->add_option("--checkpoints", ckpt_dir, "directory holding *.ckpt/*.json")->required();

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force best rate for a tiny scenario");
  add_common(oracle, oracle_o);
  oracle->add_option("--users", oracle_users, "number of users");
  oracle->add_option("--rrs", oracle_rrs, "number of radio sites");
  oracle->add_option("--carriers", oracle_carriers, "number of subcarriers");
  oracle->add_option("--levels", oracle_levels, "power grid levels");
  oracle->add_option("--slot", oracle_slot, "channel slot index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(run_o, run_mode, run_users);
    if (sweep->parsed()) return cmd_sweep(sweep_o, sweep_modes);
    if (eval->parsed()) return cmd_eval(eval_o, eval_mode, eval_users, ckpt_dir);
    if (oracle->parsed())
      return cmd_oracle(oracle_o, oracle_users, oracle_rrs, oracle_carriers, oracle_levels,
                        oracle_slot);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
