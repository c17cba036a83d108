#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mbadmm/bench.hpp"
#include "nlohmann/json.hpp"

namespace fs = std::filesystem;
using namespace mbadmm;

namespace {

struct OracleFlags {
  std::string oracle = "exact";
  double noise_p0 = 0.5;
  SaParams sa;
};

void add_oracle_flags(CLI::App* app, OracleFlags& of) {
  app->add_option("--oracle", of.oracle, "QUBO backend")
      ->check(CLI::IsMember({"exact", "sa", "noisy"}))
      ->capture_default_str();
  app->add_option("--noise-p0", of.noise_p0,
                  "initial bit-flip probability (noisy oracle)")
      ->capture_default_str();
  app->add_option("--sa-sweeps", of.sa.sweeps)->capture_default_str();
  app->add_option("--sa-restarts", of.sa.restarts)->capture_default_str();
}

void add_admm_flags(CLI::App* app, AdmmConfig& cfg, int& blocks) {
  app->add_option("--blocks", blocks, "2- or 3-block splitting")
      ->check(CLI::IsMember({2, 3}))
      ->capture_default_str();
  app->add_option("--rho-init", cfg.rho_init)->capture_default_str();
  app->add_option("--rho-growth", cfg.rho_growth)->capture_default_str();
  app->add_option("--rho-cap", cfg.rho_cap)->capture_default_str();
  app->add_flag("--rho-fixed", cfg.rho_fixed, "disable the rho schedule");
  app->add_option("--beta", cfg.beta_init)->capture_default_str();
  app->add_option("--c", cfg.c, "equality penalty weight")
      ->capture_default_str();
  app->add_option("--mu", cfg.mu, "merit violation weight")
      ->capture_default_str();
  app->add_option("--eps", cfg.eps, "residual tolerance")
      ->capture_default_str();
  app->add_option("--max-iter", cfg.max_iter)->capture_default_str();
  app->add_option("--time-limit", cfg.time_limit, "seconds")
      ->capture_default_str();
  app->add_option("--seed", cfg.seed)->capture_default_str();
  app->add_flag("--polish", cfg.polish,
                "re-solve the continuous part at the returned binaries");
}

std::shared_ptr<QuboOracle> build_oracle(const OracleFlags& of) {
  if (of.oracle == "exact") return std::make_shared<ExactOracle>();
  if (of.oracle == "sa") return std::make_shared<SaOracle>(of.sa);
  return noisy_wrap(std::make_shared<ExactOracle>(),
                    NoiseSchedule{of.noise_p0});
}

nlohmann::json row_json(const InstanceRow& r) {
  nlohmann::json j;
  j["instance"] = r.instance;
  j["n_bin"] = r.n_bin;
  j["IT"] = r.iterations;
  if (r.gap) j["gap"] = *r.gap;
  j["feasible"] = r.feasible;
  j["optimal"] = r.optimal;
  if (r.qubo_frac) j["qubo_frac"] = *r.qubo_frac;
  j["runtime_s"] = r.runtime_s;
  return j;
}

void write_campaign(const CampaignResult& res, const BenchOptions& opts,
                    const std::string& out_dir, const std::string& prefix) {
  fs::create_directories(out_dir);
  const std::string tag =
      prefix + "_s" + std::to_string(opts.master_seed) + "_" +
      config_hash(opts);
  save_campaign_csv(res, out_dir + "/" + tag + ".csv");
  for (const auto& r : res.rows) {
    std::ofstream f(out_dir + "/" + tag + "_" + r.instance + ".json");
    f << row_json(r).dump(2) << '\n';
  }
  std::cout << "wrote " << out_dir << "/" << tag << ".csv ("
            << res.rows.size() << " rows, Feas% " << res.feas_pct
            << ", Opt% " << res.opt_pct << ")\n";
}

// Accepts either a raw MboProblem JSON or a generated packing / setup-knapsack
// instance JSON, sniffed by its fields.
MboProblem load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read instance file: " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("w") && j.contains("cap"))
    return bp_to_mbo(bp_from_json(text)).problem;
  if (j.contains("C") && j.contains("S"))
    return misk_to_mbo(misk_from_json(text)).problem;
  return mbo_from_json(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADMM heuristics for mixed-binary optimization"};
  app.require_subcommand(1);

  // --- solve ---------------------------------------------------------------
  auto* solve_cmd = app.add_subcommand("solve", "solve one instance file");
  std::string instance_path, trace_path, out_path;
  AdmmConfig cfg;
  int blocks = 3;
  OracleFlags of;
  bool track_qubo = false;
  solve_cmd->add_option("instance", instance_path, "instance JSON")
      ->required();
  add_admm_flags(solve_cmd, cfg, blocks);
  add_oracle_flags(solve_cmd, of);
  solve_cmd->add_option("--trace", trace_path, "write per-iteration CSV");
  solve_cmd->add_option("--out", out_path, "write solve report JSON");
  solve_cmd->add_flag("--track-qubo", track_qubo,
                      "record the per-iteration QUBO optimality gap");

  // --- gen-bp --------------------------------------------------------------
  auto* gen_bp_cmd = app.add_subcommand("gen-bp", "generate a packing instance");
  int gn = 4, gcap = 40;
  std::uint64_t gseed = 0;
  std::string gout, gscholl;
  gen_bp_cmd->add_option("--n", gn)->capture_default_str();
  gen_bp_cmd->add_option("--cap", gcap)->capture_default_str();
  gen_bp_cmd->add_option("--seed", gseed)->capture_default_str();
  gen_bp_cmd->add_option("--out", gout, "instance JSON path");
  gen_bp_cmd->add_option("--scholl-out", gscholl, "plain text path");

  // --- gen-misk ------------------------------------------------------------
  auto* gen_misk_cmd =
      app.add_subcommand("gen-misk", "generate a setup-knapsack instance");
  int mK = 5, mT = 10, mgroup = 1;
  std::uint64_t mseed = 0;
  std::string mout;
  gen_misk_cmd->add_option("--families", mK)->capture_default_str();
  gen_misk_cmd->add_option("--items", mT)->capture_default_str();
  gen_misk_cmd->add_option("--group", mgroup)->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  gen_misk_cmd->add_option("--seed", mseed)->capture_default_str();
  gen_misk_cmd->add_option("--out", mout, "instance JSON path");

  // --- bench-bp ------------------------------------------------------------
  auto* bench_bp_cmd =
      app.add_subcommand("bench-bp", "run a packing benchmark campaign");
  std::vector<int> sizes{2, 3, 4};
  int bcap = 40, bcount = 20;
  AdmmConfig bcfg;
  int bblocks = 3;
  OracleFlags bof;
  bool blocal = false, btrack = false;
  std::vector<std::string> scholl_files;
  std::string bout_dir = "results";
  std::uint64_t bseed = 0;
  bench_bp_cmd->add_option("--sizes", sizes, "item counts")
      ->capture_default_str();
  bench_bp_cmd->add_option("--cap", bcap)->capture_default_str();
  bench_bp_cmd->add_option("--count", bcount, "instances per size")
      ->capture_default_str();
  add_admm_flags(bench_bp_cmd, bcfg, bblocks);
  add_oracle_flags(bench_bp_cmd, bof);
  bench_bp_cmd->add_flag("--local-search", blocal,
                         "pairwise bin rebalancing on the returned point");
  bench_bp_cmd->add_flag("--track-qubo", btrack);
  bench_bp_cmd->add_option("--scholl", scholl_files,
                           "solve these files instead of generating");
  bench_bp_cmd->add_option("--out-dir", bout_dir)->capture_default_str();
  bench_bp_cmd->add_option("--master-seed", bseed)->capture_default_str();

  // --- bench-misk ----------------------------------------------------------
  auto* bench_misk_cmd =
      app.add_subcommand("bench-misk", "run a setup-knapsack campaign");
  std::vector<int> Ks{5, 8, 11, 14};
  int bmT = 10, bmgroup = 1, bmcount = 3;
  AdmmConfig bmcfg;
  int bmblocks = 3;
  OracleFlags bmof;
  bool bmtrack = false;
  std::string bmout_dir = "results";
  std::uint64_t bmseed = 0;
  int bm_exact_limit = 22;
  bench_misk_cmd->add_option("--families", Ks)->capture_default_str();
  bench_misk_cmd->add_option("--items", bmT)->capture_default_str();
  bench_misk_cmd->add_option("--group", bmgroup)
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  bench_misk_cmd->add_option("--count", bmcount, "instances per size")
      ->capture_default_str();
  add_admm_flags(bench_misk_cmd, bmcfg, bmblocks);
  add_oracle_flags(bench_misk_cmd, bmof);
  bench_misk_cmd->add_flag("--track-qubo", bmtrack);
  bench_misk_cmd->add_option("--exact-ref-limit", bm_exact_limit,
                             "skip the gap column above this many binaries")
      ->capture_default_str();
  bench_misk_cmd->add_option("--out-dir", bmout_dir)->capture_default_str();
  bench_misk_cmd->add_option("--master-seed", bmseed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      cfg.mode = blocks == 2 ? SplitMode::two_block : SplitMode::three_block;
      MboProblem p = load_instance(instance_path);
      auto oracle = build_oracle(of);
      SolveOptions sopts;
      sopts.track_qubo_gap = track_qubo && p.n_bin <= 22;
      SolveReport rep = solve(p, cfg, *oracle, sopts);
      if (!trace_path.empty()) save_trace_csv(rep.trace, trace_path);
      if (!out_path.empty()) save_report(rep, out_path);
      std::cout << "best objective " << rep.best_objective << " (merit "
                << rep.best_merit << ") after " << rep.iterations
                << " iterations, " << to_string(rep.termination_reason)
                << (rep.feasible ? ", feasible" : ", infeasible") << '\n';
      return 0;
    }
    if (gen_bp_cmd->parsed()) {
      BpInstance inst = gen_bp(gn, gcap, gseed);
      if (!gout.empty()) {
        std::ofstream f(gout);
        f << bp_to_json(inst) << '\n';
      }
      if (!gscholl.empty()) write_scholl(inst, gscholl);
      if (gout.empty() && gscholl.empty()) std::cout << bp_to_json(inst) << '\n';
      return 0;
    }
    if (gen_misk_cmd->parsed()) {
      MiskInstance inst = gen_misk(mK, mT, mgroup, mseed);
      if (!mout.empty()) {
        std::ofstream f(mout);
        f << misk_to_json(inst) << '\n';
      } else {
        std::cout << misk_to_json(inst) << '\n';
      }
      return 0;
    }
    if (bench_bp_cmd->parsed()) {
      BenchOptions opts;
      bcfg.mode = bblocks == 2 ? SplitMode::two_block : SplitMode::three_block;
      opts.cfg = bcfg;
      opts.oracle = bof.oracle;
      opts.sa = bof.sa;
      opts.noise_p0 = bof.noise_p0;
      opts.track_qubo_gap = btrack;
      opts.local_search = blocal;
      opts.master_seed = bseed;
      CampaignResult res;
      if (!scholl_files.empty()) {
        std::vector<BpInstance> instances;
        std::vector<std::string> names;
        for (const auto& f : scholl_files) {
          instances.push_back(read_scholl(f));
          names.push_back(fs::path(f).stem().string());
        }
        res = bench_bp_instances(instances, names, opts);
      } else {
        res = bench_bp(sizes, bcap, bcount, opts);
      }
      write_campaign(res, opts, bout_dir, "bp");
      return 0;
    }
    if (bench_misk_cmd->parsed()) {
      BenchOptions opts;
      bmcfg.mode =
          bmblocks == 2 ? SplitMode::two_block : SplitMode::three_block;
      opts.cfg = bmcfg;
      opts.oracle = bmof.oracle;
      opts.sa = bmof.sa;
      opts.noise_p0 = bmof.noise_p0;
      opts.track_qubo_gap = bmtrack;
      opts.master_seed = bmseed;
      opts.exact_ref_limit = bm_exact_limit;
      CampaignResult res = bench_misk(Ks, bmT, bmgroup, bmcount, opts);
      write_campaign(res, opts, bmout_dir, "misk_g" + std::to_string(bmgroup));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
