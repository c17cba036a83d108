#include "mbadmm/bench.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace mbadmm {

void CampaignResult::aggregate() {
  mean_iterations = 0.0;
  feas_pct = 0.0;
  opt_pct = 0.0;
  double gap_sum = 0.0, qubo_sum = 0.0;
  int gap_n = 0, qubo_n = 0;
  for (const auto& r : rows) {
    mean_iterations += r.iterations;
    if (r.feasible) feas_pct += 1.0;
    if (r.optimal) opt_pct += 1.0;
    if (r.gap) {
      gap_sum += *r.gap;
      ++gap_n;
    }
    if (r.qubo_frac) {
      qubo_sum += *r.qubo_frac;
      ++qubo_n;
    }
  }
  const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
  mean_iterations /= n;
  feas_pct = 100.0 * feas_pct / n;
  opt_pct = 100.0 * opt_pct / n;
  mean_gap = gap_n > 0 ? std::optional<double>(gap_sum / gap_n) : std::nullopt;
  mean_qubo_frac =
      qubo_n > 0 ? std::optional<double>(qubo_sum / qubo_n) : std::nullopt;
}

std::string CampaignResult::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "instance,n_bin,IT,gap,feasible,optimal,qubo_frac,runtime_s\n";
  for (const auto& r : rows) {
    out << r.instance << ',' << r.n_bin << ',' << r.iterations << ',';
    if (r.gap) out << *r.gap;
    out << ',' << (r.feasible ? 1 : 0) << ',' << (r.optimal ? 1 : 0) << ',';
    if (r.qubo_frac) out << *r.qubo_frac;
    out << ',' << r.runtime_s << '\n';
  }
  out << "aggregate," << ',' << mean_iterations << ',';
  if (mean_gap) out << *mean_gap;
  out << ',' << feas_pct << ',' << opt_pct << ',';
  if (mean_qubo_frac) out << *mean_qubo_frac;
  out << ",\n";
  return out.str();
}

void save_campaign_csv(const CampaignResult& res, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write campaign file: " + path);
  f << res.to_csv();
}

namespace {

std::shared_ptr<QuboOracle> make_oracle(const BenchOptions& opts) {
  if (opts.oracle == "exact") return std::make_shared<ExactOracle>();
  if (opts.oracle == "sa") return std::make_shared<SaOracle>(opts.sa);
  if (opts.oracle == "noisy")
    return noisy_wrap(std::make_shared<ExactOracle>(),
                      NoiseSchedule{opts.noise_p0});
  throw std::invalid_argument("unknown oracle: " + opts.oracle);
}

std::optional<double> qubo_fraction(const std::vector<TraceRecord>& trace) {
  int have = 0, hit = 0;
  for (const auto& t : trace)
    if (t.qubo_exact_gap) {
      ++have;
      if (*t.qubo_exact_gap <= 1e-9) ++hit;
    }
  if (have == 0) return std::nullopt;
  return static_cast<double>(hit) / have;
}

// Applies the pairwise rebalancing to every first-block solution, mirroring
// how the packing pipeline repairs raw oracle outputs inside the loop.
class BpLsOracle final : public QuboOracle {
 public:
  BpLsOracle(std::shared_ptr<QuboOracle> base, const BpInstance& inst,
             const BpEncoding& enc, double mu)
      : base_(std::move(base)), inst_(inst), enc_(enc), mu_(mu) {}
  OracleResult solve(const QuboInstance& q, int k,
                     std::uint64_t seed) override {
    OracleResult r = base_->solve(q, k, seed);
    r.bits = kk_local_search(inst_, enc_, r.bits, mu_);
    r.energy = q.energy(r.bits);
    return r;
  }
  std::string name() const override { return base_->name() + "+ls"; }

 private:
  std::shared_ptr<QuboOracle> base_;
  const BpInstance& inst_;
  const BpEncoding& enc_;
  double mu_;
};

InstanceRow run_one(const MboProblem& p, const std::string& name,
                    const BenchOptions& opts, std::uint64_t run_seed,
                    const BpInstance* bp, const BpEncoding* enc) {
  AdmmConfig cfg = opts.cfg;
  cfg.seed = run_seed;

  std::shared_ptr<QuboOracle> oracle = make_oracle(opts);
  if (opts.local_search && bp && enc)
    oracle = std::make_shared<BpLsOracle>(oracle, *bp, *enc, cfg.mu);
  SolveOptions sopts;
  sopts.track_qubo_gap = opts.track_qubo_gap && p.n_bin <= 22;

  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep = solve(p, cfg, *oracle, sopts);

  MboPoint best = rep.best_point;
  if (opts.local_search && bp && enc) {
    Vector improved = kk_local_search(*bp, *enc, best.x, cfg.mu);
    const MboPoint cand{improved, best.u};
    if (merit(p, cand, cfg.mu) <= merit(p, best, cfg.mu)) best = cand;
  }
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  InstanceRow row;
  row.instance = name;
  row.n_bin = p.n_bin;
  row.iterations = rep.iterations;
  row.feasible = is_feasible(p, best, 1e-6);
  row.qubo_frac = qubo_fraction(rep.trace);
  row.runtime_s = runtime;

  if (p.n_bin <= opts.exact_ref_limit) {
    ExactResult ref = exact_mbo_solve(p);
    if (ref.feasible) {
      const double v = objective(p, best);
      row.gap = gap(v, ref.value);
      row.optimal = row.feasible && *row.gap <= 1e-6;
    }
  }
  return row;
}

}  // namespace

CampaignResult bench_bp(const std::vector<int>& sizes, int cap, int count,
                        const BenchOptions& opts) {
  CampaignResult res;
  for (int n : sizes) {
    for (int i = 0; i < count; ++i) {
      const std::uint64_t inst_seed =
          mix_seed(opts.master_seed, (static_cast<std::uint64_t>(n) << 32) | i);
      BpInstance inst = gen_bp(n, cap, inst_seed);
      BpEncoding enc = bp_to_mbo(inst);
      std::ostringstream name;
      name << "bp_n" << n << "_q" << cap << "_i" << i;
      res.rows.push_back(run_one(enc.problem, name.str(), opts,
                                 mix_seed(inst_seed, 1), &inst, &enc));
    }
  }
  res.aggregate();
  return res;
}

CampaignResult bench_bp_instances(const std::vector<BpInstance>& instances,
                                  const std::vector<std::string>& names,
                                  const BenchOptions& opts) {
  if (instances.size() != names.size())
    throw std::invalid_argument("bench_bp_instances: name count mismatch");
  CampaignResult res;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    BpEncoding enc = bp_to_mbo(instances[i]);
    res.rows.push_back(run_one(enc.problem, names[i], opts,
                               mix_seed(opts.master_seed, i), &instances[i],
                               &enc));
  }
  res.aggregate();
  return res;
}

CampaignResult bench_misk(const std::vector<int>& Ks, int T, int group,
                          int count, const BenchOptions& opts) {
  CampaignResult res;
  for (int K : Ks) {
    for (int i = 0; i < count; ++i) {
      const std::uint64_t inst_seed =
          mix_seed(opts.master_seed, (static_cast<std::uint64_t>(K) << 32) | i);
      MiskInstance inst = gen_misk(K, T, group, inst_seed);
      MiskEncoding enc = misk_to_mbo(inst);
      std::ostringstream name;
      name << "misk_k" << K << "_g" << group << "_i" << i;
      res.rows.push_back(run_one(enc.problem, name.str(), opts,
                                 mix_seed(inst_seed, 1), nullptr, nullptr));
    }
  }
  res.aggregate();
  return res;
}

std::string config_hash(const BenchOptions& opts) {
  std::ostringstream key;
  key.precision(17);
  const AdmmConfig& c = opts.cfg;
  key << (c.mode == SplitMode::three_block ? 3 : 2) << '|' << c.rho_init << '|'
      << c.rho_growth << '|' << c.rho_cap << '|' << c.rho_fixed << '|'
      << c.beta_init << '|' << c.beta_gamma << '|' << c.beta_omega << '|'
      << c.beta_fixed << '|' << c.c << '|' << c.mu << '|' << c.eps << '|'
      << c.max_iter << '|' << opts.oracle << '|' << opts.sa.sweeps << '|'
      << opts.sa.restarts << '|' << opts.sa.t_init << '|' << opts.sa.t_final
      << '|' << opts.noise_p0 << '|' << opts.track_qubo_gap << '|'
      << opts.local_search;
  // FNV-1a over the key string
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : key.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(8) << std::setfill('0')
      << static_cast<std::uint32_t>(h ^ (h >> 32));
  return out.str();
}

}  // namespace mbadmm
