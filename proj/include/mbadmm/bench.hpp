#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbadmm/zoo.hpp"

namespace mbadmm {

struct InstanceRow {
  std::string instance;
  int n_bin = 0;
  int iterations = 0;
  std::optional<double> gap;  // absent when the exact reference is skipped
  bool feasible = false;
  bool optimal = false;
  std::optional<double> qubo_frac;
  double runtime_s = 0.0;
};

struct CampaignResult {
  std::vector<InstanceRow> rows;
  // Aggregates over rows; means skip rows whose optional field is absent.
  double mean_iterations = 0.0;
  std::optional<double> mean_gap;
  double feas_pct = 0.0;
  double opt_pct = 0.0;
  std::optional<double> mean_qubo_frac;

  void aggregate();
  std::string to_csv() const;  // rows + trailing "aggregate" row
};

void save_campaign_csv(const CampaignResult& res, const std::string& path);

struct BenchOptions {
  AdmmConfig cfg;
  std::string oracle = "exact";  // exact | sa | noisy
  SaParams sa;
  double noise_p0 = 0.5;
  bool track_qubo_gap = false;
  bool local_search = false;  // BP only: KK rebalancing of the best point
  std::uint64_t master_seed = 0;
  int exact_ref_limit = 22;  // skip v* / gap above this many binaries
};

/// Runs one generated BP campaign: `count` instances per n in `sizes`,
/// weights drawn with seeds derived from (master_seed, n, index).
CampaignResult bench_bp(const std::vector<int>& sizes, int cap, int count,
                        const BenchOptions& opts);

/// Runs one BP campaign over explicit instances (e.g., Scholl files).
CampaignResult bench_bp_instances(const std::vector<BpInstance>& instances,
                                  const std::vector<std::string>& names,
                                  const BenchOptions& opts);

CampaignResult bench_misk(const std::vector<int>& Ks, int T, int group,
                          int count, const BenchOptions& opts);

/// Short hex digest of the config fields that affect results; embedded in
/// output filenames together with the master seed.
std::string config_hash(const BenchOptions& opts);

}  // namespace mbadmm
