#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mbadmm/admm.hpp"
#include "mbadmm/mbo.hpp"

namespace mbadmm {

// ---------------------------------------------------------------------------
// Bin packing: pack n integer-weight items into identical bins of capacity
// cap, minimizing the number of bins used.
// ---------------------------------------------------------------------------

struct BpInstance {
  int n = 0;    // items
  int m = 0;    // available bins (== n for generated instances)
  int cap = 0;  // integer capacity
  std::vector<int> w;  // weights, 1 <= w_j <= cap

  void validate() const;
  /// Lower bound l = ceil(sum(w) / cap).
  int lower_bound() const;
};

/// Maps the reduced binary encoding back to bins and items. Variable order:
/// assignment bits xi_{i,j} first (bin-major over the kept pairs), then the
/// free bin-indicator bits chi_i for i > l. Item 1 is pinned to bin 1 and
/// bins 1..l are pinned open, so those pairs carry no variables.
struct BpIndexMap {
  int n = 0, m = 0, l = 0;
  // xi_var(i, j): flat variable index of xi_{i,j}, or -1 if fixed/absent.
  std::vector<int> xi;  // size m*n, row i*n + j
  std::vector<int> chi; // size m, -1 for i < l (fixed open)
  int n_bin = 0;

  int xi_var(int bin, int item) const { return xi[bin * n + item]; }
  int chi_var(int bin) const { return chi[bin]; }

  /// Decodes a binary vector to an item -> bin map, applying the fixings.
  /// Items assigned to several bins keep all of them (repair handles that).
  std::vector<std::vector<int>> bins_of(const Vector& x) const;
};

struct BpEncoding {
  MboProblem problem;
  BpIndexMap map;
};

BpEncoding bp_to_mbo(const BpInstance& inst);

BpInstance gen_bp(int n, int cap, std::uint64_t seed);

BpInstance read_scholl(const std::string& path);
void write_scholl(const BpInstance& inst, const std::string& path);

/// Repairs the assignment (each item ends in exactly one bin) and then, for
/// every pair of used bins in increasing index order, pools their items and
/// re-splits them by Karmarkar-Karp differencing. A bin counts as used when it
/// holds items or is pinned open (index < l); empty closed bins are skipped
/// unless the partner bin is over capacity, in which case one may be opened.
/// A re-split is kept iff it strictly reduces total capacity violation, or
/// ties it with strictly lower merit. Never increases the post-repair merit.
Vector kk_local_search(const BpInstance& inst, const BpEncoding& enc,
                       const Vector& x, double mu);

/// First-fit-decreasing bin count; upper-bounds the optimum.
int ffd_bins(const BpInstance& inst);

// ---------------------------------------------------------------------------
// Multi-item setup knapsack: K item families, T items each; opening family k
// costs S_k >= 0, taking fraction xi_kt of item (k,t) earns C_kt < 0 and
// consumes D_kt * xi_kt of the shared capacity P_cap.
// ---------------------------------------------------------------------------

struct MiskInstance {
  int K = 0;
  int T = 0;
  double P_cap = 0.0;
  std::vector<double> S;               // K setup costs
  std::vector<std::vector<double>> C;  // K x T values (negative)
  std::vector<std::vector<double>> D;  // K x T consumptions

  void validate() const;
  double utilization() const;  // sum(D) / P_cap
};

struct MiskEncoding {
  MboProblem problem;
  // continuous variable for item (k,t) sits at flat index k*T + t
};

MiskEncoding misk_to_mbo(const MiskInstance& inst);

MiskInstance gen_misk(int K, int T, int group, std::uint64_t seed);

std::string misk_to_json(const MiskInstance& inst);
MiskInstance misk_from_json(const std::string& text);
std::string bp_to_json(const BpInstance& inst);
BpInstance bp_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Exact reference
// ---------------------------------------------------------------------------

struct ExactResult {
  bool feasible = false;
  MboPoint point;
  double value = 0.0;
};

/// Global optimum by enumerating feasible binary vectors (n_bin <= 22) and
/// solving the continuous restriction of each.
ExactResult exact_mbo_solve(const MboProblem& p);

/// |v - v_star| / (1e-10 + |v_star|)
double gap(double v, double v_star);

}  // namespace mbadmm
