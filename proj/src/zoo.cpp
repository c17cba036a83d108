#include "mbadmm/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mbadmm/oracles.hpp"
#include "nlohmann/json.hpp"

namespace mbadmm {

// ---------------------------------------------------------------------------
// Bin packing
// ---------------------------------------------------------------------------

void BpInstance::validate() const {
  if (n < 1 || m < 1 || cap < 1)
    throw std::invalid_argument("BpInstance: n, m, cap must be >= 1");
  if (static_cast<int>(w.size()) != n)
    throw std::invalid_argument("BpInstance: weight count != n");
  for (int x : w)
    if (x < 1 || x > cap)
      throw std::invalid_argument("BpInstance: weight outside [1, cap]");
}

int BpInstance::lower_bound() const {
  const long long total = std::accumulate(w.begin(), w.end(), 0LL);
  return static_cast<int>((total + cap - 1) / cap);
}

std::vector<std::vector<int>> BpIndexMap::bins_of(const Vector& x) const {
  std::vector<std::vector<int>> bins(m);
  bins[0].push_back(0);  // item 0 pinned to bin 0
  for (int i = 0; i < m; ++i)
    for (int j = 1; j < n; ++j)
      if (x[xi_var(i, j)] > 0.5) bins[i].push_back(j);
  return bins;
}

BpEncoding bp_to_mbo(const BpInstance& inst) {
  inst.validate();
  const int n = inst.n, m = inst.m, cap = inst.cap;
  const int l = inst.lower_bound();
  if (l > m)
    throw std::invalid_argument("bp_to_mbo: total weight exceeds m bins");

  BpIndexMap map;
  map.n = n;
  map.m = m;
  map.l = l;
  map.xi.assign(m * n, -1);
  map.chi.assign(m, -1);

  // Assignment bits xi_{i,j} for items j >= 1 over all bins, bin-major; item
  // 0 is pinned to bin 0 and carries no variables. Free bin indicators chi_i
  // only for i >= l (bins below the lower bound are always open).
  int v = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 1; j < n; ++j) map.xi[i * n + j] = v++;
  const int chi_base = v;
  for (int i = l; i < m; ++i) map.chi[i] = v++;
  map.n_bin = v;
  (void)chi_base;

  MboProblem p = MboProblem::zeros(map.n_bin, 0);
  p.c_u = static_cast<double>(l);  // cost of the always-open bins
  for (int i = l; i < m; ++i) p.a[map.chi[i]] = 1.0;

  // One equality per free item: it lands in exactly one bin.
  p.G_eq = Matrix::Zero(n - 1, map.n_bin);
  p.b_eq = Vector::Ones(n - 1);
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < m; ++i) p.G_eq(j - 1, map.xi_var(i, j)) = 1.0;

  // One capacity row per bin; fixed variables fold into the right-hand side.
  p.G_in = Matrix::Zero(m, map.n_bin);
  p.h_in = Vector::Zero(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 1; j < n; ++j) p.G_in(i, map.xi_var(i, j)) = inst.w[j];
    if (i == 0) {
      p.h_in[i] = cap - inst.w[0];
    } else if (i < l) {
      p.h_in[i] = cap;
    } else {
      p.G_in(i, map.chi_var(i)) = -cap;
      p.h_in[i] = 0.0;
    }
  }

  return {std::move(p), std::move(map)};
}

BpInstance gen_bp(int n, int cap, std::uint64_t seed) {
  if (n < 1 || cap < 1)
    throw std::invalid_argument("gen_bp: n and cap must be >= 1");
  BpInstance inst;
  inst.n = n;
  inst.m = n;
  inst.cap = cap;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(1, cap);
  inst.w.resize(n);
  for (int j = 0; j < n; ++j) inst.w[j] = weight(rng);
  return inst;
}

BpInstance read_scholl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  auto next_int = [&](int line_no, const char* what) {
    std::string line;
    while (std::getline(in, line)) {
      // trim
      const auto b = line.find_first_not_of(" \t\r\n");
      if (b == std::string::npos) continue;
      const auto e = line.find_last_not_of(" \t\r\n");
      line = line.substr(b, e - b + 1);
      try {
        std::size_t pos = 0;
        const int v = std::stoi(line, &pos);
        if (pos != line.size()) throw std::invalid_argument("trailing junk");
        return v;
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": expected integer " + what +
                                 " near line " + std::to_string(line_no));
      }
    }
    throw std::runtime_error(path + ": truncated file, missing " +
                             std::string(what));
  };
  BpInstance inst;
  inst.n = next_int(1, "item count");
  inst.cap = next_int(2, "capacity");
  inst.m = inst.n;
  inst.w.resize(inst.n);
  for (int j = 0; j < inst.n; ++j) {
    inst.w[j] = next_int(3 + j, "weight");
    if (inst.w[j] > inst.cap)
      std::cerr << "warning: " << path << ": weight " << inst.w[j]
                << " exceeds capacity " << inst.cap << '\n';
  }
  return inst;
}

void write_scholl(const BpInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << inst.n << '\n' << inst.cap << '\n';
  for (int x : inst.w) out << x << '\n';
}

namespace {

// Karmarkar-Karp differencing split of `items` (indices into inst.w) into two
// sets with near-minimal weight difference.
std::pair<std::vector<int>, std::vector<int>> kk_split(
    const BpInstance& inst, const std::vector<int>& items) {
  struct Node {
    long long diff;
    std::vector<int> a, b;  // a is the heavier side
  };
  std::vector<Node> pool;
  pool.reserve(items.size());
  for (int j : items) pool.push_back({inst.w[j], {j}, {}});
  auto heavier = [](const Node& x, const Node& y) { return x.diff < y.diff; };
  while (pool.size() > 1) {
    std::sort(pool.begin(), pool.end(), heavier);
    Node n1 = std::move(pool.back());  // largest difference
    pool.pop_back();
    Node n2 = std::move(pool.back());
    pool.pop_back();
    // Set the lighter node against the heavier one.
    Node merged;
    merged.diff = n1.diff - n2.diff;
    merged.a = std::move(n1.a);
    merged.a.insert(merged.a.end(), n2.b.begin(), n2.b.end());
    merged.b = std::move(n1.b);
    merged.b.insert(merged.b.end(), n2.a.begin(), n2.a.end());
    pool.push_back(std::move(merged));
  }
  if (pool.empty()) return {{}, {}};
  return {std::move(pool[0].a), std::move(pool[0].b)};
}

long long bin_load(const BpInstance& inst, const std::vector<int>& items) {
  long long s = 0;
  for (int j : items) s += inst.w[j];
  return s;
}

long long over_cap(const BpInstance& inst, const std::vector<int>& items) {
  return std::max(0LL, bin_load(inst, items) - inst.cap);
}

Vector encode(const BpEncoding& enc, const std::vector<std::vector<int>>& bins) {
  const BpIndexMap& map = enc.map;
  Vector x = Vector::Zero(map.n_bin);
  for (int i = 0; i < map.m; ++i) {
    for (int j : bins[i]) {
      if (j == 0) continue;  // pinned
      x[map.xi_var(i, j)] = 1.0;
    }
    if (map.chi_var(i) >= 0 && !bins[i].empty()) x[map.chi_var(i)] = 1.0;
  }
  return x;
}

}  // namespace

Vector kk_local_search(const BpInstance& inst, const BpEncoding& enc,
                       const Vector& x, double mu) {
  const BpIndexMap& map = enc.map;
  const int n = map.n, m = map.m;

  // Repair: each item keeps its lowest-index bin; unassigned items go to the
  // first bin with room, or failing that the least-loaded bin.
  std::vector<std::vector<int>> raw = map.bins_of(x);
  std::vector<int> bin_of(n, -1);
  bin_of[0] = 0;
  for (int i = 0; i < m; ++i)
    for (int j : raw[i])
      if (bin_of[j] < 0) bin_of[j] = i;

  std::vector<std::vector<int>> bins(m);
  std::vector<long long> load(m, 0);
  for (int j = 0; j < n; ++j) {
    if (bin_of[j] >= 0) {
      bins[bin_of[j]].push_back(j);
      load[bin_of[j]] += inst.w[j];
    }
  }
  for (int j = 0; j < n; ++j) {
    if (bin_of[j] >= 0) continue;
    int target = -1;
    for (int i = 0; i < m; ++i)
      if (load[i] + inst.w[j] <= inst.cap) {
        target = i;
        break;
      }
    if (target < 0)
      target = static_cast<int>(
          std::min_element(load.begin(), load.end()) - load.begin());
    bins[target].push_back(j);
    load[target] += inst.w[j];
  }

  auto merit_of = [&](const std::vector<std::vector<int>>& b) {
    MboPoint pt{encode(enc, b), Vector::Zero(0)};
    return merit(enc.problem, pt, mu);
  };
  auto total_over = [&](const std::vector<std::vector<int>>& b) {
    long long s = 0;
    for (const auto& items : b) s += over_cap(inst, items);
    return s;
  };

  // A bin takes part in the pairing when it holds items or is pinned open
  // (i < l): spreading an overloaded bin across the always-open bins is the
  // main way this operator restores capacity feasibility.
  auto in_use = [&](int i) { return !bins[i].empty() || i < map.l; };

  double cur_merit = merit_of(bins);
  for (int i1 = 0; i1 < m; ++i1) {
    if (!in_use(i1)) continue;
    for (int i2 = i1 + 1; i2 < m; ++i2) {
      // An empty closed bin is only worth opening to relieve an overload.
      if (!in_use(i2) && over_cap(inst, bins[i1]) == 0) continue;
      if (bins[i1].empty() && bins[i2].empty()) continue;
      std::vector<int> pool = bins[i1];
      pool.insert(pool.end(), bins[i2].begin(), bins[i2].end());
      auto [sa, sb] = kk_split(inst, pool);
      // Bin 0 must keep item 0.
      if (i1 == 0 &&
          std::find(sa.begin(), sa.end(), 0) == sa.end())
        std::swap(sa, sb);
      const long long before =
          over_cap(inst, bins[i1]) + over_cap(inst, bins[i2]);
      const long long after = over_cap(inst, sa) + over_cap(inst, sb);
      if (after > before) continue;
      auto candidate = bins;
      candidate[i1] = sa;
      candidate[i2] = sb;
      const double cand_merit = merit_of(candidate);
      if (after < before || cand_merit < cur_merit) {
        bins = std::move(candidate);
        cur_merit = merit_of(bins);
        (void)total_over;
      }
    }
  }
  return encode(enc, bins);
}

int ffd_bins(const BpInstance& inst) {
  std::vector<int> w = inst.w;
  std::sort(w.rbegin(), w.rend());
  std::vector<int> load;
  for (int x : w) {
    bool placed = false;
    for (int& li : load)
      if (li + x <= inst.cap) {
        li += x;
        placed = true;
        break;
      }
    if (!placed) load.push_back(x);
  }
  return static_cast<int>(load.size());
}

// ---------------------------------------------------------------------------
// Setup knapsack
// ---------------------------------------------------------------------------

void MiskInstance::validate() const {
  if (K < 1 || T < 1)
    throw std::invalid_argument("MiskInstance: K and T must be >= 1");
  if (!(P_cap > 0.0))
    throw std::invalid_argument("MiskInstance: P_cap must be > 0");
  if (static_cast<int>(S.size()) != K ||
      static_cast<int>(C.size()) != K || static_cast<int>(D.size()) != K)
    throw std::invalid_argument("MiskInstance: K-sized fields inconsistent");
  for (int k = 0; k < K; ++k)
    if (static_cast<int>(C[k].size()) != T ||
        static_cast<int>(D[k].size()) != T)
      throw std::invalid_argument("MiskInstance: T-sized rows inconsistent");
}

double MiskInstance::utilization() const {
  double s = 0.0;
  for (const auto& row : D) s += std::accumulate(row.begin(), row.end(), 0.0);
  return s / P_cap;
}

MiskEncoding misk_to_mbo(const MiskInstance& inst) {
  inst.validate();
  const int K = inst.K, T = inst.T, nc = K * T;
  MboProblem p = MboProblem::zeros(K, nc);
  for (int k = 0; k < K; ++k) p.a[k] = inst.S[k];
  for (int k = 0; k < K; ++k)
    for (int t = 0; t < T; ++t) p.r_u[k * T + t] = inst.C[k][t];
  p.u_lb = Vector::Zero(nc);
  p.u_ub = Vector::Ones(nc);

  // Row 0: shared capacity. Rows 1..KT: xi_kt <= chi_k (an item can only be
  // taken if its family is set up).
  p.L_z = Matrix::Zero(1 + nc, K);
  p.L_u = Matrix::Zero(1 + nc, nc);
  p.h_l = Vector::Zero(1 + nc);
  for (int k = 0; k < K; ++k)
    for (int t = 0; t < T; ++t) p.L_u(0, k * T + t) = inst.D[k][t];
  p.h_l[0] = inst.P_cap;
  for (int k = 0; k < K; ++k)
    for (int t = 0; t < T; ++t) {
      const int r = 1 + k * T + t;
      p.L_u(r, k * T + t) = 1.0;
      p.L_z(r, k) = -1.0;
    }
  return {std::move(p)};
}

MiskInstance gen_misk(int K, int T, int group, std::uint64_t seed) {
  if (K < 1 || T < 1)
    throw std::invalid_argument("gen_misk: K and T must be >= 1");
  if (group != 1 && group != 2)
    throw std::invalid_argument("gen_misk: group must be 1 or 2");

  MiskInstance inst;
  inst.K = K;
  inst.T = T;
  inst.D.assign(K, std::vector<double>(T));
  inst.C.assign(K, std::vector<double>(T));
  inst.S.resize(K);

  // Independent streams so both groups share the same D (and hence P_cap)
  // for the same seed.
  std::mt19937_64 rng_d(mix_seed(seed, 0));
  std::mt19937_64 rng_s(mix_seed(seed, 1));
  std::mt19937_64 rng_c(mix_seed(seed, 2));

  std::uniform_int_distribution<int> d_dist(1, 10);
  double d_sum = 0.0;
  for (int k = 0; k < K; ++k)
    for (int t = 0; t < T; ++t) {
      inst.D[k][t] = d_dist(rng_d);
      d_sum += inst.D[k][t];
    }
  inst.P_cap = std::max(1.0, std::round(d_sum / 2.5));

  if (group == 1) {
    std::uniform_real_distribution<double> s_dist(40.0, 60.0);
    for (int k = 0; k < K; ++k) inst.S[k] = s_dist(rng_s);
    for (int k = 0; k < K; ++k)
      for (int t = 0; t < T; ++t) {
        std::uniform_real_distribution<double> c_dist(-(inst.D[k][t] + 2.0),
                                                      -(inst.D[k][t] - 2.0));
        inst.C[k][t] = c_dist(rng_c);
      }
  } else {
    std::uniform_real_distribution<double> s_dist(0.0, 1.0);
    std::uniform_real_distribution<double> c_dist(-60.0, -40.0);
    for (int k = 0; k < K; ++k) inst.S[k] = s_dist(rng_s);
    for (int k = 0; k < K; ++k)
      for (int t = 0; t < T; ++t) inst.C[k][t] = c_dist(rng_c);
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Instance JSON dumps
// ---------------------------------------------------------------------------

using nlohmann::json;

std::string bp_to_json(const BpInstance& inst) {
  json j{{"n", inst.n}, {"m", inst.m}, {"cap", inst.cap}, {"w", inst.w}};
  return j.dump(2);
}

BpInstance bp_from_json(const std::string& text) {
  json j = json::parse(text);
  BpInstance inst;
  inst.n = j.at("n").get<int>();
  inst.m = j.value("m", inst.n);
  inst.cap = j.at("cap").get<int>();
  inst.w = j.at("w").get<std::vector<int>>();
  inst.validate();
  return inst;
}

std::string misk_to_json(const MiskInstance& inst) {
  json j{{"K", inst.K},    {"T", inst.T}, {"P_cap", inst.P_cap},
         {"S", inst.S},    {"C", inst.C}, {"D", inst.D}};
  return j.dump(2);
}

MiskInstance misk_from_json(const std::string& text) {
  json j = json::parse(text);
  MiskInstance inst;
  inst.K = j.at("K").get<int>();
  inst.T = j.at("T").get<int>();
  inst.P_cap = j.at("P_cap").get<double>();
  inst.S = j.at("S").get<std::vector<double>>();
  inst.C = j.at("C").get<std::vector<std::vector<double>>>();
  inst.D = j.at("D").get<std::vector<std::vector<double>>>();
  inst.validate();
  return inst;
}

// ---------------------------------------------------------------------------
// Exact reference
// ---------------------------------------------------------------------------

ExactResult exact_mbo_solve(const MboProblem& p) {
  p.validate();
  if (p.n_bin > 22)
    throw std::invalid_argument("exact_mbo_solve: n_bin > 22 exceeds guard");

  ExactResult best;
  const std::uint64_t total = 1ULL << p.n_bin;
  Vector x(p.n_bin);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (int i = 0; i < p.n_bin; ++i)
      x[i] = static_cast<double>((mask >> i) & 1ULL);
    if (p.n_eq() > 0 &&
        (p.G_eq * x - p.b_eq).cwiseAbs().maxCoeff() > 1e-9)
      continue;
    if (p.n_gin() > 0 && (p.G_in * x - p.h_in).maxCoeff() > 1e-9) continue;

    if (p.n_cont == 0) {
      if (p.n_l() > 0 && (p.L_z * x - p.h_l).maxCoeff() > 1e-9) continue;
      const double v = p.q(x) + p.c_u;
      if (!best.feasible || v < best.value) {
        best.feasible = true;
        best.value = v;
        best.point = {x, Vector::Zero(0)};
      }
      continue;
    }

    bool ok = false;
    MboPoint pt = polish(p, x, Vector::Zero(p.n_cont), &ok);
    if (!ok || !is_feasible(p, pt, 1e-6)) continue;
    const double v = objective(p, pt);
    if (!best.feasible || v < best.value) {
      best.feasible = true;
      best.value = v;
      best.point = pt;
    }
  }
  return best;
}

double gap(double v, double v_star) {
  return std::abs(v - v_star) / (1e-10 + std::abs(v_star));
}

}  // namespace mbadmm
