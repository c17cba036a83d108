#include "mbadmm/oracles.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mbadmm {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

OracleResult exact_solve(const QuboInstance& q) {
  const int n = q.size();
  if (n > 24)
    throw std::invalid_argument("exact_solve: n > 24 exceeds enumeration guard");
  if (n == 0) return {Vector::Zero(0), q.off};

  // Gray-code walk: one bit flips per step, so each candidate costs O(n)
  // via the cached field h = Qm s instead of a full O(n^2) evaluation.
  // Tie-breaking matches a plain counter scan (variable i = bit i of the
  // counter, smallest counter wins): exact ties are resolved by the decoded
  // counter value of the visited string.
  Vector s = Vector::Zero(n);
  Vector h = Vector::Zero(n);
  double e = q.off;

  std::uint64_t best_code = 0;
  double best_e = e;

  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t t = 1; t < total; ++t) {
    const int i = std::countr_zero(t);  // bit flipped between consecutive codes
    const double sgn = 1.0 - 2.0 * s[i];
    e += sgn * (2.0 * h[i] + q.lin[i]) + q.Qm(i, i);
    s[i] += sgn;
    h += sgn * q.Qm.col(i);
    const std::uint64_t code = t ^ (t >> 1);
    if (e < best_e || (e == best_e && code < best_code)) {
      best_e = e;
      best_code = code;
    }
  }

  Vector best(n);
  for (int i = 0; i < n; ++i)
    best[i] = static_cast<double>((best_code >> i) & 1ULL);
  // The walk accumulates rounding drift; report a fresh evaluation.
  return {best, q.energy(best)};
}

OracleResult ExactOracle::solve(const QuboInstance& q, int, std::uint64_t) {
  return exact_solve(q);
}

OracleResult sa_solve(const QuboInstance& q, const SaParams& params,
                      std::uint64_t seed) {
  if (params.sweeps < 1 || params.restarts < 1 || params.t_init <= 0.0 ||
      params.t_final <= 0.0 || params.t_final > params.t_init)
    throw std::invalid_argument("sa_solve: invalid annealing parameters");
  const int n = q.size();
  if (n == 0) return {Vector::Zero(0), q.off};

  const double cool = std::pow(params.t_final / params.t_init,
                               1.0 / std::max(1, params.sweeps - 1));

  Vector best;
  double best_e = 0.0;
  bool have_best = false;

  for (int r = 0; r < params.restarts; ++r) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Vector s(n);
    for (int i = 0; i < n; ++i) s[i] = (rng() & 1ULL) ? 1.0 : 0.0;
    // Cached field h = Qm s lets a flip be scored in O(1) and applied in O(n).
    Vector h = q.Qm * s;
    double e = s.dot(h) + q.lin.dot(s) + q.off;

    Vector cur_best = s;
    double cur_best_e = e;

    double t = params.t_init;
    for (int sweep = 0; sweep < params.sweeps; ++sweep, t *= cool) {
      for (int i = 0; i < n; ++i) {
        const double sgn = 1.0 - 2.0 * s[i];  // +1 if flipping 0->1
        const double de = sgn * (2.0 * h[i] + q.lin[i]) + q.Qm(i, i);
        if (de <= 0.0 || unif(rng) < std::exp(-de / t)) {
          s[i] += sgn;
          h += sgn * q.Qm.col(i);
          e += de;
          if (e < cur_best_e) {
            cur_best_e = e;
            cur_best = s;
          }
        }
      }
    }
    if (!have_best || cur_best_e < best_e) {
      best = cur_best;
      best_e = cur_best_e;
      have_best = true;
    }
  }
  // Re-evaluate from scratch: the incremental energy drifts over long runs.
  return {best, q.energy(best)};
}

OracleResult SaOracle::solve(const QuboInstance& q, int k, std::uint64_t seed) {
  return sa_solve(q, params_, mix_seed(seed, static_cast<std::uint64_t>(k)));
}

double NoiseSchedule::at(int k) const {
  if (k < 1) throw std::invalid_argument("NoiseSchedule: k must be >= 1");
  return std::min(0.5, p0 / k);
}

OracleResult NoisyOracle::solve(const QuboInstance& q, int k,
                                std::uint64_t seed) {
  OracleResult base = base_->solve(q, k, seed);
  const double p = sched_.at(k);
  if (p <= 0.0) return base;
  std::mt19937_64 rng(mix_seed(seed ^ 0xa5a5a5a5a5a5a5a5ULL,
                               static_cast<std::uint64_t>(k)));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Eigen::Index i = 0; i < base.bits.size(); ++i)
    if (unif(rng) < p) base.bits[i] = 1.0 - base.bits[i];
  base.energy = q.energy(base.bits);
  return base;
}

std::shared_ptr<QuboOracle> noisy_wrap(std::shared_ptr<QuboOracle> base,
                                       NoiseSchedule sched) {
  return std::make_shared<NoisyOracle>(std::move(base), sched);
}

}  // namespace mbadmm
