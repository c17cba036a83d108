#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "mbadmm/splitting.hpp"

namespace mbadmm {

struct OracleResult {
  Vector bits;    // entries in {0,1}
  double energy;  // always re-evaluated from bits
};

/// A QUBO minimization backend. `k` is the outer-iteration index (1-based)
/// so schedules like decaying bit-flip noise can depend on it; `seed` keys
/// the RNG stream, and every oracle must be deterministic given (instance,
/// k, seed).
class QuboOracle {
 public:
  virtual ~QuboOracle() = default;
  virtual OracleResult solve(const QuboInstance& q, int k,
                             std::uint64_t seed) = 0;
  virtual std::string name() const = 0;
};

/// Global minimizer by full enumeration, n <= 24. Bitstrings are scanned in
/// integer order (variable i holds bit i of the counter), and the first
/// strict improvement wins, so ties go to the smallest counter value.
OracleResult exact_solve(const QuboInstance& q);

class ExactOracle final : public QuboOracle {
 public:
  OracleResult solve(const QuboInstance& q, int k, std::uint64_t seed) override;
  std::string name() const override { return "exact"; }
};

struct SaParams {
  int sweeps = 1000;
  double t_init = 10.0;
  double t_final = 0.01;
  int restarts = 8;
};

OracleResult sa_solve(const QuboInstance& q, const SaParams& params,
                      std::uint64_t seed);

class SaOracle final : public QuboOracle {
 public:
  explicit SaOracle(SaParams params = {}) : params_(params) {}
  OracleResult solve(const QuboInstance& q, int k, std::uint64_t seed) override;
  std::string name() const override { return "sa"; }

 private:
  SaParams params_;
};

/// Bit-flip probability p_k = min(0.5, p0 / k) at outer iteration k >= 1.
struct NoiseSchedule {
  double p0 = 0.5;
  double at(int k) const;
};

/// Calls the base oracle, then flips each solution bit independently with
/// probability p_k and reports the energy of the flipped string. p0 = 0
/// makes this a bitwise identity wrapper.
class NoisyOracle final : public QuboOracle {
 public:
  NoisyOracle(std::shared_ptr<QuboOracle> base, NoiseSchedule sched)
      : base_(std::move(base)), sched_(sched) {}
  OracleResult solve(const QuboInstance& q, int k, std::uint64_t seed) override;
  std::string name() const override { return "noisy(" + base_->name() + ")"; }

 private:
  std::shared_ptr<QuboOracle> base_;
  NoiseSchedule sched_;
};

std::shared_ptr<QuboOracle> noisy_wrap(std::shared_ptr<QuboOracle> base,
                                       NoiseSchedule sched);

/// Mixes a base seed with the outer-iteration index into an independent
/// stream key (splitmix64 finalization).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k);

}  // namespace mbadmm
