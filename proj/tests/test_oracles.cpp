#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mbadmm/oracles.hpp"

using namespace mbadmm;

namespace {

std::mt19937_64 rng(2024);

QuboInstance random_qubo(int n) {
  std::normal_distribution<double> g;
  QuboInstance q;
  Matrix raw(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) raw(i, j) = g(rng);
  q.Qm = 0.5 * (raw + raw.transpose());
  q.lin = Vector(n);
  for (int i = 0; i < n; ++i) q.lin[i] = g(rng);
  q.off = g(rng);
  return q;
}

// Deliberately different brute force: iterates bit vectors via odometer
// increment instead of shifting a counter.
OracleResult reference_enumeration(const QuboInstance& q) {
  const int n = q.size();
  std::vector<int> bits(n, 0);
  Vector v = Vector::Zero(n);
  OracleResult best{v, q.energy(v)};
  while (true) {
    int i = 0;
    while (i < n && bits[i] == 1) bits[i++] = 0;
    if (i == n) break;
    bits[i] = 1;
    for (int j = 0; j < n; ++j) v[j] = bits[j];
    const double e = q.energy(v);
    if (e < best.energy) best = {v, e};
  }
  return best;
}

}  // namespace

TEST_CASE("exact oracle on a positive diagonal returns all zeros") {
  QuboInstance q;
  q.Qm = 5.0 * Matrix::Identity(4, 4);
  q.lin = Vector::Zero(4);
  q.off = 1.5;
  OracleResult r = exact_solve(q);
  CHECK(r.bits.isZero(0.0));
  CHECK(r.energy == doctest::Approx(1.5));
}

TEST_CASE("exact oracle on the two-variable toy first-block model") {
  QuboInstance q;
  q.Qm = Matrix::Constant(1, 1, 50.0);
  q.lin = Vector::Constant(1, -102.0);
  q.off = 50.0;
  OracleResult r = exact_solve(q);
  CHECK(r.bits[0] == 1.0);
  CHECK(r.energy == doctest::Approx(-2.0));
}

TEST_CASE("exact oracle ties break toward the smallest counter value") {
  // Energies of [1,0] and [0,1] coincide; [1,0] corresponds to counter 1
  // (bit 0 set) and must win over [0,1] (counter 2).
  QuboInstance q;
  q.Qm = Matrix::Zero(2, 2);
  q.lin = Vector::Constant(2, -1.0);
  q.Qm(0, 1) = q.Qm(1, 0) = 0.5;  // penalizes taking both
  q.off = 0.0;
  OracleResult r = exact_solve(q);
  CHECK(r.bits[0] == 1.0);
  CHECK(r.bits[1] == 0.0);
}

TEST_CASE("exact oracle matches an independent enumeration on 50 instances") {
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 10);
    QuboInstance q = random_qubo(n);
    OracleResult a = exact_solve(q);
    OracleResult b = reference_enumeration(q);
    CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-12));
    CHECK(a.bits == b.bits);
    CHECK(a.energy == doctest::Approx(q.energy(a.bits)).epsilon(1e-12));
  }
}

TEST_CASE("exact oracle size guard") {
  QuboInstance q = random_qubo(2);
  q.Qm = Matrix::Zero(25, 25);
  q.lin = Vector::Zero(25);
  CHECK_THROWS_AS(exact_solve(q), std::invalid_argument);
}

TEST_CASE("simulated annealing finds the optimum on small instances") {
  int hits = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);  // n <= 10
    QuboInstance q = random_qubo(n);
    OracleResult sa = sa_solve(q, SaParams{}, trial);
    OracleResult ex = exact_solve(q);
    CHECK(sa.energy >= ex.energy - 1e-9);
    CHECK(sa.energy == doctest::Approx(q.energy(sa.bits)).epsilon(1e-12));
    if (sa.energy <= ex.energy + 1e-9) ++hits;
  }
  CHECK(hits >= 95);
}

TEST_CASE("single-variable annealing is always exact") {
  for (int trial = 0; trial < 20; ++trial) {
    QuboInstance q = random_qubo(1);
    CHECK(sa_solve(q, SaParams{}, trial).energy ==
          doctest::Approx(exact_solve(q).energy).epsilon(1e-12));
  }
}

TEST_CASE("annealing is deterministic for a frozen seed") {
  QuboInstance q = random_qubo(8);
  OracleResult a = sa_solve(q, SaParams{}, 99);
  OracleResult b = sa_solve(q, SaParams{}, 99);
  CHECK(a.bits == b.bits);
  CHECK(a.energy == b.energy);
}

TEST_CASE("annealing parameter validation") {
  QuboInstance q = random_qubo(3);
  SaParams bad;
  bad.sweeps = 0;
  CHECK_THROWS_AS(sa_solve(q, bad, 0), std::invalid_argument);
  bad = SaParams{};
  bad.t_final = bad.t_init * 2;
  CHECK_THROWS_AS(sa_solve(q, bad, 0), std::invalid_argument);
}

TEST_CASE("noise schedule decays as p0 / k with a 0.5 cap") {
  NoiseSchedule s{0.5};
  CHECK(s.at(1) == doctest::Approx(0.5));
  CHECK(s.at(2) == doctest::Approx(0.25));
  CHECK(s.at(100) == doctest::Approx(0.005));
  NoiseSchedule wide{2.0};
  CHECK(wide.at(1) == doctest::Approx(0.5));  // capped
  CHECK_THROWS_AS(s.at(0), std::invalid_argument);
}

TEST_CASE("zero-noise wrapper is a bitwise identity") {
  auto base = std::make_shared<ExactOracle>();
  auto wrapped = noisy_wrap(base, NoiseSchedule{0.0});
  for (int trial = 0; trial < 20; ++trial) {
    QuboInstance q = random_qubo(6);
    OracleResult a = base->solve(q, trial + 1, 7);
    OracleResult b = wrapped->solve(q, trial + 1, 7);
    CHECK(a.bits == b.bits);
    CHECK(a.energy == b.energy);
  }
}

TEST_CASE("noisy wrapper reports the energy of the flipped string") {
  auto wrapped =
      noisy_wrap(std::make_shared<ExactOracle>(), NoiseSchedule{0.5});
  QuboInstance q = random_qubo(8);
  for (int k = 1; k <= 30; ++k) {
    OracleResult r = wrapped->solve(q, k, 5);
    CHECK(r.energy == doctest::Approx(q.energy(r.bits)).epsilon(1e-12));
    CHECK(r.energy >= exact_solve(q).energy - 1e-9);
  }
}

TEST_CASE("noisy wrapper flips less often as k grows") {
  auto base = std::make_shared<ExactOracle>();
  auto wrapped = noisy_wrap(base, NoiseSchedule{0.5});
  QuboInstance q = random_qubo(10);
  OracleResult clean = exact_solve(q);
  auto flips_at = [&](int k) {
    int total = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      OracleResult r = wrapped->solve(q, k, seed);
      total += static_cast<int>((r.bits - clean.bits).cwiseAbs().sum());
    }
    return total;
  };
  CHECK(flips_at(1) > flips_at(50));
  CHECK(flips_at(1000) < flips_at(10));
}

TEST_CASE("seed mixing separates streams") {
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
  CHECK(mix_seed(5, 7) == mix_seed(5, 7));
}
