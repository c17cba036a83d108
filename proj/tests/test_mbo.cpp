#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "examples.hpp"

using namespace mbadmm;
namespace ex = mbadmm::testing;

namespace {

MboProblem random_problem(std::mt19937_64& rng, int n_bin) {
  std::normal_distribution<double> g(0.0, 1.0);
  MboProblem p = MboProblem::zeros(n_bin, 0);
  Matrix raw(n_bin, n_bin);
  for (int i = 0; i < n_bin; ++i)
    for (int j = 0; j < n_bin; ++j) raw(i, j) = g(rng);
  p.Q = 0.5 * (raw + raw.transpose());
  for (int i = 0; i < n_bin; ++i) p.a[i] = g(rng);
  return p;
}

Vector random_bits(std::mt19937_64& rng, int n) {
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = (rng() & 1ULL) ? 1.0 : 0.0;
  return x;
}

}  // namespace

TEST_CASE("objective matches hand evaluation") {
  MboProblem p6 = ex::ex6();
  MboPoint pt{Vector(3), Vector(1)};
  pt.x << 1, 0, 0;
  pt.u << 2;
  CHECK(objective(p6, pt) == doctest::Approx(1.0).epsilon(1e-12));

  MboProblem z = MboProblem::zeros(3, 0);
  MboPoint zp{Vector::Zero(3), Vector::Zero(0)};
  CHECK(objective(z, zp) == 0.0);
}

TEST_CASE("objective equals term-by-term re-summation on random data") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    MboProblem p = random_problem(rng, 3);
    Vector x = random_bits(rng, 3);
    double manual = 0.0;
    for (int i = 0; i < 3; ++i) {
      manual += p.a[i] * x[i];
      for (int j = 0; j < 3; ++j) manual += x[i] * p.Q(i, j) * x[j];
    }
    CHECK(objective(p, {x, Vector::Zero(0)}) ==
          doctest::Approx(manual).epsilon(1e-12));
  }
}

TEST_CASE("violation sums positive parts of inequality rows") {
  MboProblem p4 = ex::ex4(1.0);
  MboPoint all_one{Vector::Ones(3), Vector::Zero(0)};
  // 2 + 10 + 1 - 3 = 10 over on the first row, second row satisfied
  CHECK(violation(p4, all_one) == doctest::Approx(10.0));

  MboProblem p3 = ex::ex3();
  MboPoint pt{Vector(2), Vector::Zero(0)};
  pt.x << 0, 1;
  CHECK(violation(p3, pt) == 0.0);
  CHECK(is_feasible(p3, pt, 0.0));
}

TEST_CASE("merit = objective + mu * violation") {
  MboProblem p4 = ex::ex4(1.0);
  MboPoint all_one{Vector::Ones(3), Vector::Zero(0)};
  CHECK(merit(p4, all_one, 1e3) == doctest::Approx(10003.0));

  MboPoint feas{Vector(3), Vector::Zero(0)};
  feas.x << 1, 0, 0;
  CHECK(merit(p4, feas, 1e3) == doctest::Approx(objective(p4, feas)));

  CHECK_THROWS_AS(merit(p4, feas, 0.0), std::invalid_argument);
}

TEST_CASE("merit equality-residual term is opt-in") {
  MboProblem p5 = ex::ex5();
  MboPoint pt{Vector::Zero(3), Vector::Zero(0)};  // violates v + w = 1
  const double base = merit(p5, pt, 1e3);
  CHECK(merit(p5, pt, 1e3, true) == doctest::Approx(base + 1e3));
}

TEST_CASE("is_feasible checks equalities, inequalities and the box") {
  MboProblem p5 = ex::ex5();
  MboPoint opt{Vector(3), Vector::Zero(0)};
  opt.x << 1, 0, 0;
  CHECK(is_feasible(p5, opt, 1e-6));
  MboPoint zero{Vector::Zero(3), Vector::Zero(0)};
  CHECK_FALSE(is_feasible(p5, zero, 1e-6));

  MboProblem p6 = ex::ex6();
  MboPoint pt{Vector(3), Vector(1)};
  pt.x << 1, 0, 0;
  pt.u << 2;
  CHECK(is_feasible(p6, pt, 1e-6));
  p6.u_ub[0] = 1.5;
  CHECK_FALSE(is_feasible(p6, pt, 1e-6));
}

TEST_CASE("residual definitions") {
  Vector x = Vector::Zero(2), z = Vector::Zero(2), y = Vector::Zero(2);
  auto [r0, rr0] = residuals(x, z, y, SplitMode::three_block);
  CHECK(r0 == 0.0);
  CHECK(rr0 == 0.0);

  x << 0, 0;
  z << 0.499, 0.500;
  y << -0.499, -0.499;
  auto [r, rr] = residuals(x, z, y, SplitMode::three_block);
  CHECK(r == doctest::Approx((x - z - y).norm()).epsilon(1e-15));
  CHECK(rr == doctest::Approx(std::hypot(0.499, 0.500)).epsilon(1e-12));

  auto [r2, rr2] = residuals(x, z, y, SplitMode::two_block);
  CHECK(r2 == rr2);
}

TEST_CASE("residuals are norm-homogeneous") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Vector x(4), z(4), y(4);
  for (int i = 0; i < 4; ++i) {
    x[i] = g(rng);
    z[i] = g(rng);
    y[i] = g(rng);
  }
  auto [r, rr] = residuals(x, z, y, SplitMode::three_block);
  const double t = 3.5;
  auto [rt, rrt] = residuals(t * x, t * z, t * y, SplitMode::three_block);
  CHECK(rt == doctest::Approx(t * r).epsilon(1e-12));
  CHECK(rrt == doctest::Approx(t * rr).epsilon(1e-12));
}

TEST_CASE("merit dominates objective; symmetrization leaves objective fixed") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    MboProblem p = ex::ex4(1.0);
    MboPoint pt{random_bits(rng, 3), Vector::Zero(0)};
    CHECK(merit(p, pt, 1e3) >= objective(p, pt));
    if (violation(p, pt) == 0.0)
      CHECK(merit(p, pt, 1e3) == doctest::Approx(objective(p, pt)));

    MboProblem q = random_problem(rng, 4);
    Matrix skew(4, 4);
    std::normal_distribution<double> g;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) skew(i, j) = g(rng);
    MboProblem q2 = q;
    Matrix asym = q.Q + skew - skew.transpose();  // same symmetric part
    q2.Q = 0.5 * (asym + asym.transpose());
    Vector x = random_bits(rng, 4);
    CHECK(objective(q, {x, Vector::Zero(0)}) ==
          doctest::Approx(objective(q2, {x, Vector::Zero(0)})).epsilon(1e-10));
  }
}

TEST_CASE("validation rejects malformed problems") {
  MboProblem p = MboProblem::zeros(2, 0);
  p.Q(0, 1) = 1.0;  // asymmetric
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  MboProblem q = MboProblem::zeros(2, 1);
  q.P_u(0, 0) = -1.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);

  MboProblem r = MboProblem::zeros(2, 1);
  r.u_lb[0] = 2.0;
  r.u_ub[0] = 1.0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);

  MboProblem s = MboProblem::zeros(2, 0);
  s.a = Vector::Zero(3);
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("json round trip including infinities") {
  MboProblem p = ex::ex6();
  p.u_ub[0] = kInf;
  p.u_lb[0] = -kInf;
  MboProblem q = mbo_from_json(mbo_to_json(p));
  CHECK(q.n_bin == p.n_bin);
  CHECK(q.n_cont == p.n_cont);
  CHECK(q.Q.isApprox(p.Q));
  CHECK(q.a.isApprox(p.a));
  CHECK(q.G_eq.isApprox(p.G_eq));
  CHECK(q.G_in.isApprox(p.G_in));
  CHECK(q.L_z.isApprox(p.L_z));
  CHECK(q.L_u.isApprox(p.L_u));
  CHECK(q.u_ub[0] == kInf);
  CHECK(q.u_lb[0] == -kInf);
  CHECK(q.c_u == p.c_u);
}

TEST_CASE("json parse errors are informative") {
  CHECK_THROWS(mbo_from_json("{\"n_bin\": 1}"));
  CHECK_THROWS_AS(
      mbo_from_json(
          "{\"n_bin\":1,\"a\":[\"oops\"],\"Q\":[[0]]}"),
      std::invalid_argument);
}
