#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "doctest.h"
#include "examples.hpp"
#include "mbadmm/admm.hpp"

using namespace mbadmm;
namespace ex = mbadmm::testing;

namespace {

AdmmConfig fixed_cfg(SplitMode mode, double rho, double beta, double c) {
  AdmmConfig cfg;
  cfg.mode = mode;
  cfg.rho_init = rho;
  cfg.rho_cap = std::max(rho, cfg.rho_cap);
  cfg.rho_fixed = true;
  cfg.beta_init = beta;
  cfg.beta_fixed = true;
  cfg.c = c;
  return cfg;
}

}  // namespace

TEST_CASE("two-variable toy converges to the global optimum from (0, 0.5)") {
  AdmmConfig cfg = fixed_cfg(SplitMode::two_block, 100.0, 1000.0, 0.0);
  cfg.x0 = Vector::Zero(1);
  cfg.z0 = Vector::Constant(1, 0.5);
  cfg.u0 = Vector::Constant(1, 0.5);
  ExactOracle oracle;
  SolveReport rep = solve(ex::ex1(), cfg, oracle);
  CHECK(rep.best_point.x[0] == 1.0);
  CHECK(rep.final_z[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rep.final_lambda[0] == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("three-block toy with a lower-bounded copy") {
  AdmmConfig cfg = fixed_cfg(SplitMode::three_block, 1001.0, 1000.0, 0.0);
  cfg.eps = 1e-6;
  ExactOracle oracle;
  SolveReport rep = solve(ex::ex2(), cfg, oracle);
  CHECK(rep.best_point.x[0] == 1.0);
  CHECK(rep.final_z[0] == doctest::Approx(0.998).epsilon(5e-3));
  CHECK(rep.final_y[0] == doctest::Approx(0.002).epsilon(5e-1));
  CHECK(rep.final_lambda[0] == doctest::Approx(1.996).epsilon(5e-3));
}

TEST_CASE("mixed continuous problem reaches its optimum") {
  AdmmConfig cfg = fixed_cfg(SplitMode::three_block, 1001.0, 1000.0, 900.0);
  ExactOracle oracle;
  SolveReport rep = solve(ex::ex6(), cfg, oracle);
  Vector want(3);
  want << 1, 0, 0;
  CHECK(rep.best_point.x == want);
  CHECK(rep.best_point.u[0] == doctest::Approx(2.0).epsilon(5e-3));
  CHECK(rep.best_objective == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(rep.feasible);
}

TEST_CASE("two-block mode keeps y identically zero") {
  AdmmConfig cfg = fixed_cfg(SplitMode::two_block, 1001.0, 1000.0, 0.0);
  cfg.max_iter = 40;
  ExactOracle oracle;
  SolveReport rep = solve(ex::ex3(), cfg, oracle);
  CHECK(rep.final_y.isZero(0.0));
}

TEST_CASE("best merit equals the minimum over the trace") {
  AdmmConfig cfg = fixed_cfg(SplitMode::three_block, 1001.0, 1000.0, 0.0);
  cfg.max_iter = 60;
  ExactOracle oracle;
  SolveReport rep = solve(ex::ex4(1.0), cfg, oracle);
  double min_merit = kInf;
  int first_argmin = 0;
  for (const auto& t : rep.trace)
    if (t.merit < min_merit) {
      min_merit = t.merit;
      first_argmin = t.k;
    }
  CHECK(rep.best_merit == min_merit);
  CHECK(rep.best_k == first_argmin);  // earliest iterate wins ties
}

TEST_CASE("rho schedule is monotone and capped, beta nondecreasing") {
  AdmmConfig cfg;
  cfg.mode = SplitMode::three_block;
  cfg.rho_init = 10.0;
  cfg.rho_growth = 2.0;
  cfg.rho_cap = 100.0;
  cfg.max_iter = 30;
  cfg.eps = 0.0;
  ExactOracle oracle;
  SolveReport rep = solve(ex::ex3(), cfg, oracle);
  for (std::size_t i = 1; i < rep.trace.size(); ++i) {
    CHECK(rep.trace[i].rho >= rep.trace[i - 1].rho);
    CHECK(rep.trace[i].rho <= 100.0);
    CHECK(rep.trace[i].beta >= rep.trace[i - 1].beta);
  }
  CHECK(rep.trace.back().rho == 100.0);
}

TEST_CASE("reruns with the same seed reproduce the trace bit for bit") {
  AdmmConfig cfg;
  cfg.mode = SplitMode::three_block;
  cfg.max_iter = 25;
  cfg.eps = 0.0;
  cfg.seed = 31337;
  SaOracle o1, o2;
  SolveReport a = solve(ex::ex5(), cfg, o1);
  SolveReport b = solve(ex::ex5(), cfg, o2);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].merit == b.trace[i].merit);
    CHECK(a.trace[i].r == b.trace[i].r);
    CHECK(a.trace[i].rr == b.trace[i].rr);
    CHECK(a.trace[i].objective == b.trace[i].objective);
  }
  CHECK(a.best_point.x == b.best_point.x);
}

TEST_CASE("termination honors the iteration cap") {
  AdmmConfig cfg = fixed_cfg(SplitMode::two_block, 1001.0, 1000.0, 0.0);
  cfg.max_iter = 7;
  cfg.eps = 0.0;
  ExactOracle oracle;
  SolveReport rep = solve(ex::ex3(), cfg, oracle);
  CHECK(rep.iterations == 7);
  CHECK(rep.termination_reason == StopReason::max_iter);
}

TEST_CASE("config validation") {
  AdmmConfig cfg;
  cfg.rho_init = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AdmmConfig{};
  cfg.beta_omega = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AdmmConfig{};
  cfg.mu = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("diagnostics report the penalty conditions") {
  AdmmConfig good = fixed_cfg(SplitMode::three_block, 1001.0, 1000.0, 900.0);
  DiagnosticReport d = diagnose(ex::ex5(), good);
  CHECK(d.penalty_condition);
  CHECK_FALSE(d.equality_priority);
  CHECK(d.has_equalities);
  CHECK_FALSE(d.has_continuous);

  AdmmConfig tie = fixed_cfg(SplitMode::three_block, 1000.0, 1000.0, 0.0);
  CHECK_FALSE(diagnose(ex::ex3(), tie).penalty_condition);

  AdmmConfig strong_c = fixed_cfg(SplitMode::three_block, 1001.0, 1000.0, 1100.0);
  DiagnosticReport d2 = diagnose(ex::ex5(), strong_c);
  CHECK(d2.equality_priority);

  CHECK(diagnose(ex::ex6(), good).has_continuous);
}

TEST_CASE("polish solves the continuous restriction") {
  MboProblem p = ex::ex6();
  Vector x(3);
  x << 1, 0, 0;
  bool ok = false;
  MboPoint pt = polish(p, x, Vector::Zero(1), &ok);
  CHECK(ok);
  // the optimum sits exactly on a weakly active row (zero multiplier), so a
  // 1e-8 stationarity certificate only pins u down to ~1e-4
  CHECK(pt.u[0] == doctest::Approx(2.0).epsilon(1e-4));

  // no continuous part: identity
  MboPoint id = polish(ex::ex3(), Vector::Zero(2), Vector::Zero(0), &ok);
  CHECK(ok);
  CHECK(id.u.size() == 0);

  // infeasible restriction is flagged and the fallback returned
  MboProblem q = ex::ex6();
  q.u_lb[0] = 5.0;  // joint row needs u <= 2 at x = [1,0,0]
  MboPoint fb = polish(q, x, Vector::Constant(1, -1.0), &ok);
  CHECK_FALSE(ok);
  CHECK(fb.u[0] == -1.0);
}

TEST_CASE("trace csv format") {
  AdmmConfig cfg = fixed_cfg(SplitMode::three_block, 1001.0, 1000.0, 0.0);
  cfg.max_iter = 5;
  cfg.eps = 0.0;
  ExactOracle oracle;
  SolveReport rep = solve(ex::ex3(), cfg, oracle);
  std::istringstream csv(trace_to_csv(rep.trace));
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "k,objective,merit,r,rr,rho,beta,qubo_exact_gap,elapsed_seconds");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("solve report json contains the solution") {
  AdmmConfig cfg = fixed_cfg(SplitMode::three_block, 1001.0, 1000.0, 900.0);
  ExactOracle oracle;
  SolveReport rep = solve(ex::ex5(), cfg, oracle);
  const std::string j = report_to_json(rep);
  CHECK(j.find("best_x") != std::string::npos);
  CHECK(j.find("termination_reason") != std::string::npos);
}
