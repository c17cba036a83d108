#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbadmm/oracles.hpp"
#include "mbadmm/qp.hpp"

namespace mbadmm {

struct AdmmConfig {
  SplitMode mode = SplitMode::three_block;

  double rho_init = 1e4;
  double rho_growth = 1.1;  // multiplicative, applied every iteration
  double rho_cap = 1e7;
  bool rho_fixed = false;

  double beta_init = 1e3;
  double beta_gamma = 2.0;  // beta <- gamma*beta when ||xbar_k|| <= omega*||xbar_{k-1}||
  double beta_omega = 0.5;
  bool beta_fixed = false;

  double c = 1e5;   // equality penalty
  double mu = 1e3;  // merit weight on constraint violation
  bool merit_include_equality = false;

  double eps = 1e-4;
  int max_iter = 500;
  double time_limit = 3600.0;  // seconds
  std::uint64_t seed = 0;
  bool polish = false;

  // Optional warm starts; empty means all-zero vectors of the right size.
  Vector x0, z0, u0, y0, lambda0;

  void validate() const;  // throws std::invalid_argument
};

struct TraceRecord {
  int k = 0;
  double objective = 0.0;
  double merit = 0.0;
  double r = 0.0;
  double rr = 0.0;
  double rho = 0.0;
  double beta = 0.0;
  std::optional<double> qubo_exact_gap;
  double elapsed_seconds = 0.0;
};

enum class StopReason { tolerance, max_iter, time_limit };
const char* to_string(StopReason r);

struct SolveReport {
  MboPoint best_point;
  double best_merit = 0.0;
  double best_objective = 0.0;
  int best_k = 0;
  int iterations = 0;
  bool converged = false;
  bool feasible = false;
  bool polished = false;
  StopReason termination_reason = StopReason::max_iter;
  std::vector<TraceRecord> trace;
  // Last iterate, for inspecting converged values (z, y, lambda are not part
  // of the returned solution but the worked examples quote them).
  Vector final_x, final_z, final_u, final_y, final_lambda;
};

struct SolveOptions {
  // Run exact_solve next to the active oracle each iteration and record the
  // energy gap in the trace (requires the QUBO to fit the enumeration guard).
  bool track_qubo_gap = false;
};

SolveReport solve(const MboProblem& p, const AdmmConfig& cfg, QuboOracle& oracle,
                  const SolveOptions& opts = {});

/// Fix the binary part and re-solve the continuous restriction
///   min phi(u)  s.t.  L_z x + L_u u <= h_l,  u_lb <= u <= u_ub.
/// Returns (x, u*); if the restriction is infeasible the original u is kept
/// and *ok is set to false.
MboPoint polish(const MboProblem& p, const Vector& x, const Vector& u_fallback,
                bool* ok = nullptr);

struct DiagnosticReport {
  bool penalty_condition;     // rho_init > max(beta_init, c)
  bool penalty_condition_cap; // rho_cap  > max(beta_init, c)
  bool equality_priority;     // c >= rho_init: equalities weigh more than the splitting
  bool has_continuous;
  bool has_equalities;
  std::vector<std::string> notes;
};

DiagnosticReport diagnose(const MboProblem& p, const AdmmConfig& cfg);

std::string trace_to_csv(const std::vector<TraceRecord>& trace);
void save_trace_csv(const std::vector<TraceRecord>& trace,
                    const std::string& path);

std::string report_to_json(const SolveReport& rep);
void save_report(const SolveReport& rep, const std::string& path);

}  // namespace mbadmm
