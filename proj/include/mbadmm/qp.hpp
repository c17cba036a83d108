#pragma once

#include "mbadmm/splitting.hpp"

namespace mbadmm {

enum class QpStatus { optimal, infeasible, unbounded, max_iter };

struct KktResiduals {
  double primal_inf = 0.0;  // max positive constraint violation
  double dual_inf = 0.0;    // ||Pv + q + A'mu + bound multipliers||_inf
  double comp_slack = 0.0;  // max |mu_i * slack_i|
  double worst() const;
};

struct QpSolution {
  Vector v;
  Vector duals_in;  // one multiplier per A_in row, >= 0
  Vector duals_lb;  // >= 0, zero where lb = -inf
  Vector duals_ub;  // >= 0, zero where ub = +inf
  QpStatus status = QpStatus::max_iter;
  KktResiduals kkt_residuals;
  int iterations = 0;
};

const char* to_string(QpStatus s);

/// Dense primal-dual interior-point solve. status == optimal guarantees all
/// three KKT residuals <= tol. Infeasibility and unboundedness are detected
/// by divergence of the dual or primal iterates.
QpSolution qp_solve(const QpInstance& q, double tol = 1e-8,
                    int max_iter = 20000);

/// Independent certificate check: recomputes the KKT residuals of a candidate
/// solution from scratch. Used by tests on every optimal return.
KktResiduals kkt_check(const QpInstance& q, const QpSolution& s);

}  // namespace mbadmm
