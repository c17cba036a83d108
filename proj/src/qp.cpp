#include "mbadmm/qp.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mbadmm {

double KktResiduals::worst() const {
  return std::max({primal_inf, dual_inf, comp_slack});
}

const char* to_string(QpStatus s) {
  switch (s) {
    case QpStatus::optimal: return "optimal";
    case QpStatus::infeasible: return "infeasible";
    case QpStatus::unbounded: return "unbounded";
    case QpStatus::max_iter: return "max_iter";
  }
  return "?";
}

namespace {

// The solver works on the homogenized form  min 1/2 v'Pv + q'v  s.t. Cv <= d
// where C stacks the A_in rows and one row per finite bound. `origin` maps
// each row back to (kind, index) for the dual split in QpSolution.
enum class RowKind { ineq, lower, upper };

struct Stacked {
  Matrix C;
  Vector d;
  std::vector<RowKind> kind;
  std::vector<int> index;
};

Stacked stack_rows(const QpInstance& qp) {
  const int m = qp.size();
  const int n_in = static_cast<int>(qp.b_in.size());
  int rows = n_in;
  for (int i = 0; i < m; ++i) {
    if (std::isfinite(qp.lb[i])) ++rows;
    if (std::isfinite(qp.ub[i])) ++rows;
  }
  Stacked st;
  st.C = Matrix::Zero(rows, m);
  st.d = Vector::Zero(rows);
  st.kind.resize(rows);
  st.index.resize(rows);
  int r = 0;
  for (int i = 0; i < n_in; ++i, ++r) {
    st.C.row(r) = qp.A_in.row(i);
    st.d[r] = qp.b_in[i];
    st.kind[r] = RowKind::ineq;
    st.index[r] = i;
  }
  for (int i = 0; i < m; ++i) {
    if (std::isfinite(qp.lb[i])) {
      st.C(r, i) = -1.0;
      st.d[r] = -qp.lb[i];
      st.kind[r] = RowKind::lower;
      st.index[r] = i;
      ++r;
    }
    if (std::isfinite(qp.ub[i])) {
      st.C(r, i) = 1.0;
      st.d[r] = qp.ub[i];
      st.kind[r] = RowKind::upper;
      st.index[r] = i;
      ++r;
    }
  }
  return st;
}

KktResiduals residuals_at(const QpInstance& qp, const Stacked& st,
                          const Vector& v, const Vector& w) {
  KktResiduals res;
  if (st.d.size() > 0) {
    Vector slack = st.d - st.C * v;
    res.primal_inf = std::max(0.0, (-slack).maxCoeff());
    for (Eigen::Index i = 0; i < w.size(); ++i)
      res.comp_slack =
          std::max(res.comp_slack, std::abs(w[i] * std::max(slack[i], 0.0)));
    res.dual_inf =
        (qp.P * v + qp.q + st.C.transpose() * w).cwiseAbs().maxCoeff();
  } else {
    res.dual_inf = (qp.P * v + qp.q).cwiseAbs().maxCoeff();
  }
  return res;
}

bool diagonal_pd(const Matrix& P) {
  for (Eigen::Index i = 0; i < P.rows(); ++i) {
    if (P(i, i) <= 0.0) return false;
    for (Eigen::Index j = 0; j < P.cols(); ++j)
      if (i != j && P(i, j) != 0.0) return false;
  }
  return true;
}

}  // namespace

QpSolution qp_solve(const QpInstance& qp, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("qp_solve: tol must be > 0");
  const int n = qp.size();
  if (qp.P.rows() != n || qp.P.cols() != n || qp.A_in.cols() != n ||
      qp.A_in.rows() != qp.b_in.size() || qp.lb.size() != n ||
      qp.ub.size() != n)
    throw std::invalid_argument("qp_solve: inconsistent dimensions");

  QpSolution sol;
  sol.duals_in = Vector::Zero(qp.b_in.size());
  sol.duals_lb = Vector::Zero(n);
  sol.duals_ub = Vector::Zero(n);

  Stacked st = stack_rows(qp);
  const int mc = static_cast<int>(st.d.size());

  // Trivially infeasible zero rows (can arise from degenerate builders).
  for (int i = 0; i < mc; ++i) {
    if (st.C.row(i).cwiseAbs().maxCoeff() == 0.0 && st.d[i] < -tol) {
      sol.status = QpStatus::infeasible;
      sol.v = Vector::Zero(n);
      return sol;
    }
  }

  if (mc == 0) {
    // Unconstrained: stationary point or a descent ray.
    Eigen::LDLT<Matrix> ldlt(qp.P);
    Vector v = ldlt.solve(-qp.q);
    const double res = (qp.P * v + qp.q).cwiseAbs().maxCoeff();
    sol.v = v;
    if (res <= tol * (1.0 + qp.q.cwiseAbs().maxCoeff())) {
      sol.status = QpStatus::optimal;
    } else {
      sol.status = QpStatus::unbounded;
    }
    sol.kkt_residuals = residuals_at(qp, st, sol.v, Vector::Zero(0));
    return sol;
  }

  // Mehrotra predictor-corrector on:  Pv + q + C'w = 0,  Cv + s = d,
  // s .* w = mu.
  const double dscale = 1.0 + st.d.cwiseAbs().maxCoeff();
  const double qscale = 1.0 + qp.q.cwiseAbs().maxCoeff();

  Vector v = Vector::Zero(n);
  Vector s(mc), w(mc);
  for (int i = 0; i < mc; ++i) s[i] = std::max(st.d[i], 1.0);
  w.setOnes();

  const bool diag_fast = diagonal_pd(qp.P) && mc < n;
  Vector Pdiag = diag_fast ? qp.P.diagonal() : Vector();

  const double frac = 0.995;
  bool converged = false;
  int it = 0;
  const int ipm_cap = std::min(max_iter, 200);

  // Best iterate seen so far: extreme complementarity ratios eventually
  // destroy the Newton system numerically, so a later blow-up must never
  // discard an already-converged point.
  Vector best_v = v, best_w = w;
  KktResiduals best_res = residuals_at(qp, st, v, w);
  double mu_min = kInf;

  for (; it < ipm_cap; ++it) {
    Vector rd = qp.P * v + qp.q + st.C.transpose() * w;
    Vector rp = st.C * v + s - st.d;
    const double mu = s.dot(w) / mc;

    if (!std::isfinite(mu) || !v.allFinite() || !w.allFinite()) break;
    // A barrier parameter rebounding by orders of magnitude after nearly
    // vanishing is numerical breakdown, not progress.
    if (mu_min < tol && mu > 1e8 * (mu_min + tol)) break;
    mu_min = std::min(mu_min, mu);

    sol.kkt_residuals = residuals_at(qp, st, v, w);
    if (sol.kkt_residuals.worst() < best_res.worst()) {
      best_res = sol.kkt_residuals;
      best_v = v;
      best_w = w;
    }
    if (sol.kkt_residuals.worst() <= tol) {
      converged = true;
      break;
    }
    // Stall fallback for badly scaled data: accept a relative certificate
    // once the barrier parameter is exhausted.
    const bool rel_ok =
        sol.kkt_residuals.primal_inf <= tol * dscale &&
        sol.kkt_residuals.dual_inf <=
            tol * (qscale + (qp.P * v).cwiseAbs().maxCoeff()) &&
        mu <= tol * (1.0 + std::abs(0.5 * v.dot(qp.P * v) + qp.q.dot(v)));
    if (rel_ok && mu <= 1e-12 * dscale * qscale) {
      converged = true;
      break;
    }

    // Divergence heuristics stand in for Farkas certificates.
    if (w.cwiseAbs().maxCoeff() > 1e12 * dscale &&
        sol.kkt_residuals.primal_inf > tol * dscale) {
      sol.status = QpStatus::infeasible;
      sol.v = v;
      return sol;
    }
    if (v.cwiseAbs().maxCoeff() > 1e12 * dscale * qscale &&
        0.5 * v.dot(qp.P * v) + qp.q.dot(v) < 0.0) {
      sol.status = QpStatus::unbounded;
      sol.v = v;
      return sol;
    }

    Vector D = w.cwiseQuotient(s);  // diag of C' D C term

    // Factor H = P + C' D C, directly or via the small dual system when P is
    // diagonal PD and there are fewer rows than variables (Woodbury).
    Eigen::LDLT<Matrix> ldltH;
    Eigen::LDLT<Matrix> ldltS;
    Matrix CP;  // C * P^-1 (fast path only)
    if (diag_fast) {
      CP = st.C * Pdiag.cwiseInverse().asDiagonal();
      Matrix S = CP * st.C.transpose();
      S.diagonal() += D.cwiseInverse();
      ldltS.compute(S);
      if (ldltS.info() != Eigen::Success) {
        S.diagonal().array() += 1e-12 * (1.0 + S.diagonal().maxCoeff());
        ldltS.compute(S);
      }
    } else {
      Matrix H = qp.P + st.C.transpose() * D.asDiagonal() * st.C;
      ldltH.compute(H);
      if (ldltH.info() != Eigen::Success) {
        H.diagonal().array() += 1e-10 * (1.0 + H.diagonal().maxCoeff());
        ldltH.compute(H);
      }
    }

    auto solveH = [&](const Vector& rhs) -> Vector {
      if (!diag_fast) return ldltH.solve(rhs);
      Vector x0 = rhs.cwiseQuotient(Pdiag);
      return x0 - CP.transpose() * ldltS.solve(CP * rhs);
    };

    auto newton = [&](const Vector& rc) {
      // rc is the centering residual: S W e - target.
      Vector rhs = -rd - st.C.transpose() * ((-rc).cwiseQuotient(s) +
                                             D.cwiseProduct(rp));
      Vector dv = solveH(rhs);
      Vector ds = -rp - st.C * dv;
      Vector dw = (-rc - w.cwiseProduct(ds)).cwiseQuotient(s);
      return std::make_pair(dv, std::make_pair(ds, dw));
    };

    // Affine (predictor) step.
    Vector rc_aff = s.cwiseProduct(w);
    auto [dv_a, rest_a] = newton(rc_aff);
    auto& [ds_a, dw_a] = rest_a;

    auto max_step = [&](const Vector& x, const Vector& dx) {
      double a = 1.0;
      for (int i = 0; i < mc; ++i)
        if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
      return a;
    };
    const double ap_a = max_step(s, ds_a);
    const double ad_a = max_step(w, dw_a);
    const double mu_aff =
        (s + ap_a * ds_a).dot(w + ad_a * dw_a) / mc;
    const double sigma = std::pow(mu_aff / mu, 3.0);

    // Corrector step.
    Vector rc =
        s.cwiseProduct(w) + ds_a.cwiseProduct(dw_a) -
        Vector::Constant(mc, sigma * mu);
    auto [dv, rest] = newton(rc);
    auto& [ds, dw] = rest;

    const double ap = frac * max_step(s, ds);
    const double ad = frac * max_step(w, dw);
    v += ap * dv;
    s += ap * ds;
    w += ad * dw;
  }

  sol.iterations = it;
  if (converged) {
    sol.v = v;
    sol.kkt_residuals = residuals_at(qp, st, v, w);
    sol.status = QpStatus::optimal;
  } else {
    // Fall back to the best snapshot. A point whose residuals are small
    // relative to the problem's own scale is still reported optimal; the
    // absolute tolerance is simply unreachable in double precision there.
    sol.v = best_v;
    w = best_w;
    sol.kkt_residuals = best_res;
    const double obj_scale =
        1.0 + std::abs(0.5 * best_v.dot(qp.P * best_v) + qp.q.dot(best_v));
    const double grad_scale =
        qscale + (qp.P * best_v).cwiseAbs().maxCoeff();
    const bool rel_ok = best_res.primal_inf <= tol * dscale &&
                        best_res.dual_inf <= 1e-6 * grad_scale &&
                        best_res.comp_slack <= 1e-6 * obj_scale;
    sol.status =
        best_res.worst() <= tol || rel_ok ? QpStatus::optimal
                                          : QpStatus::max_iter;
  }
  for (int i = 0; i < mc; ++i) {
    switch (st.kind[i]) {
      case RowKind::ineq: sol.duals_in[st.index[i]] = w[i]; break;
      case RowKind::lower: sol.duals_lb[st.index[i]] = w[i]; break;
      case RowKind::upper: sol.duals_ub[st.index[i]] = w[i]; break;
    }
  }
  return sol;
}

KktResiduals kkt_check(const QpInstance& qp, const QpSolution& s) {
  const int n = qp.size();
  KktResiduals res;
  Vector grad = qp.P * s.v + qp.q;
  if (qp.b_in.size() > 0) grad += qp.A_in.transpose() * s.duals_in;
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(qp.lb[i])) grad[i] -= s.duals_lb[i];
    if (std::isfinite(qp.ub[i])) grad[i] += s.duals_ub[i];
  }
  res.dual_inf = grad.cwiseAbs().maxCoeff();

  if (qp.b_in.size() > 0) {
    Vector slack = qp.b_in - qp.A_in * s.v;
    res.primal_inf = std::max(res.primal_inf, std::max(0.0, (-slack).maxCoeff()));
    for (Eigen::Index i = 0; i < slack.size(); ++i)
      res.comp_slack = std::max(
          res.comp_slack, std::abs(s.duals_in[i] * std::max(slack[i], 0.0)));
  }
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(qp.lb[i])) {
      const double sl = s.v[i] - qp.lb[i];
      res.primal_inf = std::max(res.primal_inf, -sl);
      res.comp_slack =
          std::max(res.comp_slack, std::abs(s.duals_lb[i] * std::max(sl, 0.0)));
    }
    if (std::isfinite(qp.ub[i])) {
      const double sl = qp.ub[i] - s.v[i];
      res.primal_inf = std::max(res.primal_inf, -sl);
      res.comp_slack =
          std::max(res.comp_slack, std::abs(s.duals_ub[i] * std::max(sl, 0.0)));
    }
  }
  res.primal_inf = std::max(res.primal_inf, 0.0);
  return res;
}

}  // namespace mbadmm
