#include "mbadmm/mbo.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>
#include <stdexcept>

namespace mbadmm {

MboProblem MboProblem::zeros(int n_bin, int n_cont) {
  MboProblem p;
  p.n_bin = n_bin;
  p.n_cont = n_cont;
  p.Q = Matrix::Zero(n_bin, n_bin);
  p.a = Vector::Zero(n_bin);
  p.P_u = Matrix::Zero(n_cont, n_cont);
  p.r_u = Vector::Zero(n_cont);
  p.G_eq = Matrix::Zero(0, n_bin);
  p.b_eq = Vector::Zero(0);
  p.G_in = Matrix::Zero(0, n_bin);
  p.h_in = Vector::Zero(0);
  p.L_z = Matrix::Zero(0, n_bin);
  p.L_u = Matrix::Zero(0, n_cont);
  p.h_l = Vector::Zero(0);
  p.u_lb = Vector::Constant(n_cont, -kInf);
  p.u_ub = Vector::Constant(n_cont, kInf);
  return p;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("MboProblem: " + what);
}

}  // namespace

void MboProblem::validate() const {
  require(n_bin >= 1, "n_bin must be >= 1");
  require(n_cont >= 0, "n_cont must be >= 0");
  require(Q.rows() == n_bin && Q.cols() == n_bin, "Q must be n_bin x n_bin");
  require(a.size() == n_bin, "a must have length n_bin");
  require(Q.isApprox(Q.transpose(), 0.0), "Q must be symmetric as stored");
  require(P_u.rows() == n_cont && P_u.cols() == n_cont,
          "P_u must be n_cont x n_cont");
  require(r_u.size() == n_cont, "r_u must have length n_cont");
  if (n_cont > 0) {
    require((P_u - P_u.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
            "P_u must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(P_u, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, P_u.cwiseAbs().maxCoeff());
    require(es.eigenvalues().minCoeff() >= -1e-9 * scale,
            "P_u must be positive semidefinite");
  }
  require(G_eq.cols() == n_bin && G_eq.rows() == b_eq.size(),
          "equality block dimensions inconsistent");
  require(G_in.cols() == n_bin && G_in.rows() == h_in.size(),
          "binary inequality block dimensions inconsistent");
  require(L_z.cols() == n_bin && L_u.cols() == n_cont &&
              L_z.rows() == h_l.size() && L_u.rows() == h_l.size(),
          "joint inequality block dimensions inconsistent");
  require(u_lb.size() == n_cont && u_ub.size() == n_cont,
          "bound vectors must have length n_cont");
  for (int i = 0; i < n_cont; ++i) {
    if (std::isfinite(u_lb[i]) && std::isfinite(u_ub[i]))
      require(u_lb[i] <= u_ub[i], "crossed bounds at index " +
                                      std::to_string(i));
  }
}

double objective(const MboProblem& p, const MboPoint& pt) {
  if (pt.x.size() != p.n_bin || pt.u.size() != p.n_cont)
    throw std::invalid_argument("objective: point dimensions do not match");
  return p.q(pt.x) + p.phi(pt.u);
}

double violation(const MboProblem& p, const MboPoint& pt) {
  if (pt.x.size() != p.n_bin || pt.u.size() != p.n_cont)
    throw std::invalid_argument("violation: point dimensions do not match");
  double v = 0.0;
  if (p.n_gin() > 0)
    v += (p.G_in * pt.x - p.h_in).cwiseMax(0.0).sum();
  if (p.n_l() > 0) {
    Vector lhs = p.L_z * pt.x - p.h_l;
    if (p.n_cont > 0) lhs += p.L_u * pt.u;
    v += lhs.cwiseMax(0.0).sum();
  }
  return v;
}

double merit(const MboProblem& p, const MboPoint& pt, double mu,
             bool include_equality) {
  if (!(mu > 0.0)) throw std::invalid_argument("merit: mu must be positive");
  double m = objective(p, pt) + mu * violation(p, pt);
  if (include_equality && p.n_eq() > 0)
    m += mu * (p.G_eq * pt.x - p.b_eq).cwiseAbs().sum();
  return m;
}

bool is_feasible(const MboProblem& p, const MboPoint& pt, double tol) {
  if (pt.x.size() != p.n_bin || pt.u.size() != p.n_cont) return false;
  if (p.n_eq() > 0 &&
      (p.G_eq * pt.x - p.b_eq).cwiseAbs().maxCoeff() > tol)
    return false;
  if (p.n_gin() > 0 && (p.G_in * pt.x - p.h_in).maxCoeff() > tol) return false;
  if (p.n_l() > 0) {
    Vector lhs = p.L_z * pt.x - p.h_l;
    if (p.n_cont > 0) lhs += p.L_u * pt.u;
    if (lhs.maxCoeff() > tol) return false;
  }
  for (int i = 0; i < p.n_cont; ++i) {
    if (pt.u[i] < p.u_lb[i] - tol || pt.u[i] > p.u_ub[i] + tol) return false;
  }
  return true;
}

Residuals residuals(const Vector& x, const Vector& z, const Vector& y,
                    SplitMode mode) {
  if (z.size() != x.size())
    throw std::invalid_argument("residuals: x and z lengths differ");
  const double rr = (x - z).norm();
  if (mode == SplitMode::two_block) return {rr, rr};
  if (y.size() != x.size())
    throw std::invalid_argument("residuals: y length differs");
  return {(x - z - y).norm(), rr};
}

}  // namespace mbadmm
