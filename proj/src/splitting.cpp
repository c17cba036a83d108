#include "mbadmm/splitting.hpp"

#include <stdexcept>

namespace mbadmm {

namespace {

void check_lengths(const MboProblem& p, const Vector& z, const Vector& y,
                   const Vector& lambda) {
  if (z.size() != p.n_bin || y.size() != p.n_bin || lambda.size() != p.n_bin)
    throw std::invalid_argument("splitting: iterate length != n_bin");
}

}  // namespace

QuboInstance build_qubo(const MboProblem& p, const Vector& z, const Vector& y,
                        const Vector& lambda, double rho, double c) {
  if (!(rho > 0.0)) throw std::invalid_argument("build_qubo: rho must be > 0");
  if (c < 0.0) throw std::invalid_argument("build_qubo: c must be >= 0");
  check_lengths(p, z, y, lambda);

  QuboInstance q;
  q.Qm = p.Q + (rho / 2.0) * Matrix::Identity(p.n_bin, p.n_bin);
  q.lin = p.a + lambda - rho * (z + y);
  q.off = (rho / 2.0) * (z + y).squaredNorm();
  if (p.n_eq() > 0) {
    q.Qm += (c / 2.0) * (p.G_eq.transpose() * p.G_eq);
    q.lin -= c * (p.G_eq.transpose() * p.b_eq);
    q.off += (c / 2.0) * p.b_eq.squaredNorm();
  }
  return q;
}

QpInstance build_qp(const MboProblem& p, const Vector& x, const Vector& y,
                    const Vector& lambda, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("build_qp: rho must be > 0");
  check_lengths(p, x, y, lambda);

  const int nb = p.n_bin, nc = p.n_cont, m = nb + nc;
  QpInstance qp;
  qp.P = Matrix::Zero(m, m);
  qp.P.topLeftCorner(nb, nb) = rho * Matrix::Identity(nb, nb);
  if (nc > 0) qp.P.bottomRightCorner(nc, nc) = p.P_u;

  qp.q = Vector::Zero(m);
  qp.q.head(nb) = -lambda - rho * (x - y);
  if (nc > 0) qp.q.tail(nc) = p.r_u;

  const int n_rows = p.n_gin() + p.n_l();
  qp.A_in = Matrix::Zero(n_rows, m);
  qp.b_in = Vector::Zero(n_rows);
  if (p.n_gin() > 0) {
    qp.A_in.topLeftCorner(p.n_gin(), nb) = p.G_in;
    qp.b_in.head(p.n_gin()) = p.h_in;
  }
  if (p.n_l() > 0) {
    qp.A_in.block(p.n_gin(), 0, p.n_l(), nb) = p.L_z;
    if (nc > 0) qp.A_in.block(p.n_gin(), nb, p.n_l(), nc) = p.L_u;
    qp.b_in.tail(p.n_l()) = p.h_l;
  }

  qp.lb = Vector::Constant(m, -kInf);
  qp.ub = Vector::Constant(m, kInf);
  if (nc > 0) {
    qp.lb.tail(nc) = p.u_lb;
    qp.ub.tail(nc) = p.u_ub;
  }
  return qp;
}

Vector update_y(const Vector& x, const Vector& z, const Vector& lambda,
                double rho, double beta) {
  if (!(rho > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("update_y: rho and beta must be > 0");
  if (z.size() != x.size() || lambda.size() != x.size())
    throw std::invalid_argument("update_y: length mismatch");
  return (lambda + rho * (x - z)) / (beta + rho);
}

Vector update_dual(const Vector& lambda, const Vector& x, const Vector& z,
                   const Vector& y, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("update_dual: rho must be > 0");
  if (x.size() != lambda.size() || z.size() != lambda.size() ||
      y.size() != lambda.size())
    throw std::invalid_argument("update_dual: length mismatch");
  return lambda + rho * (x - z - y);
}

}  // namespace mbadmm
