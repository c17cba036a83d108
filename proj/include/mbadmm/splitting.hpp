#pragma once

#include "mbadmm/mbo.hpp"

namespace mbadmm {

/// QUBO in minimization form: energy(s) = s'Qm s + lin's + off over {0,1}^n.
/// The constant offset keeps oracle energies comparable across iterations.
struct QuboInstance {
  Matrix Qm;   // symmetric n x n
  Vector lin;  // n
  double off = 0.0;

  int size() const { return static_cast<int>(lin.size()); }
  double energy(const Vector& bits) const {
    return bits.dot(Qm * bits) + lin.dot(bits) + off;
  }
};

/// Convex QP: min 1/2 v'Pv + q'v  s.t.  A_in v <= b_in,  lb <= v <= ub.
struct QpInstance {
  Matrix P;     // symmetric PSD m x m
  Vector q;     // m
  Matrix A_in;  // rows of inequalities (may be 0 x m)
  Vector b_in;
  Vector lb;    // entries may be -inf
  Vector ub;    // entries may be +inf

  int size() const { return static_cast<int>(q.size()); }
};

/// First-block subproblem of the ADMM loop:
///   min_{x in {0,1}^n} q(x) + c/2 ||G_eq x - b_eq||^2 + lambda'x
///                      + rho/2 ||x - z - y||^2
/// expanded into (Qm, lin, off). Two-block callers pass y = 0.
QuboInstance build_qubo(const MboProblem& p, const Vector& z, const Vector& y,
                        const Vector& lambda, double rho, double c);

/// Second-block subproblem over xbar = [z; u]:
///   min phi(u) - lambda'z + rho/2 ||x - z - y||^2
///   s.t. G_in z <= h_in,  L_z z + L_u u <= h_l,  u_lb <= u <= u_ub.
/// z itself is unbounded; the proximal term pulls it toward the binary x.
QpInstance build_qp(const MboProblem& p, const Vector& x, const Vector& y,
                    const Vector& lambda, double rho);

/// Closed-form third-block update, the minimizer of
///   beta/2 ||y||^2 - lambda'y + rho/2 ||x - z - y||^2.
Vector update_y(const Vector& x, const Vector& z, const Vector& lambda,
                double rho, double beta);

/// lambda' = lambda + rho (x - z - y); two-block callers pass y = 0.
Vector update_dual(const Vector& lambda, const Vector& x, const Vector& z,
                   const Vector& y, double rho);

}  // namespace mbadmm
