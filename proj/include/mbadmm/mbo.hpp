#pragma once

#include <Eigen/Dense>
#include <limits>
#include <string>

namespace mbadmm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A mixed-binary program
///
///   min  x'Qx + a'x + phi(u),   phi(u) = 1/2 u'P_u u + r_u'u + c_u
///   s.t. G_eq x  = b_eq
///        G_in x <= h_in
///        L_z z + L_u u <= h_l          (z is the relaxed copy of x)
///        u_lb <= u <= u_ub,  x in {0,1}^n_bin
///
/// Q must be symmetric as stored; P_u symmetric PSD. Binary inequalities are
/// affine, the continuous objective convex quadratic.
struct MboProblem {
  int n_bin = 0;
  int n_cont = 0;

  Matrix Q;     // n_bin x n_bin, symmetric
  Vector a;     // n_bin

  Matrix P_u;   // n_cont x n_cont, symmetric PSD
  Vector r_u;   // n_cont
  double c_u = 0.0;

  Matrix G_eq;  // n_eq x n_bin
  Vector b_eq;  // n_eq

  Matrix G_in;  // n_gin x n_bin
  Vector h_in;  // n_gin

  Matrix L_z;   // n_l x n_bin
  Matrix L_u;   // n_l x n_cont
  Vector h_l;   // n_l

  Vector u_lb;  // n_cont, entries may be -inf
  Vector u_ub;  // n_cont, entries may be +inf

  /// Blank problem with consistent zero-sized blocks.
  static MboProblem zeros(int n_bin, int n_cont = 0);

  /// Throws std::invalid_argument on inconsistent dimensions, asymmetric Q,
  /// non-PSD P_u or crossed bounds.
  void validate() const;

  int n_eq() const { return static_cast<int>(b_eq.size()); }
  int n_gin() const { return static_cast<int>(h_in.size()); }
  int n_l() const { return static_cast<int>(h_l.size()); }

  double q(const Vector& x) const { return x.dot(Q * x) + a.dot(x); }
  double phi(const Vector& u) const {
    if (n_cont == 0) return c_u;
    return 0.5 * u.dot(P_u * u) + r_u.dot(u) + c_u;
  }
};

/// A candidate solution: binary part x, continuous part u.
struct MboPoint {
  Vector x;  // entries in {0,1}
  Vector u;
};

enum class SplitMode { two_block, three_block };

double objective(const MboProblem& p, const MboPoint& pt);

/// Sum of positive parts of the inequality rows, evaluated at (x, u); the
/// joint rows use the binary x in place of z. Equality violation is excluded.
double violation(const MboProblem& p, const MboPoint& pt);

/// objective + mu * violation (mu > 0). With include_equality, adds
/// mu * ||G_eq x - b_eq||_1 as well.
double merit(const MboProblem& p, const MboPoint& pt, double mu,
             bool include_equality = false);

/// Feasibility of (x, u) for the original hard-constrained problem.
bool is_feasible(const MboProblem& p, const MboPoint& pt, double tol = 1e-6);

struct Residuals {
  double r;   // ||x - z - y|| (three-block) or ||x - z|| (two-block)
  double rr;  // ||x - z||
};

Residuals residuals(const Vector& x, const Vector& z, const Vector& y,
                    SplitMode mode);

// JSON instance format (see README): dense row-major matrices, infinities
// encoded as the strings "inf" / "-inf".
MboProblem mbo_from_json(const std::string& text);
std::string mbo_to_json(const MboProblem& p);
MboProblem load_mbo(const std::string& path);
void save_mbo(const MboProblem& p, const std::string& path);

}  // namespace mbadmm
