#include "mbadmm/admm.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace mbadmm {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::tolerance: return "tolerance";
    case StopReason::max_iter: return "max_iter";
    case StopReason::time_limit: return "time_limit";
  }
  return "?";
}

void AdmmConfig::validate() const {
  if (!(rho_init > 0.0)) throw std::invalid_argument("rho_init must be > 0");
  if (rho_growth < 1.0) throw std::invalid_argument("rho_growth must be >= 1");
  if (rho_cap < rho_init) throw std::invalid_argument("rho_cap < rho_init");
  if (!(beta_init > 0.0)) throw std::invalid_argument("beta_init must be > 0");
  if (beta_gamma < 1.0) throw std::invalid_argument("beta_gamma must be >= 1");
  if (!(beta_omega > 0.0 && beta_omega < 1.0))
    throw std::invalid_argument("beta_omega must be in (0,1)");
  if (c < 0.0) throw std::invalid_argument("c must be >= 0");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be > 0");
  if (eps < 0.0) throw std::invalid_argument("eps must be >= 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(time_limit > 0.0)) throw std::invalid_argument("time_limit must be > 0");
}

namespace {

Vector start_or_zero(const Vector& given, int n, const char* what) {
  if (given.size() == 0) return Vector::Zero(n);
  if (given.size() != n)
    throw std::invalid_argument(std::string("warm start ") + what +
                                " has wrong length");
  return given;
}

}  // namespace

SolveReport solve(const MboProblem& p, const AdmmConfig& cfg, QuboOracle& oracle,
                  const SolveOptions& opts) {
  p.validate();
  cfg.validate();

  const int nb = p.n_bin, nc = p.n_cont;
  const bool three = cfg.mode == SplitMode::three_block;

  Vector x = start_or_zero(cfg.x0, nb, "x0");
  Vector z = start_or_zero(cfg.z0, nb, "z0");
  Vector u = start_or_zero(cfg.u0, nc, "u0");
  Vector y = three ? start_or_zero(cfg.y0, nb, "y0") : Vector::Zero(nb);
  Vector lambda = start_or_zero(cfg.lambda0, nb, "lambda0");

  double rho = cfg.rho_init;
  double beta = cfg.beta_init;
  double xbar_prev_norm = std::sqrt(z.squaredNorm() + u.squaredNorm());

  SolveReport rep;
  rep.best_merit = kInf;
  rep.termination_reason = StopReason::max_iter;

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  const Vector y_zero = Vector::Zero(nb);

  for (int k = 1; k <= cfg.max_iter; ++k) {
    const Vector& y_eff = three ? y : y_zero;

    QuboInstance qubo = build_qubo(p, z, y_eff, lambda, rho, cfg.c);
    OracleResult ores = oracle.solve(qubo, k, cfg.seed);
    x = ores.bits;

    std::optional<double> qgap;
    if (opts.track_qubo_gap && qubo.size() <= 22) {
      qgap = ores.energy - exact_solve(qubo).energy;
    }

    QpInstance qpi = build_qp(p, x, y_eff, lambda, rho);
    QpSolution qps = qp_solve(qpi);
    if (qps.status == QpStatus::infeasible ||
        qps.status == QpStatus::unbounded)
      throw std::runtime_error(
          std::string("convex subproblem ") + to_string(qps.status) +
          " at iteration " + std::to_string(k));
    z = qps.v.head(nb);
    if (nc > 0) u = qps.v.tail(nc);

    if (three) y = update_y(x, z, lambda, rho, beta);
    lambda = update_dual(lambda, x, z, three ? y : y_zero, rho);

    const Residuals res = residuals(x, z, three ? y : y_zero, cfg.mode);
    const MboPoint pt{x, u};
    const double obj = objective(p, pt);
    const double eta = merit(p, pt, cfg.mu, cfg.merit_include_equality);

    TraceRecord rec;
    rec.k = k;
    rec.objective = obj;
    rec.merit = eta;
    rec.r = res.r;
    rec.rr = res.rr;
    rec.rho = rho;
    rec.beta = beta;
    rec.qubo_exact_gap = qgap;
    rec.elapsed_seconds = elapsed();
    rep.trace.push_back(rec);
    rep.iterations = k;

    if (eta < rep.best_merit) {  // ties keep the earliest iterate
      rep.best_merit = eta;
      rep.best_objective = obj;
      rep.best_point = pt;
      rep.best_k = k;
    }

    if (res.r <= cfg.eps) {
      rep.converged = true;
      rep.termination_reason = StopReason::tolerance;
      break;
    }
    if (elapsed() > cfg.time_limit) {
      rep.termination_reason = StopReason::time_limit;
      break;
    }

    if (!cfg.rho_fixed) rho = std::min(rho * cfg.rho_growth, cfg.rho_cap);
    if (three && !cfg.beta_fixed) {
      const double xbar_norm = std::sqrt(z.squaredNorm() + u.squaredNorm());
      if (xbar_norm <= cfg.beta_omega * xbar_prev_norm) beta *= cfg.beta_gamma;
      xbar_prev_norm = xbar_norm;
    }
  }

  rep.final_x = x;
  rep.final_z = z;
  rep.final_u = u;
  rep.final_y = y;
  rep.final_lambda = lambda;

  if (cfg.polish && nc > 0) {
    bool ok = false;
    MboPoint polished = polish(p, rep.best_point.x, rep.best_point.u, &ok);
    if (ok) {
      const double eta =
          merit(p, polished, cfg.mu, cfg.merit_include_equality);
      if (eta <= rep.best_merit) {
        rep.best_point = polished;
        rep.best_merit = eta;
        rep.best_objective = objective(p, polished);
        rep.polished = true;
      }
    }
  }

  rep.feasible = is_feasible(p, rep.best_point, 1e-6);
  return rep;
}

MboPoint polish(const MboProblem& p, const Vector& x, const Vector& u_fallback,
                bool* ok) {
  if (ok) *ok = true;
  if (p.n_cont == 0) return {x, Vector::Zero(0)};

  QpInstance qp;
  qp.P = p.P_u;
  qp.q = p.r_u;
  qp.A_in = p.L_u;
  qp.b_in = p.n_l() > 0 ? Vector(p.h_l - p.L_z * x) : Vector::Zero(0);
  qp.lb = p.u_lb;
  qp.ub = p.u_ub;
  QpSolution s = qp_solve(qp);
  if (s.status != QpStatus::optimal) {
    if (ok) *ok = false;
    return {x, u_fallback};
  }
  return {x, s.v};
}

DiagnosticReport diagnose(const MboProblem& p, const AdmmConfig& cfg) {
  DiagnosticReport d;
  const double bc = std::max(cfg.beta_init, cfg.c);
  d.penalty_condition = cfg.rho_init > bc;
  d.penalty_condition_cap = cfg.rho_cap > bc;
  d.equality_priority = cfg.c >= cfg.rho_init;
  d.has_continuous = p.n_cont > 0;
  d.has_equalities = p.n_eq() > 0;

  if (d.penalty_condition)
    d.notes.push_back("splitting penalty dominates beta and c: the "
                      "convergence condition for the binary-only case holds");
  else
    d.notes.push_back("rho_init <= max(beta, c): no convergence guarantee, "
                      "heuristic mode");
  if (!d.penalty_condition_cap)
    d.notes.push_back("rho_cap <= max(beta, c): the schedule can never reach "
                      "the guaranteed regime");
  if (d.equality_priority)
    d.notes.push_back("c >= rho: equality enforcement outweighs consensus; "
                      "iterates may favor equality satisfaction over "
                      "convergence");
  if (d.has_continuous)
    d.notes.push_back("continuous variables present: the stronger penalty "
                      "condition rho > max(C^2 beta, c + C^2) with the "
                      "coupling constant C applies");
  if (d.has_equalities)
    d.notes.push_back("equality constraints are softened with weight c and "
                      "may be violated at termination");
  return d;
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "k,objective,merit,r,rr,rho,beta,qubo_exact_gap,elapsed_seconds\n";
  for (const auto& t : trace) {
    out << t.k << ',' << t.objective << ',' << t.merit << ',' << t.r << ','
        << t.rr << ',' << t.rho << ',' << t.beta << ',';
    if (t.qubo_exact_gap) out << *t.qubo_exact_gap;
    out << ',' << t.elapsed_seconds << '\n';
  }
  return out.str();
}

void save_trace_csv(const std::vector<TraceRecord>& trace,
                    const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write trace file: " + path);
  f << trace_to_csv(trace);
}

std::string report_to_json(const SolveReport& rep) {
  nlohmann::json j;
  j["best_x"] = std::vector<double>(rep.best_point.x.begin(),
                                    rep.best_point.x.end());
  j["best_u"] = std::vector<double>(rep.best_point.u.begin(),
                                    rep.best_point.u.end());
  j["best_merit"] = rep.best_merit;
  j["best_objective"] = rep.best_objective;
  j["best_k"] = rep.best_k;
  j["iterations"] = rep.iterations;
  j["converged"] = rep.converged;
  j["feasible"] = rep.feasible;
  j["polished"] = rep.polished;
  j["termination_reason"] = to_string(rep.termination_reason);
  j["final"] = {
      {"x", std::vector<double>(rep.final_x.begin(), rep.final_x.end())},
      {"z", std::vector<double>(rep.final_z.begin(), rep.final_z.end())},
      {"u", std::vector<double>(rep.final_u.begin(), rep.final_u.end())},
      {"y", std::vector<double>(rep.final_y.begin(), rep.final_y.end())},
      {"lambda", std::vector<double>(rep.final_lambda.begin(),
                                     rep.final_lambda.end())}};
  return j.dump(2);
}

void save_report(const SolveReport& rep, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write report file: " + path);
  f << report_to_json(rep) << '\n';
}

}  // namespace mbadmm
