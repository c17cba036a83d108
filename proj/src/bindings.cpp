#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mbadmm/bench.hpp"

namespace py = pybind11;
using namespace mbadmm;

PYBIND11_MODULE(_mbadmm, m) {
  m.doc() = "ADMM heuristics for mixed-binary optimization";

  py::enum_<SplitMode>(m, "SplitMode")
      .value("two_block", SplitMode::two_block)
      .value("three_block", SplitMode::three_block);

  py::class_<MboProblem>(m, "MboProblem")
      .def(py::init([](int n_bin, int n_cont) {
             return MboProblem::zeros(n_bin, n_cont);
           }),
           py::arg("n_bin"), py::arg("n_cont") = 0)
      .def_readwrite("n_bin", &MboProblem::n_bin)
      .def_readwrite("n_cont", &MboProblem::n_cont)
      .def_readwrite("Q", &MboProblem::Q)
      .def_readwrite("a", &MboProblem::a)
      .def_readwrite("P_u", &MboProblem::P_u)
      .def_readwrite("r_u", &MboProblem::r_u)
      .def_readwrite("c_u", &MboProblem::c_u)
      .def_readwrite("G_eq", &MboProblem::G_eq)
      .def_readwrite("b_eq", &MboProblem::b_eq)
      .def_readwrite("G_in", &MboProblem::G_in)
      .def_readwrite("h_in", &MboProblem::h_in)
      .def_readwrite("L_z", &MboProblem::L_z)
      .def_readwrite("L_u", &MboProblem::L_u)
      .def_readwrite("h_l", &MboProblem::h_l)
      .def_readwrite("u_lb", &MboProblem::u_lb)
      .def_readwrite("u_ub", &MboProblem::u_ub)
      .def("validate", &MboProblem::validate)
      .def("to_json", [](const MboProblem& p) { return mbo_to_json(p); })
      .def_static("from_json",
                  [](const std::string& s) { return mbo_from_json(s); });

  py::class_<MboPoint>(m, "MboPoint")
      .def(py::init<>())
      .def(py::init([](Vector x, Vector u) {
             return MboPoint{std::move(x), std::move(u)};
           }),
           py::arg("x"), py::arg("u"))
      .def_readwrite("x", &MboPoint::x)
      .def_readwrite("u", &MboPoint::u);

  m.def("objective", &objective);
  m.def("violation", &violation);
  m.def("merit", &merit, py::arg("p"), py::arg("pt"), py::arg("mu"),
        py::arg("include_equality") = false);
  m.def("is_feasible", &is_feasible, py::arg("p"), py::arg("pt"),
        py::arg("tol") = 1e-6);

  py::class_<AdmmConfig>(m, "AdmmConfig")
      .def(py::init<>())
      .def_readwrite("mode", &AdmmConfig::mode)
      .def_readwrite("rho_init", &AdmmConfig::rho_init)
      .def_readwrite("rho_growth", &AdmmConfig::rho_growth)
      .def_readwrite("rho_cap", &AdmmConfig::rho_cap)
      .def_readwrite("rho_fixed", &AdmmConfig::rho_fixed)
      .def_readwrite("beta_init", &AdmmConfig::beta_init)
      .def_readwrite("beta_gamma", &AdmmConfig::beta_gamma)
      .def_readwrite("beta_omega", &AdmmConfig::beta_omega)
      .def_readwrite("beta_fixed", &AdmmConfig::beta_fixed)
      .def_readwrite("c", &AdmmConfig::c)
      .def_readwrite("mu", &AdmmConfig::mu)
      .def_readwrite("eps", &AdmmConfig::eps)
      .def_readwrite("max_iter", &AdmmConfig::max_iter)
      .def_readwrite("time_limit", &AdmmConfig::time_limit)
      .def_readwrite("seed", &AdmmConfig::seed)
      .def_readwrite("polish", &AdmmConfig::polish)
      .def_readwrite("x0", &AdmmConfig::x0)
      .def_readwrite("z0", &AdmmConfig::z0)
      .def_readwrite("u0", &AdmmConfig::u0)
      .def_readwrite("y0", &AdmmConfig::y0)
      .def_readwrite("lambda0", &AdmmConfig::lambda0);

  py::class_<TraceRecord>(m, "TraceRecord")
      .def_readonly("k", &TraceRecord::k)
      .def_readonly("objective", &TraceRecord::objective)
      .def_readonly("merit", &TraceRecord::merit)
      .def_readonly("r", &TraceRecord::r)
      .def_readonly("rr", &TraceRecord::rr)
      .def_readonly("rho", &TraceRecord::rho)
      .def_readonly("beta", &TraceRecord::beta);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("best_point", &SolveReport::best_point)
      .def_readonly("best_merit", &SolveReport::best_merit)
      .def_readonly("best_objective", &SolveReport::best_objective)
      .def_readonly("best_k", &SolveReport::best_k)
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("feasible", &SolveReport::feasible)
      .def_readonly("trace", &SolveReport::trace)
      .def_readonly("final_x", &SolveReport::final_x)
      .def_readonly("final_z", &SolveReport::final_z)
      .def_readonly("final_u", &SolveReport::final_u)
      .def_readonly("final_y", &SolveReport::final_y)
      .def_readonly("final_lambda", &SolveReport::final_lambda);

  m.def(
      "solve",
      [](const MboProblem& p, const AdmmConfig& cfg, const std::string& oracle,
         int sa_sweeps, int sa_restarts, double noise_p0) {
        std::shared_ptr<QuboOracle> o;
        if (oracle == "exact") {
          o = std::make_shared<ExactOracle>();
        } else if (oracle == "sa") {
          SaParams sp;
          sp.sweeps = sa_sweeps;
          sp.restarts = sa_restarts;
          o = std::make_shared<SaOracle>(sp);
        } else if (oracle == "noisy") {
          o = noisy_wrap(std::make_shared<ExactOracle>(),
                         NoiseSchedule{noise_p0});
        } else {
          throw std::invalid_argument("unknown oracle: " + oracle);
        }
        return solve(p, cfg, *o);
      },
      py::arg("problem"), py::arg("config"), py::arg("oracle") = "exact",
      py::arg("sa_sweeps") = 1000, py::arg("sa_restarts") = 8,
      py::arg("noise_p0") = 0.5);

  py::class_<BpInstance>(m, "BpInstance")
      .def(py::init<>())
      .def_readwrite("n", &BpInstance::n)
      .def_readwrite("m", &BpInstance::m)
      .def_readwrite("cap", &BpInstance::cap)
      .def_readwrite("w", &BpInstance::w)
      .def("lower_bound", &BpInstance::lower_bound);

  m.def("gen_bp", &gen_bp);
  m.def("bp_to_mbo",
        [](const BpInstance& inst) { return bp_to_mbo(inst).problem; });

  py::class_<MiskInstance>(m, "MiskInstance")
      .def(py::init<>())
      .def_readwrite("K", &MiskInstance::K)
      .def_readwrite("T", &MiskInstance::T)
      .def_readwrite("P_cap", &MiskInstance::P_cap)
      .def_readwrite("S", &MiskInstance::S)
      .def_readwrite("C", &MiskInstance::C)
      .def_readwrite("D", &MiskInstance::D);

  m.def("gen_misk", &gen_misk);
  m.def("misk_to_mbo",
        [](const MiskInstance& inst) { return misk_to_mbo(inst).problem; });

  py::class_<ExactResult>(m, "ExactResult")
      .def_readonly("feasible", &ExactResult::feasible)
      .def_readonly("point", &ExactResult::point)
      .def_readonly("value", &ExactResult::value);

  m.def("exact_mbo_solve", &exact_mbo_solve);
  m.def("gap", &gap);
}
