#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mbadmm/mbo.hpp"
#include "nlohmann/json.hpp"

namespace mbadmm {

using nlohmann::json;

namespace {

json num_out(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double num_in(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw std::invalid_argument("expected a number or \"inf\"/\"-inf\", got \"" +
                                s + "\"");
  }
  return j.get<double>();
}

json vec_out(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num_out(v[i]));
  return a;
}

json mat_out(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num_out(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector vec_in(const json& j, const char* key) {
  if (!j.is_array())
    throw std::invalid_argument(std::string(key) + " must be an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = num_in(j[i]);
  return v;
}

Matrix mat_in(const json& j, const char* key, Eigen::Index cols_hint) {
  if (!j.is_array())
    throw std::invalid_argument(std::string(key) + " must be an array of rows");
  if (j.empty()) return Matrix::Zero(0, cols_hint);
  const std::size_t cols = j[0].size();
  Matrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != cols)
      throw std::invalid_argument(std::string(key) + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = num_in(j[i][c]);
  }
  return m;
}

}  // namespace

std::string mbo_to_json(const MboProblem& p) {
  json j;
  j["n_bin"] = p.n_bin;
  j["n_cont"] = p.n_cont;
  j["Q"] = mat_out(p.Q);
  j["a"] = vec_out(p.a);
  j["P_u"] = mat_out(p.P_u);
  j["r_u"] = vec_out(p.r_u);
  j["c_u"] = p.c_u;
  j["G_eq"] = mat_out(p.G_eq);
  j["b_eq"] = vec_out(p.b_eq);
  j["G_in"] = mat_out(p.G_in);
  j["h_in"] = vec_out(p.h_in);
  j["L_z"] = mat_out(p.L_z);
  j["L_u"] = mat_out(p.L_u);
  j["h_l"] = vec_out(p.h_l);
  j["u_lb"] = vec_out(p.u_lb);
  j["u_ub"] = vec_out(p.u_ub);
  return j.dump(2);
}

MboProblem mbo_from_json(const std::string& text) {
  json j = json::parse(text);
  MboProblem p;
  p.n_bin = j.at("n_bin").get<int>();
  p.n_cont = j.value("n_cont", 0);
  p.Q = mat_in(j.at("Q"), "Q", p.n_bin);
  p.a = vec_in(j.at("a"), "a");
  p.P_u = j.contains("P_u") ? mat_in(j["P_u"], "P_u", p.n_cont)
                            : Matrix::Zero(p.n_cont, p.n_cont);
  p.r_u = j.contains("r_u") ? vec_in(j["r_u"], "r_u")
                            : Vector::Zero(p.n_cont);
  p.c_u = j.value("c_u", 0.0);
  p.G_eq = j.contains("G_eq") ? mat_in(j["G_eq"], "G_eq", p.n_bin)
                              : Matrix::Zero(0, p.n_bin);
  p.b_eq = j.contains("b_eq") ? vec_in(j["b_eq"], "b_eq") : Vector::Zero(0);
  p.G_in = j.contains("G_in") ? mat_in(j["G_in"], "G_in", p.n_bin)
                              : Matrix::Zero(0, p.n_bin);
  p.h_in = j.contains("h_in") ? vec_in(j["h_in"], "h_in") : Vector::Zero(0);
  p.L_z = j.contains("L_z") ? mat_in(j["L_z"], "L_z", p.n_bin)
                            : Matrix::Zero(0, p.n_bin);
  p.L_u = j.contains("L_u") ? mat_in(j["L_u"], "L_u", p.n_cont)
                            : Matrix::Zero(p.L_z.rows(), p.n_cont);
  p.h_l = j.contains("h_l") ? vec_in(j["h_l"], "h_l") : Vector::Zero(0);
  p.u_lb = j.contains("u_lb") ? vec_in(j["u_lb"], "u_lb")
                              : Vector::Constant(p.n_cont, -kInf);
  p.u_ub = j.contains("u_ub") ? vec_in(j["u_ub"], "u_ub")
                              : Vector::Constant(p.n_cont, kInf);
  // Degenerate-but-consistent shapes: empty matrices parse as 0 x 0; widen
  // them to the right column count so validate() passes.
  if (p.L_u.rows() == 0) p.L_u = Matrix::Zero(p.L_z.rows(), p.n_cont);
  p.validate();
  return p;
}

MboProblem load_mbo(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return mbo_from_json(ss.str());
}

void save_mbo(const MboProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << mbo_to_json(p) << '\n';
}

}  // namespace mbadmm
