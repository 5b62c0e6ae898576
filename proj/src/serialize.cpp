#include "lorentzcg/serialize.hpp"

#include <sstream>

namespace lorentzcg {

using nlohmann::json;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json basis_json(const TruncatedModule& module) {
  json out = json::array();
  for (const State& s : module.basis()) out.push_back(json::array({s.j.twice(), s.m.twice()}));
  return out;
}

namespace {

json entries_json(const SparseOperator& op) {
  json entries = json::array();
  for (int r = 0; r < op.rows(); ++r)
    for (const auto& [c, v] : op.row(r)) entries.push_back(json::array({r, c, complex_json(v)}));
  return entries;
}

} // namespace

json sparse_json(const SparseOperator& op, const TruncatedModule& basis) {
  return json{{"basis", basis_json(basis)}, {"entries", entries_json(op)}};
}

json sparse_json(const SparseOperator& op, const TruncatedModule& target,
                 const TruncatedModule& source) {
  return json{{"target_basis", basis_json(target)},
              {"source_basis", basis_json(source)},
              {"entries", entries_json(op)}};
}

json classification_json(const IrrepLabel& label, const Classification& c) {
  json out{{"lambda_x2", label.lambda.twice()},
           {"rho", complex_json(label.rho)},
           {"class", module_class_name(c.cls)},
           {"casimir1", complex_json(c.c1)},
           {"casimir2", complex_json(c.c2)}};
  if (c.j_max) out["j_max_x2"] = c.j_max->twice();
  return out;
}

json cg_table_json(const CGTable& table) {
  json blocks = json::array();
  for (const auto& b : table.blocks) {
    json pairs = json::array();
    for (const auto& col : b.columns) {
      json coeffs = json::array();
      for (const auto& v : col.coeffs) coeffs.push_back(complex_json(v));
      pairs.push_back(json{{"Lambda_x2", col.pair.Lambda.twice()},
                           {"P", complex_json(col.pair.P)},
                           {"coeffs", coeffs},
                           {"residual", col.residual}});
    }
    json omega = json::array();
    for (HalfInt j : b.omega) omega.push_back(j.twice());
    blocks.push_back(json{{"J_x2", b.J.twice()},
                          {"omega_x2", omega},
                          {"pairs", pairs},
                          {"inverse_residual", b.inverse_residual}});
  }
  return json{{"lambda_x2", table.problem.infinite.lambda.twice()},
              {"rho", complex_json(table.problem.infinite.rho)},
              {"gamma_x2", table.problem.finite.gamma.twice()},
              {"A", table.problem.finite.A},
              {"jmax_x2", table.J_max.twice()},
              {"blocks", blocks}};
}

std::string cg_table_csv(const CGTable& table) {
  std::ostringstream out;
  out.precision(17);
  out << "J_x2,Lambda_x2,P_re,P_im,j_x2,coeff_re,coeff_im\n";
  for (const auto& b : table.blocks)
    for (const auto& col : b.columns)
      for (std::size_t i = 0; i < b.omega.size(); ++i)
        out << b.J.twice() << ',' << col.pair.Lambda.twice() << ',' << col.pair.P.real() << ','
            << col.pair.P.imag() << ',' << b.omega[i].twice() << ',' << col.coeffs[i].real() << ','
            << col.coeffs[i].imag() << '\n';
  return out.str();
}

} // namespace lorentzcg
