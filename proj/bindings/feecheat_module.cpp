#include "feec/cli.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;

namespace {

py::dict mesh_info(const std::string& case_name, int level) {
  feec::ManufacturedCase mc = feec::case_by_name(case_name);
  feec::SimplicialMesh mesh = mc.mesh_at_level(level);
  std::vector<int> betti = feec::betti_numbers(mesh);
  py::dict d;
  d["dim"] = mesh.dim;
  d["vertices"] = mesh.count(0);
  d["edges"] = mesh.count(1);
  if (mesh.dim == 3) d["faces"] = mesh.count(2);
  d["cells"] = mesh.count(mesh.dim);
  d["b1"] = betti.at(1);
  return d;
}

py::dict convergence(const std::string& case_name, int r, int levels, double dt, double t_final) {
  feec::ManufacturedCase mc = feec::case_by_name(case_name);
  feec::ConvergenceTable table = feec::convergence_study(mc, r, levels, dt, t_final);
  py::list rows;
  for (const feec::ConvergenceRow& row : table.rows) {
    py::dict d;
    d["level"] = row.level;
    d["h"] = row.h;
    d["err_sigma"] = row.err_sigma;
    d["rate_sigma"] = row.rate_sigma;
    d["err_dsigma"] = row.err_dsigma;
    d["rate_dsigma"] = row.rate_dsigma;
    d["err_u"] = row.err_u;
    d["rate_u"] = row.rate_u;
    rows.append(d);
  }
  py::dict out;
  out["case"] = table.case_name;
  out["r"] = table.r;
  out["dt"] = table.dt;
  out["t_final"] = table.t_final;
  out["rows"] = rows;
  out["csv"] = feec::table_csv(table);
  return out;
}

py::dict run_single(const std::string& case_name, int r, int level, double dt, double t_final) {
  feec::ManufacturedCase mc = feec::case_by_name(case_name);
  feec::SimplicialMesh mesh = mc.mesh_at_level(level);
  feec::FeSpace sigma_space = feec::build_space(mesh, feec::Family::Lagrange, 0, r);
  feec::FeSpace u_space = feec::build_space(mesh, feec::Family::Trimmed, 1, r);
  feec::MixedOperators ops = feec::build_mixed_operators(sigma_space, u_space);

  feec::TransientConfig cfg;
  cfg.dt = dt;
  cfg.t_final = t_final;
  cfg.f = mc.f;
  cfg.init = feec::InitMode::ZeroField;
  feec::TransientStepper stepper(ops, cfg);
  stepper.run();
  feec::ErrorNorms e = feec::error_norms(stepper.sigma(), stepper.u(), mc, t_final);

  py::dict out;
  out["case"] = mc.name;
  out["r"] = r;
  out["level"] = level;
  out["h"] = feec::case_h(level);
  out["steps"] = stepper.step_count();
  out["dof_sigma"] = sigma_space.dof_count;
  out["dof_u"] = u_space.dof_count;
  out["err_sigma"] = e.err_sigma;
  out["err_dsigma"] = e.err_dsigma;
  out["err_u"] = e.err_u;
  return out;
}

py::list check_properties() {
  py::list out;
  for (const feec::PropertyResult& r : feec::property_suite()) {
    py::dict d;
    d["name"] = r.name;
    d["pass"] = r.pass;
    d["measure"] = r.measure;
    d["detail"] = r.detail;
    out.append(d);
  }
  return out;
}

int harmonic_dimension(const std::string& case_name, int level, int r) {
  feec::ManufacturedCase mc = feec::case_by_name(case_name);
  feec::SimplicialMesh mesh = mc.mesh_at_level(level);
  feec::FeSpace sigma_space = feec::build_space(mesh, feec::Family::Lagrange, 0, r);
  feec::FeSpace u_space = feec::build_space(mesh, feec::Family::Trimmed, 1, r);
  feec::MixedOperators ops = feec::build_mixed_operators(sigma_space, u_space);
  std::vector<int> betti = feec::betti_numbers(mesh);
  feec::HarmonicBasis basis = feec::harmonic_basis(ops, betti.at(1));
  return basis.dim();
}

}  // namespace

PYBIND11_MODULE(_feecheat, m) {
  m.doc() = "Mixed finite element solver for the Hodge heat equation on simplicial meshes";

  // translators run newest-first, so the base class goes in first
  py::register_exception<feec::Error>(m, "FeecError", PyExc_RuntimeError);
  py::register_exception<feec::ParseError>(m, "FeecParseError", PyExc_ValueError);
  py::register_exception<feec::InvalidParameterError>(m, "FeecInvalidParameter", PyExc_ValueError);
  py::register_exception<feec::UnsupportedConfigError>(m, "FeecUnsupportedConfig",
                                                       PyExc_ValueError);

  m.def("mesh_info", &mesh_info, py::arg("case"), py::arg("level") = 0,
        "Entity counts and the first Betti number of a named case mesh");
  m.def("convergence", &convergence, py::arg("case"), py::arg("r"), py::arg("levels"),
        py::arg("dt"), py::arg("t_final"),
        "Refinement study: final-time errors and rates per level, plus the canonical CSV");
  m.def("run_single", &run_single, py::arg("case"), py::arg("r"), py::arg("level"), py::arg("dt"),
        py::arg("t_final"), "One transient solve; returns final-time error norms");
  m.def("check_properties", &check_properties,
        "Structure-preservation property suite; list of {name, pass, measure, detail}");
  m.def("harmonic_dimension", &harmonic_dimension, py::arg("case"), py::arg("level") = 0,
        py::arg("r") = 1, "Dimension of the discrete harmonic space, validated against topology");
}
