#include "feec/mms.hpp"

#include <cmath>

namespace feec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// q(s) = s(s-1)(s-1/4)(s-3/4) and derivatives; the annulus solution is
// u = 100 t (q(x), q(y)), which has q' = 0 flux and rot u = 0 on the grid
// lines x,y in {0, 1/4, 3/4, 1} bounding the domain.
double quartic(double s) { return s * (s - 1.0) * (s - 0.25) * (s - 0.75); }
double quartic_d1(double s) { return 4.0 * s * s * s - 6.0 * s * s + (19.0 / 8.0) * s - 3.0 / 16.0; }
double quartic_d2(double s) { return 12.0 * s * s - 12.0 * s + 19.0 / 8.0; }

int level_n(int level) {
  if (level < 0 || level > 12) throw InvalidParameterError("mesh level out of range");
  return 4 << level;
}

}  // namespace

double case_h(int level) { return 1.0 / level_n(level); }

ManufacturedCase case_annulus2d() {
  ManufacturedCase mc;
  mc.name = "annulus2d";
  mc.dim = 2;
  mc.transient = true;
  mc.expected_b1 = 1;
  mc.u = [](const Point& x, double t) {
    return Point(100.0 * quartic(x[0]) * t, 100.0 * quartic(x[1]) * t, 0.0);
  };
  mc.sigma = [](const Point& x, double t) {
    return -100.0 * t * (quartic_d1(x[0]) + quartic_d1(x[1]));
  };
  mc.grad_sigma = [](const Point& x, double t) {
    return Point(-100.0 * t * quartic_d2(x[0]), -100.0 * t * quartic_d2(x[1]), 0.0);
  };
  // rot u = 0, so (curl rot - grad div)u = grad sigma
  mc.lu = [](const Point& x, double t) {
    return Point(-100.0 * t * quartic_d2(x[0]), -100.0 * t * quartic_d2(x[1]), 0.0);
  };
  mc.f = [](const Point& x, double t) {
    return Point(100.0 * (quartic(x[0]) - t * quartic_d2(x[0])),
                 100.0 * (quartic(x[1]) - t * quartic_d2(x[1])), 0.0);
  };
  mc.mesh_at_level = [](int level) { return build_square_annulus(level_n(level)); };
  return mc;
}

ManufacturedCase case_cube3d() {
  ManufacturedCase mc;
  mc.name = "cube3d";
  mc.dim = 3;
  mc.transient = true;
  mc.expected_b1 = 0;
  mc.u = [](const Point& x, double t) {
    return Point(std::sin(kPi * x[0]) * t, std::sin(kPi * x[1]) * t, std::sin(kPi * x[2]) * t);
  };
  mc.sigma = [](const Point& x, double t) {
    return -kPi * t * (std::cos(kPi * x[0]) + std::cos(kPi * x[1]) + std::cos(kPi * x[2]));
  };
  mc.grad_sigma = [](const Point& x, double t) {
    return Point(kPi * kPi * t * std::sin(kPi * x[0]), kPi * kPi * t * std::sin(kPi * x[1]),
                 kPi * kPi * t * std::sin(kPi * x[2]));
  };
  // curl u = 0 (each component depends on its own coordinate only)
  mc.lu = [](const Point& x, double t) {
    return Point(kPi * kPi * t * std::sin(kPi * x[0]), kPi * kPi * t * std::sin(kPi * x[1]),
                 kPi * kPi * t * std::sin(kPi * x[2]));
  };
  mc.f = [](const Point& x, double t) {
    double a = 1.0 + kPi * kPi * t;
    return Point(a * std::sin(kPi * x[0]), a * std::sin(kPi * x[1]), a * std::sin(kPi * x[2]));
  };
  mc.mesh_at_level = [](int level) { return build_unit_cube(level_n(level)); };
  return mc;
}

ManufacturedCase case_square2d_steady() {
  ManufacturedCase mc;
  mc.name = "square2d_steady";
  mc.dim = 2;
  mc.transient = false;
  mc.expected_b1 = 0;
  mc.u = [](const Point& x, double) {
    return Point(std::sin(kPi * x[0]), std::sin(kPi * x[1]), 0.0);
  };
  mc.sigma = [](const Point& x, double) {
    return -kPi * (std::cos(kPi * x[0]) + std::cos(kPi * x[1]));
  };
  mc.grad_sigma = [](const Point& x, double) {
    return Point(kPi * kPi * std::sin(kPi * x[0]), kPi * kPi * std::sin(kPi * x[1]), 0.0);
  };
  mc.lu = [](const Point& x, double) {
    return Point(kPi * kPi * std::sin(kPi * x[0]), kPi * kPi * std::sin(kPi * x[1]), 0.0);
  };
  mc.f = mc.lu;  // u_t = 0
  mc.mesh_at_level = [](int level) { return build_unit_square(level_n(level)); };
  return mc;
}

ManufacturedCase case_by_name(const std::string& name) {
  if (name == "annulus2d") return case_annulus2d();
  if (name == "cube3d") return case_cube3d();
  if (name == "square2d_steady") return case_square2d_steady();
  throw InvalidParameterError("unknown case: " + name);
}

ErrorNorms error_norms(const Field& sigma_h, const Field& u_h, const ManufacturedCase& mc,
                       double t, int quad_degree) {
  const FeSpace& ss = *sigma_h.space;
  const FeSpace& us = *u_h.space;
  if (ss.mesh != us.mesh) throw InvalidParameterError("error norms: fields on different meshes");
  const SimplicialMesh& mesh = *ss.mesh;
  const int dim = mesh.dim;
  const QuadratureRule rule = simplex_quadrature(dim, quad_degree);
  const double refmeas = (dim == 2) ? 0.5 : 1.0 / 6.0;

  Eigen::MatrixXd sv, sg, uv, ug;
  Eigen::VectorXd sc(ss.ndof_cell), uc(us.ndof_cell);
  double acc_s = 0.0, acc_ds = 0.0, acc_u = 0.0;

  for (int c = 0; c < mesh.count(dim); ++c) {
    CellGeometry geom = mesh.geometry(c);
    double scale = geom.volume / refmeas;
    const int* sdofs = ss.cell_dof_list(c);
    const double* ssig = ss.cell_sign_list(c);
    for (int i = 0; i < ss.ndof_cell; ++i) sc(i) = sigma_h.coeffs(sdofs[i]) * ssig[i];
    const int* udofs = us.cell_dof_list(c);
    const double* usig = us.cell_sign_list(c);
    for (int i = 0; i < us.ndof_cell; ++i) uc(i) = u_h.coeffs(udofs[i]) * usig[i];

    for (int q = 0; q < rule.size(); ++q) {
      const double* bary = rule.bary.row(q).data();
      Point x = Point::Zero();
      for (int a = 0; a <= dim; ++a) x += bary[a] * geom.x[a];

      eval_basis_into(ss, c, geom, bary, sv, sg);
      eval_basis_into(us, c, geom, bary, uv, ug);

      double sh = sv.col(0).dot(sc);
      double es = sh - mc.sigma(x, t);
      acc_s += rule.weights(q) * scale * es * es;

      Point gs = mc.grad_sigma(x, t);
      for (int d = 0; d < dim; ++d) {
        double gh = sg.col(d).dot(sc);
        double e = gh - gs[d];
        acc_ds += rule.weights(q) * scale * e * e;
      }

      Point ue = mc.u(x, t);
      for (int d = 0; d < dim; ++d) {
        double uh = uv.col(d).dot(uc);
        double e = uh - ue[d];
        acc_u += rule.weights(q) * scale * e * e;
      }
    }
  }
  return {std::sqrt(acc_s), std::sqrt(acc_ds), std::sqrt(acc_u)};
}

namespace {

ErrorNorms run_transient_level(const ManufacturedCase& mc, int r, int level, double dt,
                               double t_final) {
  SimplicialMesh mesh = mc.mesh_at_level(level);
  FeSpace sigma_space = build_space(mesh, Family::Lagrange, 0, r);
  FeSpace u_space = build_space(mesh, Family::Trimmed, 1, r);
  MixedOperators ops = build_mixed_operators(sigma_space, u_space);

  TransientConfig cfg;
  cfg.dt = dt;
  cfg.t_final = t_final;
  cfg.f = mc.f;
  cfg.init = InitMode::ZeroField;  // manufactured solutions vanish at t = 0
  TransientStepper stepper(ops, cfg);
  stepper.run();
  return error_norms(stepper.sigma(), stepper.u(), mc, t_final);
}

}  // namespace

ConvergenceTable convergence_study(const ManufacturedCase& mc, int r, int levels, double dt,
                                   double t_final) {
  if (!mc.transient) throw InvalidParameterError("convergence study needs a transient case");
  if (levels < 2) throw InvalidParameterError("convergence study needs at least two levels");

  ConvergenceTable table;
  table.case_name = mc.name;
  table.r = r;
  table.dt = dt;
  table.t_final = t_final;

  const double nan = std::nan("");
  for (int level = 0; level < levels; ++level) {
    ErrorNorms e = run_transient_level(mc, r, level, dt, t_final);
    ConvergenceRow row;
    row.level = level;
    row.h = case_h(level);
    row.err_sigma = e.err_sigma;
    row.err_dsigma = e.err_dsigma;
    row.err_u = e.err_u;
    if (level == 0) {
      row.rate_sigma = row.rate_dsigma = row.rate_u = nan;
    } else {
      const ConvergenceRow& prev = table.rows.back();
      row.rate_sigma = std::log2(prev.err_sigma / e.err_sigma);
      row.rate_dsigma = std::log2(prev.err_dsigma / e.err_dsigma);
      row.rate_u = std::log2(prev.err_u / e.err_u);
    }
    table.rows.push_back(row);
  }
  return table;
}

TemporalStudy temporal_study(const ManufacturedCase& mc, int r, int level,
                             const std::vector<double>& dts, double plateau_dt, double t_final) {
  if (!mc.transient) throw InvalidParameterError("temporal study needs a transient case");
  if (dts.size() < 2) throw InvalidParameterError("temporal study needs at least two step sizes");

  SimplicialMesh mesh = mc.mesh_at_level(level);
  FeSpace sigma_space = build_space(mesh, Family::Lagrange, 0, r);
  FeSpace u_space = build_space(mesh, Family::Trimmed, 1, r);
  MixedOperators ops = build_mixed_operators(sigma_space, u_space);

  auto err_at = [&](double dt) {
    TransientConfig cfg;
    cfg.dt = dt;
    cfg.t_final = t_final;
    cfg.f = mc.f;
    cfg.init = InitMode::ZeroField;
    TransientStepper stepper(ops, cfg);
    stepper.run();
    return error_norms(stepper.sigma(), stepper.u(), mc, t_final).err_u;
  };

  TemporalStudy study;
  study.level = level;
  study.t_final = t_final;
  study.dts = dts;
  study.plateau_dt = plateau_dt;
  study.plateau_err = err_at(plateau_dt);
  for (double dt : dts) study.err_u.push_back(err_at(dt));
  for (size_t i = 0; i + 1 < dts.size(); ++i) {
    double a = study.err_u[i] - study.plateau_err;
    double b = study.err_u[i + 1] - study.plateau_err;
    study.rates.push_back(std::log2(a / b));
  }
  return study;
}

}  // namespace feec
