#pragma once

#include "feec/stepper.hpp"

#include <string>
#include <vector>

namespace feec {

// Analytic solution of the 1-form heat equation u_t + (curl rot - grad div)u = f
// with natural boundary conditions (u.n = 0 and rot u = 0 / curl u x n = 0),
// plus everything needed to manufacture and measure a run against it.
struct ManufacturedCase {
  std::string name;
  int dim = 2;
  bool transient = true;     // square2d_steady is the steady auxiliary case
  TimeVectorField u;          // exact solution
  TimeScalarField sigma;      // -div u
  TimeVectorField grad_sigma;
  TimeVectorField lu;         // (curl rot - grad div) u
  TimeVectorField f;          // u_t + lu
  std::function<SimplicialMesh(int level)> mesh_at_level;
  int expected_b1 = 0;
};

ManufacturedCase case_annulus2d();
ManufacturedCase case_cube3d();
ManufacturedCase case_square2d_steady();
ManufacturedCase case_by_name(const std::string& name);

// Mesh parameter at a refinement level (level 0 is the coarsest, n = 4).
double case_h(int level);

struct ErrorNorms {
  double err_sigma = 0.0;   // ||sigma - sigma_h||
  double err_dsigma = 0.0;  // ||grad(sigma - sigma_h)||
  double err_u = 0.0;       // ||u - u_h||
};

// L2 errors against the analytic fields at time t, quadrature exactness 8.
ErrorNorms error_norms(const Field& sigma_h, const Field& u_h, const ManufacturedCase& mc,
                       double t, int quad_degree = 8);

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  double err_sigma = 0.0, rate_sigma = 0.0;
  double err_dsigma = 0.0, rate_dsigma = 0.0;
  double err_u = 0.0, rate_u = 0.0;  // rates are NaN on the first row
};

struct ConvergenceTable {
  std::string case_name;
  int r = 1;
  double dt = 0.0, t_final = 0.0;
  std::vector<ConvergenceRow> rows;
};

// Transient solve per level with fixed dt, final-time errors, and rates
// rate[i] = log2(err[i-1]/err[i]). Levels run sequentially (determinism).
ConvergenceTable convergence_study(const ManufacturedCase& mc, int r, int levels, double dt,
                                   double t_final);

struct TemporalStudy {
  int level = 0;
  double t_final = 0.0;
  std::vector<double> dts;
  std::vector<double> err_u;   // final-time u error per dt
  double plateau_dt = 0.0;
  double plateau_err = 0.0;    // spatial floor measured at plateau_dt
  std::vector<double> rates;   // log2 of consecutive plateau-subtracted errors
};

// Time-error order check on one fixed mesh: the spatial floor (error at a
// very small dt) is subtracted before rates are formed.
TemporalStudy temporal_study(const ManufacturedCase& mc, int r, int level,
                             const std::vector<double>& dts, double plateau_dt, double t_final);

}  // namespace feec
