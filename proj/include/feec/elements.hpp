#pragma once

#include "feec/mesh.hpp"
#include "feec/quadrature.hpp"

namespace feec {

// Families: Lagrange scalar spaces P_r for 0-forms, trimmed spaces P_r^- for
// 1-forms (edge/Whitney elements for r=1, the rotated lowest Raviart-Thomas
// space for r=2 in 2d). Supported: (Lagrange, k=0, r=1) in 2d/3d,
// (Lagrange, k=0, r=2) in 2d, (Trimmed, k=1, r=1) in 2d/3d,
// (Trimmed, k=1, r=2) in 2d.
enum class Family { Lagrange, Trimmed };

struct FeSpace {
  const SimplicialMesh* mesh = nullptr;
  Family family = Family::Lagrange;
  int form_degree = 0;  // k
  int poly_degree = 1;  // r
  int dof_count = 0;
  int ndof_cell = 0;
  int ncomp = 0;  // value components: 1 for 0-forms, dim for 1-form proxies
  int dcomp = 0;  // derivative components: dim (gradient), 1 (2d rot), 3 (3d curl)
  std::vector<int> cell_dofs;      // ncells x ndof_cell
  std::vector<double> cell_signs;  // orientation signs, same shape
  std::vector<double> rt1_coeff;   // Trimmed r=2: per-cell 8x8 dual-basis coefficients

  const int* cell_dof_list(int c) const { return cell_dofs.data() + c * ndof_cell; }
  const double* cell_sign_list(int c) const { return cell_signs.data() + c * ndof_cell; }
};

struct Field {
  const FeSpace* space = nullptr;
  Eigen::VectorXd coeffs;
};

FeSpace build_space(const SimplicialMesh& mesh, Family family, int k, int r);

struct BasisEval {
  Eigen::MatrixXd values;   // ndof_cell x ncomp
  Eigen::MatrixXd dvalues;  // ndof_cell x dcomp
};

// Values of all local basis functions (and their exterior derivatives, as
// gradient / rot / curl proxies) at a barycentric point of a cell, in the
// physical frame. bary has dim+1 entries, each >= -1e-12.
BasisEval eval_basis(const FeSpace& s, int cell, const Eigen::VectorXd& bary);

// Allocation-free variant for assembly loops; `geom` must be mesh.geometry(cell).
void eval_basis_into(const FeSpace& s, int cell, const CellGeometry& geom, const double* bary,
                     Eigen::MatrixXd& values, Eigen::MatrixXd& dvalues);

// Degrees-of-freedom interpolation: point values for Lagrange spaces, edge
// (and interior) moments for trimmed spaces, with moments evaluated by Gauss
// rules of the given exactness (default 2r+2).
Field canonical_interpolate(const FeSpace& s, const ScalarField& f, int quad_degree = -1);
Field canonical_interpolate(const FeSpace& s, const VectorField& f, int quad_degree = -1);

// Coefficient representation of the exterior derivative mapping the Lagrange
// 0-form space into the trimmed 1-form space (n_u x n_sigma). For r=1 this is
// exactly the signed vertex-to-edge incidence matrix.
SparseMatrix derivative_matrix(const FeSpace& sigma_space, const FeSpace& u_space);

// Field evaluation helpers (value and derivative proxies at one point).
double eval_scalar(const Field& f, int cell, const Eigen::VectorXd& bary);
Point eval_scalar_gradient(const Field& f, int cell, const Eigen::VectorXd& bary);
Point eval_vector(const Field& f, int cell, const Eigen::VectorXd& bary);
double eval_rot(const Field& f, int cell, const Eigen::VectorXd& bary);   // 2d
Point eval_curl(const Field& f, int cell, const Eigen::VectorXd& bary);   // 3d

}  // namespace feec
