#pragma once

#include "feec/elements.hpp"

namespace feec {

// Galerkin matrices in CSR form. Local contributions are accumulated in a
// fixed cell order from triplets, so assembly is deterministic and the
// symmetric matrices come out bitwise symmetric.

// <phi_j, phi_i>; quadrature exact for the product space (default degree 2r).
SparseMatrix mass_matrix(const FeSpace& s, int quad_degree = -1);

// B[i][j] = <d tau_j, v_i> coupling the 0-form space (columns) with the
// 1-form space (rows).
SparseMatrix mixed_derivative_matrix(const FeSpace& sigma_space, const FeSpace& u_space);

// K[i][j] = <d v_j, d v_i> (rot in 2d, curl in 3d).
SparseMatrix curl_stiffness_matrix(const FeSpace& u_space);

// F[i] = <f, phi_i> with quadrature of exactness >= 2r+2 by default.
Eigen::VectorXd load_vector(const FeSpace& s, const ScalarField& f, int quad_degree = -1);
Eigen::VectorXd load_vector(const FeSpace& s, const VectorField& f, int quad_degree = -1);

}  // namespace feec
