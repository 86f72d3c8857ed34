#pragma once

#include "feec/common.hpp"

namespace feec {

// Positive-weight quadrature on the reference simplex (dim 2 or 3) or the
// unit interval (dim 1). Points are barycentric rows; weights sum to the
// reference measure (1, 1/2, 1/6).
struct QuadratureRule {
  int dim = 0;
  int exactness = 0;
  RowMatrixXd bary;         // nq x (dim+1)
  Eigen::VectorXd weights;  // nq
  int size() const { return static_cast<int>(weights.size()); }
};

// Conical-product rule exact for polynomials of total degree <= degree.
// Supported up to degree 8.
QuadratureRule simplex_quadrature(int dim, int degree);

// Gauss-Legendre on [0,1] exact to the given degree (used for edge moments).
QuadratureRule edge_quadrature(int degree);

}  // namespace feec
