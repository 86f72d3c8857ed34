#pragma once

#include "feec/common.hpp"

#include <memory>

namespace feec {

// Direct sparse LU with column reordering and partial pivoting. One
// factorization serves many right-hand sides. Singular (or numerically
// unusable) matrices raise SingularMatrixError; nothing is regularized.
class Factorization {
 public:
  explicit Factorization(const SparseMatrix& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  int size() const { return n_; }

 private:
  int n_ = 0;
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

// Symmetric block saddle matrix
//   [ -M_sigma  B^T  0 ]
//   [  B        C    H ]
//   [  0        H^T  0 ]
// where H (harmonic constraint border, n_u x m) may have zero columns.
SparseMatrix assemble_saddle(const SparseMatrix& M_sigma, const SparseMatrix& B,
                             const SparseMatrix& C, const Eigen::MatrixXd& H);
SparseMatrix assemble_saddle(const SparseMatrix& M_sigma, const SparseMatrix& B,
                             const SparseMatrix& C);

}  // namespace feec
