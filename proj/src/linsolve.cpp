#include "feec/linsolve.hpp"

#include <Eigen/SparseLU>

namespace feec {

Factorization::Factorization(const SparseMatrix& A) {
  if (A.rows() != A.cols()) throw InvalidParameterError("factorization requires a square matrix");
  n_ = static_cast<int>(A.rows());
  lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  Eigen::SparseMatrix<double> Acm(A);
  Acm.makeCompressed();
  lu_->compute(Acm);
  if (lu_->info() != Eigen::Success)
    throw SingularMatrixError("sparse LU failed: " + lu_->lastErrorMessage());
  // Guard against rank deficiency that survived with a tiny pivot: a direct
  // solve must reproduce a probe right-hand side to near machine precision.
  Eigen::VectorXd probe(n_);
  uint64_t state = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < n_; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    probe[i] = 2.0 * (double(state >> 11) * (1.0 / 9007199254740992.0)) - 1.0;
  }
  const Eigen::VectorXd b = A * probe;
  const double bn = b.norm();
  if (bn == 0.0) throw SingularMatrixError("matrix maps probe vector to zero");
  const Eigen::VectorXd x = lu_->solve(b);
  if (lu_->info() != Eigen::Success || !(((A * x - b).norm() / bn) < 1e-6))
    throw SingularMatrixError("matrix is singular to working precision");
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b) const {
  if (static_cast<int>(b.size()) != n_)
    throw InvalidParameterError("right-hand side length mismatch");
  Eigen::VectorXd x = lu_->solve(b);
  if (lu_->info() != Eigen::Success) throw SolverError("sparse back substitution failed");
  return x;
}

SparseMatrix assemble_saddle(const SparseMatrix& M_sigma, const SparseMatrix& B,
                             const SparseMatrix& C, const Eigen::MatrixXd& H) {
  const int ns = static_cast<int>(M_sigma.rows());
  const int nu = static_cast<int>(C.rows());
  const int m = static_cast<int>(H.cols());
  if (M_sigma.cols() != ns || C.cols() != nu || B.rows() != nu || B.cols() != ns)
    throw InvalidParameterError("saddle block dimensions are inconsistent");
  if (m > 0 && H.rows() != nu)
    throw InvalidParameterError("harmonic border has wrong row count");
  std::vector<Triplet> trips;
  trips.reserve(M_sigma.nonZeros() + 2 * B.nonZeros() + C.nonZeros() +
                2 * static_cast<size_t>(nu) * m);
  for (int r = 0; r < M_sigma.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(M_sigma, r); it; ++it)
      trips.emplace_back(r, static_cast<int>(it.col()), -it.value());
  for (int r = 0; r < B.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(B, r); it; ++it) {
      trips.emplace_back(ns + r, static_cast<int>(it.col()), it.value());
      trips.emplace_back(static_cast<int>(it.col()), ns + r, it.value());
    }
  for (int r = 0; r < C.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(C, r); it; ++it)
      trips.emplace_back(ns + r, ns + static_cast<int>(it.col()), it.value());
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < nu; ++i)
      if (H(i, j) != 0.0) {
        trips.emplace_back(ns + i, ns + nu + j, H(i, j));
        trips.emplace_back(ns + nu + j, ns + i, H(i, j));
      }
  SparseMatrix A(ns + nu + m, ns + nu + m);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  return A;
}

SparseMatrix assemble_saddle(const SparseMatrix& M_sigma, const SparseMatrix& B,
                             const SparseMatrix& C) {
  return assemble_saddle(M_sigma, B, C, Eigen::MatrixXd(C.rows(), 0));
}

}  // namespace feec
