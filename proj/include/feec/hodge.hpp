#pragma once

#include "feec/assembly.hpp"
#include "feec/linsolve.hpp"

namespace feec {

// Matrices of the mixed pair (P_r Lambda^0, P_r^- Lambda^1) built once and
// shared by the discrete-operator, elliptic and transient code paths.
struct MixedOperators {
  const FeSpace* sigma_space = nullptr;
  const FeSpace* u_space = nullptr;
  SparseMatrix M_sigma, M_u, B, K;
  SparseMatrix D;  // coefficient map of d (B = M_u D)
  std::shared_ptr<Factorization> M_sigma_fac, M_u_fac;
};

MixedOperators build_mixed_operators(const FeSpace& sigma_space, const FeSpace& u_space);

// M_u-orthonormal basis of the discrete harmonic space.
struct HarmonicBasis {
  Eigen::MatrixXd Q;  // dof_u x dim
  int dim() const { return static_cast<int>(Q.cols()); }
  Field field(const FeSpace& u_space, int i) const { return {&u_space, Q.col(i)}; }
};

// Shift-free inverse subspace iteration on (L_h + I)^-1 realized through the
// mixed saddle system, dimension fixed a priori (from the mesh Betti number).
// Fails with TopologyMismatchError if the Rayleigh-quotient gap between the
// expected_dim-th and (expected_dim+1)-th smallest values is below 10^3.
HarmonicBasis harmonic_basis(const MixedOperators& ops, int expected_dim);

// Discrete codifferential: <d*_h v, tau> = <v, d tau> for all tau.
Field dstar(const MixedOperators& ops, const Field& v);

// L_h v = d*_h d v + d d*_h v, returned in the 1-form space.
Field apply_hodge_laplacian(const MixedOperators& ops, const Field& v);

struct HodgeSolveResult {
  Field sigma, u;
  Eigen::VectorXd p;  // harmonic coefficients
};

// Mixed solve of the Hodge-Laplace problem with harmonic constraint.
HodgeSolveResult hodge_laplacian_solve(const MixedOperators& ops, const HarmonicBasis& harmonics,
                                       const VectorField& f);

struct EllipticProjectionResult {
  Field sigma_hat, u_hat;
  Eigen::VectorXd p_hat;  // harmonic coefficients
};

// Elliptic projection of an exact pair (sigma = d* u, u): the discrete mixed
// solution with load <L u, v> and harmonic data <u, q>.
EllipticProjectionResult elliptic_projection(const MixedOperators& ops,
                                             const HarmonicBasis& harmonics, const VectorField& u,
                                             const VectorField& Lu);

struct HodgeDecomposition {
  Field exact, harmonic, coexact;
};

// M_u-orthogonal splitting v = d alpha + q + remainder.
HodgeDecomposition hodge_decompose(const MixedOperators& ops, const HarmonicBasis& harmonics,
                                   const Field& v);

// sqrt(x' M x)
double m_norm(const SparseMatrix& M, const Eigen::VectorXd& x);

}  // namespace feec
