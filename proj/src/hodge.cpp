#include "feec/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace feec {

namespace {

void check_field(const Field& v, const FeSpace* expected, const char* what) {
  if (v.space != expected) throw InvalidParameterError(std::string(what) + ": field/space mismatch");
  if (v.coeffs.size() != expected->dof_count)
    throw InvalidParameterError(std::string(what) + ": coefficient length mismatch");
}

// Engine output mapped to [-1,1) without distribution adapters, so the stream
// is identical across standard libraries.
double unit_double(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

// M_u Q, tolerant of empty bases (including default-constructed 0x0 ones).
Eigen::MatrixXd border_matrix(const MixedOperators& ops, const HarmonicBasis& harmonics) {
  const Eigen::Index nu = ops.M_u.rows();
  if (harmonics.Q.cols() == 0) return Eigen::MatrixXd(nu, 0);
  if (harmonics.Q.rows() != nu)
    throw InvalidParameterError("harmonic basis does not match the 1-form space");
  return ops.M_u * harmonics.Q;
}

}  // namespace

double m_norm(const SparseMatrix& M, const Eigen::VectorXd& x) {
  return std::sqrt(std::max(0.0, x.dot(M * x)));
}

MixedOperators build_mixed_operators(const FeSpace& sigma_space, const FeSpace& u_space) {
  if (sigma_space.mesh != u_space.mesh)
    throw InvalidParameterError("mixed operators: spaces live on different meshes");
  if (sigma_space.form_degree != 0 || u_space.form_degree != 1)
    throw InvalidParameterError("mixed operators: expected a (0-form, 1-form) pair");
  if (sigma_space.poly_degree != u_space.poly_degree)
    throw InvalidParameterError("mixed operators: spaces must share the polynomial degree");

  MixedOperators ops;
  ops.sigma_space = &sigma_space;
  ops.u_space = &u_space;
  ops.M_sigma = mass_matrix(sigma_space);
  ops.M_u = mass_matrix(u_space);
  ops.B = mixed_derivative_matrix(sigma_space, u_space);
  ops.K = curl_stiffness_matrix(u_space);
  ops.D = derivative_matrix(sigma_space, u_space);
  ops.M_sigma_fac = std::make_shared<Factorization>(ops.M_sigma);
  ops.M_u_fac = std::make_shared<Factorization>(ops.M_u);
  return ops;
}

Field dstar(const MixedOperators& ops, const Field& v) {
  check_field(v, ops.u_space, "dstar");
  Eigen::VectorXd s = ops.M_sigma_fac->solve(ops.B.transpose() * v.coeffs);
  return {ops.sigma_space, std::move(s)};
}

Field apply_hodge_laplacian(const MixedOperators& ops, const Field& v) {
  check_field(v, ops.u_space, "hodge laplacian");
  // d d* v: exact derivative of the codifferential, no mass solve needed.
  Eigen::VectorXd s = ops.M_sigma_fac->solve(ops.B.transpose() * v.coeffs);
  Eigen::VectorXd w = ops.D * s + ops.M_u_fac->solve(ops.K * v.coeffs);
  return {ops.u_space, std::move(w)};
}

HarmonicBasis harmonic_basis(const MixedOperators& ops, int expected_dim) {
  if (expected_dim < 0) throw InvalidParameterError("harmonic basis: negative dimension");
  const Eigen::Index ns = ops.M_sigma.rows();
  const Eigen::Index nu = ops.M_u.rows();
  if (expected_dim + 1 > nu)
    throw InvalidParameterError("harmonic basis: dimension exceeds the 1-form space");
  const int m = expected_dim + 1;

  // (L_h + I)^-1 through the shifted mixed saddle system; the harmonic space
  // is its dominant invariant subspace (eigenvalue 1).
  SparseMatrix C = ops.K + ops.M_u;
  Factorization shifted(assemble_saddle(ops.M_sigma, ops.B, C));

  std::mt19937_64 rng(0x9b15f00dULL);  // fixed seed: the basis is deterministic
  Eigen::MatrixXd V(nu, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < nu; ++i) V(i, j) = unit_double(rng);

  auto orthonormalize = [&](Eigen::MatrixXd& W) {
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index k = 0; k < j; ++k) {
          double r = W.col(k).dot(ops.M_u * W.col(j));
          W.col(j) -= r * W.col(k);
        }
      }
      double nrm = m_norm(ops.M_u, W.col(j));
      if (!(nrm > 1e-14))
        throw SolverError("harmonic basis: iteration subspace collapsed");
      W.col(j) /= nrm;
    }
  };
  orthonormalize(V);

  // Rayleigh-Ritz values/vectors of L_h restricted to span(V):
  // T = V'KV + S'M_sigma S with M_sigma S = B'V.
  Eigen::VectorXd rho;
  auto rayleigh_ritz = [&]() {
    Eigen::MatrixXd BtV = ops.B.transpose() * V;
    Eigen::MatrixXd S(ns, m);
    for (int j = 0; j < m; ++j) S.col(j) = ops.M_sigma_fac->solve(BtV.col(j));
    Eigen::MatrixXd T = V.transpose() * (ops.K * V) + S.transpose() * BtV;
    T = 0.5 * (T + T.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    if (es.info() != Eigen::Success) throw SolverError("harmonic basis: dense eigensolve failed");
    rho = es.eigenvalues();
    V = (V * es.eigenvectors()).eval();
  };

  auto max_residual = [&]() {
    double worst = 0.0;
    for (int j = 0; j < expected_dim; ++j) {
      double dq = std::sqrt(std::max(0.0, V.col(j).dot(ops.K * V.col(j))));
      Eigen::VectorXd s = ops.M_sigma_fac->solve(ops.B.transpose() * V.col(j));
      double dsq = m_norm(ops.M_sigma, s);
      worst = std::max(worst, std::max(dq, dsq));
    }
    return worst;
  };

  // Gap test: the (d+1)-th Ritz value must sit far above the d-th, and be an
  // honest nonzero eigenvalue estimate on its own.
  auto check_gap = [&]() {
    double next = rho(expected_dim);
    double floor_req = 1e-3;
    if (expected_dim > 0) floor_req = std::max(floor_req, 1e3 * rho(expected_dim - 1));
    if (!(next >= floor_req)) {
      std::ostringstream os;
      os << "harmonic space dimension mismatch: expected " << expected_dim
         << ", Ritz values near the kernel do not separate (rho_next=" << next;
      if (expected_dim > 0) os << ", rho_dim=" << rho(expected_dim - 1);
      os << ")";
      throw TopologyMismatchError(os.str());
    }
  };

  Eigen::VectorXd rhs(ns + nu);
  const int max_iter = 400;
  for (int iter = 1; iter <= max_iter; ++iter) {
    for (int j = 0; j < m; ++j) {
      rhs.head(ns).setZero();
      rhs.tail(nu) = ops.M_u * V.col(j);
      V.col(j) = shifted.solve(rhs).tail(nu);
    }
    orthonormalize(V);
    if (iter >= 30 && iter % 10 == 0) {
      rayleigh_ritz();
      if (expected_dim == 0 || max_residual() <= 1e-11) break;
      if (iter == max_iter) {
        // Stalled residuals with no separated near-kernel mean the requested
        // dimension is wrong for this mesh, not that the solver broke.
        check_gap();
        throw SolverError("harmonic basis: subspace iteration did not converge");
      }
    }
  }

  check_gap();

  HarmonicBasis basis;
  basis.Q = V.leftCols(expected_dim);
  return basis;
}

HodgeSolveResult hodge_laplacian_solve(const MixedOperators& ops, const HarmonicBasis& harmonics,
                                       const VectorField& f) {
  const Eigen::Index ns = ops.M_sigma.rows();
  const Eigen::Index nu = ops.M_u.rows();
  const Eigen::Index d = harmonics.Q.cols();

  Eigen::MatrixXd H = border_matrix(ops, harmonics);
  Factorization fac(assemble_saddle(ops.M_sigma, ops.B, ops.K, H));

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ns + nu + d);
  rhs.segment(ns, nu) = load_vector(*ops.u_space, f);
  Eigen::VectorXd sol = fac.solve(rhs);

  HodgeSolveResult out;
  out.sigma = {ops.sigma_space, sol.head(ns)};
  out.u = {ops.u_space, sol.segment(ns, nu)};
  out.p = sol.tail(d);
  return out;
}

EllipticProjectionResult elliptic_projection(const MixedOperators& ops,
                                             const HarmonicBasis& harmonics, const VectorField& u,
                                             const VectorField& Lu) {
  const Eigen::Index ns = ops.M_sigma.rows();
  const Eigen::Index nu = ops.M_u.rows();
  const Eigen::Index d = harmonics.Q.cols();

  Eigen::MatrixXd H = border_matrix(ops, harmonics);
  Factorization fac(assemble_saddle(ops.M_sigma, ops.B, ops.K, H));

  Eigen::VectorXd rhs(ns + nu + d);
  rhs.head(ns).setZero();
  rhs.segment(ns, nu) = load_vector(*ops.u_space, Lu);
  if (d > 0) rhs.tail(d) = harmonics.Q.transpose() * load_vector(*ops.u_space, u);
  Eigen::VectorXd sol = fac.solve(rhs);

  EllipticProjectionResult out;
  out.sigma_hat = {ops.sigma_space, sol.head(ns)};
  out.u_hat = {ops.u_space, sol.segment(ns, nu)};
  out.p_hat = sol.tail(d);
  return out;
}

HodgeDecomposition hodge_decompose(const MixedOperators& ops, const HarmonicBasis& harmonics,
                                   const Field& v) {
  check_field(v, ops.u_space, "hodge decomposition");
  const Eigen::Index ns = ops.M_sigma.rows();

  // Exact part d(alpha): normal equations D'M_u D alpha = D'M_u v, made
  // nonsingular by pinning the mean of alpha (assumes a connected mesh, which
  // holds for every generator here; a disconnected mesh would need one
  // constraint per component).
  SparseMatrix Dt = ops.D.transpose();
  SparseMatrix Ag = Dt * ops.B;
  Eigen::VectorXd c = ops.M_sigma * Eigen::VectorXd::Ones(ns);

  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(Ag.nonZeros()) + 2 * static_cast<size_t>(ns));
  for (Eigen::Index i = 0; i < Ag.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(Ag, i); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (Eigen::Index i = 0; i < ns; ++i) {
    trips.emplace_back(static_cast<int>(i), static_cast<int>(ns), c(i));
    trips.emplace_back(static_cast<int>(ns), static_cast<int>(i), c(i));
  }
  SparseMatrix Abord(ns + 1, ns + 1);
  Abord.setFromTriplets(trips.begin(), trips.end());
  Abord.makeCompressed();
  Factorization fac(Abord);

  Eigen::VectorXd rhs(ns + 1);
  rhs.head(ns) = ops.B.transpose() * v.coeffs;
  rhs(ns) = 0.0;
  Eigen::VectorXd alpha = fac.solve(rhs).head(ns);

  HodgeDecomposition out;
  out.exact = {ops.u_space, ops.D * alpha};
  Eigen::VectorXd hcoef = Eigen::VectorXd::Zero(v.coeffs.size());
  if (harmonics.Q.cols() > 0) {
    if (harmonics.Q.rows() != v.coeffs.size())
      throw InvalidParameterError("harmonic basis does not match the 1-form space");
    hcoef = harmonics.Q * (harmonics.Q.transpose() * (ops.M_u * v.coeffs));
  }
  out.harmonic = {ops.u_space, std::move(hcoef)};
  out.coexact = {ops.u_space, v.coeffs - out.exact.coeffs - out.harmonic.coeffs};
  return out;
}

}  // namespace feec
