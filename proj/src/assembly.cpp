#include "feec/assembly.hpp"

namespace feec {

namespace {

double reference_measure(int dim) { return dim == 2 ? 0.5 : 1.0 / 6.0; }

SparseMatrix finalize(int rows, int cols, std::vector<Triplet>& trips) {
  SparseMatrix A(rows, cols);
  A.setFromTriplets(trips.begin(), trips.end());
  A.prune(0.0, 0.0);
  A.makeCompressed();
  return A;
}

// Symmetric single-space Gram matrix of either values or derivatives.
SparseMatrix gram_matrix(const FeSpace& s, bool use_derivative, int quad_degree) {
  const SimplicialMesh& mesh = *s.mesh;
  const int dim = mesh.dim;
  if (quad_degree < 0) quad_degree = 2 * s.poly_degree;
  const QuadratureRule rule = simplex_quadrature(dim, quad_degree);
  const int nd = s.ndof_cell;
  Eigen::MatrixXd values(nd, s.ncomp), dvalues(nd, s.dcomp), local(nd, nd);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.count(dim)) * nd * nd);
  for (int c = 0; c < mesh.count(dim); ++c) {
    const CellGeometry g = mesh.geometry(c);
    const double scale = g.volume / reference_measure(dim);
    local.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      eval_basis_into(s, c, g, rule.bary.row(q).data(), values, dvalues);
      const Eigen::MatrixXd& ph = use_derivative ? dvalues : values;
      const double w = rule.weights[q] * scale;
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j <= i; ++j) local(i, j) += w * ph.row(i).dot(ph.row(j));
    }
    const int* dofs = s.cell_dof_list(c);
    const double* signs = s.cell_sign_list(c);
    for (int i = 0; i < nd; ++i)
      for (int j = 0; j < nd; ++j) {
        const double v = (j <= i) ? local(i, j) : local(j, i);
        trips.emplace_back(dofs[i], dofs[j], signs[i] * signs[j] * v);
      }
  }
  return finalize(s.dof_count, s.dof_count, trips);
}

}  // namespace

SparseMatrix mass_matrix(const FeSpace& s, int quad_degree) {
  return gram_matrix(s, false, quad_degree);
}

SparseMatrix curl_stiffness_matrix(const FeSpace& u_space) {
  if (u_space.form_degree != 1)
    throw InvalidParameterError("curl stiffness expects a 1-form space");
  return gram_matrix(u_space, true, -1);
}

SparseMatrix mixed_derivative_matrix(const FeSpace& sigma_space, const FeSpace& u_space) {
  if (sigma_space.mesh != u_space.mesh)
    throw InvalidParameterError("mixed derivative matrix requires a shared mesh");
  if (sigma_space.form_degree != 0 || u_space.form_degree != 1)
    throw InvalidParameterError("mixed derivative matrix expects (0-form, 1-form) spaces");
  const SimplicialMesh& mesh = *sigma_space.mesh;
  const int dim = mesh.dim;
  const QuadratureRule rule =
      simplex_quadrature(dim, sigma_space.poly_degree - 1 + u_space.poly_degree);
  const int nds = sigma_space.ndof_cell, ndu = u_space.ndof_cell;
  Eigen::MatrixXd svals(nds, 1), sgrads(nds, dim);
  Eigen::MatrixXd uvals(ndu, dim), udvals(ndu, u_space.dcomp);
  Eigen::MatrixXd local(ndu, nds);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(mesh.count(dim)) * ndu * nds);
  for (int c = 0; c < mesh.count(dim); ++c) {
    const CellGeometry g = mesh.geometry(c);
    const double scale = g.volume / reference_measure(dim);
    local.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      eval_basis_into(sigma_space, c, g, rule.bary.row(q).data(), svals, sgrads);
      eval_basis_into(u_space, c, g, rule.bary.row(q).data(), uvals, udvals);
      const double w = rule.weights[q] * scale;
      for (int i = 0; i < ndu; ++i)
        for (int j = 0; j < nds; ++j) local(i, j) += w * uvals.row(i).dot(sgrads.row(j));
    }
    const int* sdofs = sigma_space.cell_dof_list(c);
    const int* udofs = u_space.cell_dof_list(c);
    const double* ssign = sigma_space.cell_sign_list(c);
    const double* usign = u_space.cell_sign_list(c);
    for (int i = 0; i < ndu; ++i)
      for (int j = 0; j < nds; ++j)
        trips.emplace_back(udofs[i], sdofs[j], usign[i] * ssign[j] * local(i, j));
  }
  return finalize(u_space.dof_count, sigma_space.dof_count, trips);
}

namespace {

template <class F, class Dot>
Eigen::VectorXd load_vector_impl(const FeSpace& s, const F& f, const Dot& dot,
                                 int quad_degree) {
  const SimplicialMesh& mesh = *s.mesh;
  const int dim = mesh.dim;
  if (quad_degree < 0) quad_degree = 2 * s.poly_degree + 2;
  const QuadratureRule rule = simplex_quadrature(dim, quad_degree);
  const int nd = s.ndof_cell;
  Eigen::MatrixXd values(nd, s.ncomp), dvalues(nd, s.dcomp);
  Eigen::VectorXd F_out = Eigen::VectorXd::Zero(s.dof_count);
  Eigen::VectorXd local(nd);
  for (int c = 0; c < mesh.count(dim); ++c) {
    const CellGeometry g = mesh.geometry(c);
    const double scale = g.volume / reference_measure(dim);
    local.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      Point x = Point::Zero();
      for (int i = 0; i <= dim; ++i) x += rule.bary(q, i) * g.x[i];
      eval_basis_into(s, c, g, rule.bary.row(q).data(), values, dvalues);
      const double w = rule.weights[q] * scale;
      const auto fx = f(x);
      for (int i = 0; i < nd; ++i) local[i] += w * dot(fx, values, i);
    }
    const int* dofs = s.cell_dof_list(c);
    const double* signs = s.cell_sign_list(c);
    for (int i = 0; i < nd; ++i) F_out[dofs[i]] += signs[i] * local[i];
  }
  return F_out;
}

}  // namespace

Eigen::VectorXd load_vector(const FeSpace& s, const ScalarField& f, int quad_degree) {
  if (s.form_degree != 0)
    throw InvalidParameterError("scalar load vector requires a 0-form space");
  return load_vector_impl(
      s, f, [](double fx, const Eigen::MatrixXd& v, int i) { return fx * v(i, 0); },
      quad_degree);
}

Eigen::VectorXd load_vector(const FeSpace& s, const VectorField& f, int quad_degree) {
  if (s.form_degree != 1)
    throw InvalidParameterError("vector load vector requires a 1-form space");
  const int dim = s.mesh->dim;
  return load_vector_impl(
      s, f,
      [dim](const Point& fx, const Eigen::MatrixXd& v, int i) {
        double acc = 0.0;
        for (int d = 0; d < dim; ++d) acc += fx[d] * v(i, d);
        return acc;
      },
      quad_degree);
}

}  // namespace feec
