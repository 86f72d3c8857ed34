#include "feec/elements.hpp"

#include <cmath>
#include <map>

namespace feec {

namespace {

constexpr std::pair<int, int> kEdges2[3] = {{0, 1}, {0, 2}, {1, 2}};
constexpr std::pair<int, int> kEdges3[6] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

const std::pair<int, int>* local_edges(int dim) { return dim == 2 ? kEdges2 : kEdges3; }

// Frame for the degree-2 trimmed generators: centroid-centered, scaled by the
// longest edge. Must be identical in construction and evaluation.
struct Rt2Frame {
  Eigen::Vector2d xc;
  double ell;
};

Rt2Frame rt2_frame(const CellGeometry& g) {
  Rt2Frame fr;
  fr.xc = ((g.x[0] + g.x[1] + g.x[2]) / 3.0).head<2>();
  fr.ell = std::max({(g.x[1] - g.x[0]).norm(), (g.x[2] - g.x[0]).norm(),
                     (g.x[2] - g.x[1]).norm()});
  return fr;
}

// Spanning set of the rotated RT1 space on a triangle: the six degree-<=1
// fields plus the two rotated homogeneous-quadratic Koszul fields.
Eigen::Vector2d rt2_gen(int m, const Rt2Frame& fr, const Eigen::Vector2d& x) {
  const double xi = (x.x() - fr.xc.x()) / fr.ell;
  const double et = (x.y() - fr.xc.y()) / fr.ell;
  switch (m) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {xi, 0.0};
    case 3: return {et, 0.0};
    case 4: return {0.0, xi};
    case 5: return {0.0, et};
    case 6: return {-xi * et, xi * xi};
    default: return {-et * et, xi * et};
  }
}

double rt2_gen_rot(int m, const Rt2Frame& fr, const Eigen::Vector2d& x) {
  const double xi = (x.x() - fr.xc.x()) / fr.ell;
  const double et = (x.y() - fr.xc.y()) / fr.ell;
  switch (m) {
    case 3: return -1.0 / fr.ell;
    case 4: return 1.0 / fr.ell;
    case 6: return 3.0 * xi / fr.ell;
    case 7: return 3.0 * et / fr.ell;
    default: return 0.0;
  }
}

// Applies the eight trimmed-r2 functionals (two tangential moments per edge
// against {1, 2s-1}, two cell moments against the coordinate constants,
// normalized by area) to `field`, which is called as field(bary3, x2d).
template <class F>
void rt2_apply_functionals(const CellGeometry& g, const QuadratureRule& erule,
                           const QuadratureRule& trule, F&& field, double* out) {
  for (int e = 0; e < 3; ++e) {
    const auto [a, b] = kEdges2[e];
    const Eigen::Vector2d xa = g.x[a].head<2>(), xb = g.x[b].head<2>();
    const Eigen::Vector2d D = xb - xa;
    double m0 = 0.0, m1 = 0.0;
    for (int q = 0; q < erule.size(); ++q) {
      const double s = erule.bary(q, 1), w = erule.weights[q];
      double bary[3] = {0.0, 0.0, 0.0};
      bary[a] = 1.0 - s;
      bary[b] = s;
      const Eigen::Vector2d x = (1.0 - s) * xa + s * xb;
      const double vt = field(bary, x).dot(D);
      m0 += w * vt;
      m1 += w * vt * (2.0 * s - 1.0);
    }
    out[2 * e] = m0;
    out[2 * e + 1] = m1;
  }
  Eigen::Vector2d cm = Eigen::Vector2d::Zero();
  for (int q = 0; q < trule.size(); ++q) {
    double bary[3] = {trule.bary(q, 0), trule.bary(q, 1), trule.bary(q, 2)};
    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    for (int i = 0; i < 3; ++i) x += bary[i] * g.x[i].head<2>();
    cm += (2.0 * trule.weights[q]) * field(bary, x);  // (1/|T|) int_T, |T| cancels
  }
  out[6] = cm.x();
  out[7] = cm.y();
}

void lagrange2_eval(const CellGeometry& g, const double* bary, Eigen::MatrixXd& values,
                    Eigen::MatrixXd& dvalues) {
  for (int i = 0; i < 3; ++i) {
    values(i, 0) = bary[i] * (2.0 * bary[i] - 1.0);
    dvalues.row(i) = ((4.0 * bary[i] - 1.0) * g.grad_lambda[i]).head<2>().transpose();
  }
  for (int e = 0; e < 3; ++e) {
    const auto [a, b] = kEdges2[e];
    values(3 + e, 0) = 4.0 * bary[a] * bary[b];
    dvalues.row(3 + e) =
        (4.0 * (bary[b] * g.grad_lambda[a] + bary[a] * g.grad_lambda[b])).head<2>().transpose();
  }
}

}  // namespace

FeSpace build_space(const SimplicialMesh& mesh, Family family, int k, int r) {
  const int dim = mesh.dim;
  const bool ok =
      (family == Family::Lagrange && k == 0 && (r == 1 || (r == 2 && dim == 2))) ||
      (family == Family::Trimmed && k == 1 && (r == 1 || (r == 2 && dim == 2)));
  if (!ok)
    throw UnsupportedConfigError("unsupported element: family/k/r/dim combination");

  FeSpace s;
  s.mesh = &mesh;
  s.family = family;
  s.form_degree = k;
  s.poly_degree = r;
  const int nc = mesh.count(dim);
  const int nv = mesh.count(0);
  const int ne = mesh.count(1);

  if (family == Family::Lagrange) {
    s.ncomp = 1;
    s.dcomp = dim;
    if (r == 1) {
      s.dof_count = nv;
      s.ndof_cell = dim + 1;
      s.cell_dofs = mesh.simplices[dim];
    } else {
      s.dof_count = nv + ne;
      s.ndof_cell = 6;
      s.cell_dofs.resize(static_cast<size_t>(nc) * 6);
      for (int c = 0; c < nc; ++c) {
        const int* t = mesh.simplex(2, c);
        const int* e = mesh.cell_edge_list(c);
        for (int i = 0; i < 3; ++i) s.cell_dofs[c * 6 + i] = t[i];
        for (int i = 0; i < 3; ++i) s.cell_dofs[c * 6 + 3 + i] = nv + e[i];
      }
    }
  } else {
    s.ncomp = dim;
    s.dcomp = (dim == 2) ? 1 : 3;
    if (r == 1) {
      s.dof_count = ne;
      s.ndof_cell = mesh.edges_per_cell();
      s.cell_dofs = mesh.cell_edges;
    } else {
      const int nt = nc;
      s.dof_count = 2 * ne + 2 * nt;
      s.ndof_cell = 8;
      s.cell_dofs.resize(static_cast<size_t>(nc) * 8);
      for (int c = 0; c < nc; ++c) {
        const int* e = mesh.cell_edge_list(c);
        for (int i = 0; i < 3; ++i) {
          s.cell_dofs[c * 8 + 2 * i] = 2 * e[i];
          s.cell_dofs[c * 8 + 2 * i + 1] = 2 * e[i] + 1;
        }
        s.cell_dofs[c * 8 + 6] = 2 * ne + 2 * c;
        s.cell_dofs[c * 8 + 7] = 2 * ne + 2 * c + 1;
      }
      // Dual basis coefficients per cell: columns of V^-1, where
      // V[a][m] = functional_a(generator_m).
      s.rt1_coeff.resize(static_cast<size_t>(nc) * 64);
      const QuadratureRule erule = edge_quadrature(3);
      const QuadratureRule trule = simplex_quadrature(2, 2);
      for (int c = 0; c < nc; ++c) {
        const CellGeometry g = mesh.geometry(c);
        const Rt2Frame fr = rt2_frame(g);
        Eigen::Matrix<double, 8, 8> V;
        double col[8];
        for (int m = 0; m < 8; ++m) {
          rt2_apply_functionals(
              g, erule, trule,
              [&](const double*, const Eigen::Vector2d& x) { return rt2_gen(m, fr, x); }, col);
          for (int a = 0; a < 8; ++a) V(a, m) = col[a];
        }
        Eigen::Matrix<double, 8, 8> C =
            V.partialPivLu().solve(Eigen::Matrix<double, 8, 8>::Identity());
        if (!C.allFinite())
          throw Error("degenerate trimmed-r2 element on cell " + std::to_string(c));
        for (int m = 0; m < 8; ++m)
          for (int d = 0; d < 8; ++d) s.rt1_coeff[c * 64 + m * 8 + d] = C(m, d);
      }
    }
  }
  s.cell_signs.assign(s.cell_dofs.size(), 1.0);
  return s;
}

void eval_basis_into(const FeSpace& s, int cell, const CellGeometry& g, const double* bary,
                     Eigen::MatrixXd& values, Eigen::MatrixXd& dvalues) {
  const int dim = s.mesh->dim;
  values.resize(s.ndof_cell, s.ncomp);    // no-op when already sized
  dvalues.resize(s.ndof_cell, s.dcomp);
  if (s.family == Family::Lagrange) {
    if (s.poly_degree == 1) {
      for (int i = 0; i <= dim; ++i) {
        values(i, 0) = bary[i];
        dvalues.row(i) = g.grad_lambda[i].head(dim).transpose();
      }
    } else {
      lagrange2_eval(g, bary, values, dvalues);
    }
    return;
  }
  if (s.poly_degree == 1) {
    const auto* edges = local_edges(dim);
    for (int e = 0; e < s.ndof_cell; ++e) {
      const auto [a, b] = edges[e];
      const Point w = bary[a] * g.grad_lambda[b] - bary[b] * g.grad_lambda[a];
      values.row(e) = w.head(dim).transpose();
      if (dim == 2)
        dvalues(e, 0) = 2.0 * (g.grad_lambda[a].x() * g.grad_lambda[b].y() -
                               g.grad_lambda[a].y() * g.grad_lambda[b].x());
      else
        dvalues.row(e) = (2.0 * g.grad_lambda[a].cross(g.grad_lambda[b])).transpose();
    }
    return;
  }
  const Rt2Frame fr = rt2_frame(g);
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  for (int i = 0; i < 3; ++i) x += bary[i] * g.x[i].head<2>();
  Eigen::Vector2d gv[8];
  double gr[8];
  for (int m = 0; m < 8; ++m) {
    gv[m] = rt2_gen(m, fr, x);
    gr[m] = rt2_gen_rot(m, fr, x);
  }
  const double* C = s.rt1_coeff.data() + static_cast<size_t>(cell) * 64;
  for (int d = 0; d < 8; ++d) {
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    double rt = 0.0;
    for (int m = 0; m < 8; ++m) {
      v += C[m * 8 + d] * gv[m];
      rt += C[m * 8 + d] * gr[m];
    }
    values.row(d) = v.transpose();
    dvalues(d, 0) = rt;
  }
}

BasisEval eval_basis(const FeSpace& s, int cell, const Eigen::VectorXd& bary) {
  const int dim = s.mesh->dim;
  if (cell < 0 || cell >= s.mesh->count(dim))
    throw InvalidParameterError("cell index out of range");
  if (bary.size() != dim + 1)
    throw InvalidParameterError("barycentric point has wrong length");
  double sum = 0.0;
  for (int i = 0; i <= dim; ++i) {
    if (bary[i] < -1e-12)
      throw InvalidParameterError("barycentric point outside reference simplex");
    sum += bary[i];
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InvalidParameterError("barycentric coordinates do not sum to 1");
  BasisEval be;
  be.values.resize(s.ndof_cell, s.ncomp);
  be.dvalues.resize(s.ndof_cell, s.dcomp);
  eval_basis_into(s, cell, s.mesh->geometry(cell), bary.data(), be.values, be.dvalues);
  return be;
}

Field canonical_interpolate(const FeSpace& s, const ScalarField& f, int quad_degree) {
  if (s.form_degree != 0)
    throw InvalidParameterError("scalar interpolation requires a 0-form space");
  (void)quad_degree;
  const SimplicialMesh& mesh = *s.mesh;
  Field out{&s, Eigen::VectorXd::Zero(s.dof_count)};
  const int nv = mesh.count(0);
  for (int v = 0; v < nv; ++v) out.coeffs[v] = f(mesh.vertices[v]);
  if (s.poly_degree == 2) {
    for (int e = 0; e < mesh.count(1); ++e) {
      const int* t = mesh.simplex(1, e);
      out.coeffs[nv + e] = f(0.5 * (mesh.vertices[t[0]] + mesh.vertices[t[1]]));
    }
  }
  return out;
}

Field canonical_interpolate(const FeSpace& s, const VectorField& f, int quad_degree) {
  if (s.form_degree != 1)
    throw InvalidParameterError("vector interpolation requires a 1-form space");
  const SimplicialMesh& mesh = *s.mesh;
  if (quad_degree < 0) quad_degree = 2 * s.poly_degree + 2;
  const QuadratureRule erule = edge_quadrature(quad_degree);
  Field out{&s, Eigen::VectorXd::Zero(s.dof_count)};
  const int ne = mesh.count(1);
  for (int e = 0; e < ne; ++e) {
    const int* t = mesh.simplex(1, e);
    const Point xa = mesh.vertices[t[0]], xb = mesh.vertices[t[1]];
    const Point D = xb - xa;
    double m0 = 0.0, m1 = 0.0;
    for (int q = 0; q < erule.size(); ++q) {
      const double sp = erule.bary(q, 1), w = erule.weights[q];
      const double vt = f(xa + sp * D).dot(D);
      m0 += w * vt;
      m1 += w * vt * (2.0 * sp - 1.0);
    }
    if (s.poly_degree == 1) {
      out.coeffs[e] = m0;
    } else {
      out.coeffs[2 * e] = m0;
      out.coeffs[2 * e + 1] = m1;
    }
  }
  if (s.poly_degree == 2) {
    const QuadratureRule trule = simplex_quadrature(2, std::min(quad_degree, 8));
    for (int c = 0; c < mesh.count(2); ++c) {
      const CellGeometry g = mesh.geometry(c);
      Eigen::Vector2d cm = Eigen::Vector2d::Zero();
      for (int q = 0; q < trule.size(); ++q) {
        Point x = Point::Zero();
        for (int i = 0; i < 3; ++i) x += trule.bary(q, i) * g.x[i];
        cm += (2.0 * trule.weights[q]) * f(x).head<2>();
      }
      out.coeffs[2 * ne + 2 * c] = cm.x();
      out.coeffs[2 * ne + 2 * c + 1] = cm.y();
    }
  }
  return out;
}

SparseMatrix derivative_matrix(const FeSpace& sigma_space, const FeSpace& u_space) {
  if (sigma_space.mesh != u_space.mesh)
    throw InvalidParameterError("derivative matrix requires spaces on the same mesh");
  if (sigma_space.form_degree != 0 || u_space.form_degree != 1 ||
      sigma_space.poly_degree != u_space.poly_degree)
    throw InvalidParameterError("derivative matrix expects matching (P_r, P_r^-) pair");
  const SimplicialMesh& mesh = *sigma_space.mesh;
  if (sigma_space.poly_degree == 1) {
    // Exactly the signed vertex-to-edge incidence matrix.
    SparseMatrix D(u_space.dof_count, sigma_space.dof_count);
    std::vector<Triplet> trips;
    const IncidenceMatrix& inc = mesh.incidence[0];
    for (int e = 0; e < inc.outerSize(); ++e)
      for (IncidenceMatrix::InnerIterator it(inc, e); it; ++it)
        trips.emplace_back(e, static_cast<int>(it.col()), double(it.value()));
    D.setFromTriplets(trips.begin(), trips.end());
    D.makeCompressed();
    return D;
  }
  // r = 2 (2d): apply the trimmed-space functionals to each scalar basis
  // gradient; facet moments agree across neighboring cells, so entries are
  // written with set semantics.
  const QuadratureRule erule = edge_quadrature(3);
  const QuadratureRule trule = simplex_quadrature(2, 2);
  std::vector<Eigen::Triplet<double>> trips;
  SparseMatrix D(u_space.dof_count, sigma_space.dof_count);
  std::map<std::pair<int, int>, double> entries;
  Eigen::MatrixXd vals(6, 1), dvals(6, 2);
  for (int c = 0; c < mesh.count(2); ++c) {
    const CellGeometry g = mesh.geometry(c);
    const int* sdofs = sigma_space.cell_dof_list(c);
    const int* udofs = u_space.cell_dof_list(c);
    for (int j = 0; j < 6; ++j) {
      double out[8];
      rt2_apply_functionals(
          g, erule, trule,
          [&](const double* bary, const Eigen::Vector2d&) {
            lagrange2_eval(g, bary, vals, dvals);
            return Eigen::Vector2d(dvals(j, 0), dvals(j, 1));
          },
          out);
      for (int a = 0; a < 8; ++a)
        if (std::abs(out[a]) > 1e-14) entries[{udofs[a], sdofs[j]}] = out[a];
    }
  }
  trips.reserve(entries.size());
  for (const auto& [key, val] : entries) trips.emplace_back(key.first, key.second, val);
  D.setFromTriplets(trips.begin(), trips.end());
  D.makeCompressed();
  return D;
}

namespace {

void local_coeffs(const Field& f, int cell, Eigen::VectorXd& lc) {
  const FeSpace& s = *f.space;
  const int* dofs = s.cell_dof_list(cell);
  const double* signs = s.cell_sign_list(cell);
  lc.resize(s.ndof_cell);
  for (int i = 0; i < s.ndof_cell; ++i) lc[i] = f.coeffs[dofs[i]] * signs[i];
}

}  // namespace

double eval_scalar(const Field& f, int cell, const Eigen::VectorXd& bary) {
  BasisEval be = eval_basis(*f.space, cell, bary);
  Eigen::VectorXd lc;
  local_coeffs(f, cell, lc);
  return (be.values.transpose() * lc)(0);
}

Point eval_scalar_gradient(const Field& f, int cell, const Eigen::VectorXd& bary) {
  BasisEval be = eval_basis(*f.space, cell, bary);
  Eigen::VectorXd lc;
  local_coeffs(f, cell, lc);
  Eigen::VectorXd gd = be.dvalues.transpose() * lc;
  Point p = Point::Zero();
  p.head(gd.size()) = gd;
  return p;
}

Point eval_vector(const Field& f, int cell, const Eigen::VectorXd& bary) {
  BasisEval be = eval_basis(*f.space, cell, bary);
  Eigen::VectorXd lc;
  local_coeffs(f, cell, lc);
  Eigen::VectorXd v = be.values.transpose() * lc;
  Point p = Point::Zero();
  p.head(v.size()) = v;
  return p;
}

double eval_rot(const Field& f, int cell, const Eigen::VectorXd& bary) {
  BasisEval be = eval_basis(*f.space, cell, bary);
  Eigen::VectorXd lc;
  local_coeffs(f, cell, lc);
  return (be.dvalues.transpose() * lc)(0);
}

Point eval_curl(const Field& f, int cell, const Eigen::VectorXd& bary) {
  BasisEval be = eval_basis(*f.space, cell, bary);
  Eigen::VectorXd lc;
  local_coeffs(f, cell, lc);
  Eigen::VectorXd v = be.dvalues.transpose() * lc;
  Point p = Point::Zero();
  p.head(v.size()) = v;
  return p;
}

}  // namespace feec
