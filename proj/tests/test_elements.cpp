#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "feec/elements.hpp"
#include "test_helpers.hpp"

using namespace feec;

namespace {

ScalarField as_scalar_field(const Field& f) {
  return [&f](const Point& x) {
    Eigen::VectorXd bary;
    const int c = test::locate(*f.space->mesh, x, bary);
    REQUIRE(c >= 0);
    return eval_scalar(f, c, bary);
  };
}

VectorField as_vector_field(const Field& f) {
  return [&f](const Point& x) {
    Eigen::VectorXd bary;
    const int c = test::locate(*f.space->mesh, x, bary);
    REQUIRE(c >= 0);
    return eval_vector(f, c, bary);
  };
}

Eigen::VectorXd interior_bary(int dim) {
  Eigen::VectorXd b(dim + 1);
  if (dim == 2)
    b << 0.30, 0.32, 0.38;
  else
    b << 0.22, 0.26, 0.24, 0.28;
  return b;
}

}  // namespace

TEST_CASE("space dimensions follow the entity counts") {
  const auto an = build_square_annulus(4);
  CHECK(build_space(an, Family::Lagrange, 0, 1).dof_count == 24);
  CHECK(build_space(an, Family::Lagrange, 0, 2).dof_count == 24 + 48);
  CHECK(build_space(an, Family::Trimmed, 1, 1).dof_count == 48);
  CHECK(build_space(an, Family::Trimmed, 1, 2).dof_count == 2 * 48 + 2 * 24);
  CHECK(build_space(an, Family::Lagrange, 0, 1).ndof_cell == 3);
  CHECK(build_space(an, Family::Lagrange, 0, 2).ndof_cell == 6);
  CHECK(build_space(an, Family::Trimmed, 1, 1).ndof_cell == 3);
  CHECK(build_space(an, Family::Trimmed, 1, 2).ndof_cell == 8);

  const auto cu = build_unit_cube(1);
  CHECK(build_space(cu, Family::Lagrange, 0, 1).dof_count == 8);
  CHECK(build_space(cu, Family::Trimmed, 1, 1).dof_count == 19);
  CHECK(build_space(cu, Family::Trimmed, 1, 1).ndof_cell == 6);

  CHECK_THROWS_AS(build_space(an, Family::Lagrange, 0, 3), UnsupportedConfigError);
  CHECK_THROWS_AS(build_space(an, Family::Trimmed, 1, 3), UnsupportedConfigError);
  CHECK_THROWS_AS(build_space(an, Family::Lagrange, 1, 1), UnsupportedConfigError);
  CHECK_THROWS_AS(build_space(an, Family::Trimmed, 0, 1), UnsupportedConfigError);
  CHECK_THROWS_AS(build_space(an, Family::Lagrange, 2, 1), UnsupportedConfigError);
  CHECK_THROWS_AS(build_space(cu, Family::Lagrange, 0, 2), UnsupportedConfigError);
  CHECK_THROWS_AS(build_space(cu, Family::Trimmed, 1, 2), UnsupportedConfigError);
}

TEST_CASE("Lagrange bases form a partition of unity") {
  const auto an = build_square_annulus(4);
  const auto cu = build_unit_cube(1);
  std::mt19937_64 rng(91);
  for (const FeSpace& s : {build_space(an, Family::Lagrange, 0, 1),
                           build_space(an, Family::Lagrange, 0, 2),
                           build_space(cu, Family::Lagrange, 0, 1)}) {
    const int d = s.mesh->dim;
    for (int trial = 0; trial < 5; ++trial) {
      const int cell = static_cast<int>(rng() % s.mesh->count(d));
      Eigen::VectorXd b(d + 1);
      double sum = 0.0;
      for (int a = 0; a <= d; ++a) sum += (b[a] = 0.05 + 0.9 * std::abs(test::unit_double(rng)));
      b /= sum;
      const auto be = eval_basis(s, cell, b);
      CHECK(be.values.col(0).sum() == doctest::Approx(1.0).epsilon(1e-13));
      for (int comp = 0; comp < s.dcomp; ++comp)
        CHECK(std::abs(be.dvalues.col(comp).sum()) < 1e-12);
    }
  }
}

TEST_CASE("derivative proxies agree with finite differences of the values") {
  const auto an = build_square_annulus(4);
  const auto cu = build_unit_cube(1);
  const double h = 1e-6;
  for (const FeSpace& s : {build_space(an, Family::Lagrange, 0, 1),
                           build_space(an, Family::Lagrange, 0, 2),
                           build_space(an, Family::Trimmed, 1, 1),
                           build_space(an, Family::Trimmed, 1, 2),
                           build_space(cu, Family::Lagrange, 0, 1),
                           build_space(cu, Family::Trimmed, 1, 1)}) {
    const int d = s.mesh->dim;
    const Eigen::VectorXd b0 = interior_bary(d);
    for (int cell : {0, s.mesh->count(d) / 2}) {
      const auto g = s.mesh->geometry(cell);
      // value matrices at bary points displaced by +-h along physical axis dir
      auto shifted = [&](int dir, double step) {
        Eigen::VectorXd b = b0;
        for (int a = 0; a <= d; ++a) b[a] += step * g.grad_lambda[a][dir];
        return eval_basis(s, cell, b).values;
      };
      Eigen::MatrixXd diff[3];
      for (int dir = 0; dir < d; ++dir)
        diff[dir] = (shifted(dir, h) - shifted(dir, -h)) / (2.0 * h);

      const auto be = eval_basis(s, cell, b0);
      for (int j = 0; j < s.ndof_cell; ++j) {
        if (s.form_degree == 0) {
          for (int dir = 0; dir < d; ++dir)
            CHECK(be.dvalues(j, dir) == doctest::Approx(diff[dir](j, 0)).epsilon(1e-6).scale(1.0));
        } else if (d == 2) {
          const double rot = diff[0](j, 1) - diff[1](j, 0);
          CHECK(be.dvalues(j, 0) == doctest::Approx(rot).epsilon(1e-6).scale(1.0));
        } else {
          const double cx = diff[1](j, 2) - diff[2](j, 1);
          const double cy = diff[2](j, 0) - diff[0](j, 2);
          const double cz = diff[0](j, 1) - diff[1](j, 0);
          CHECK(be.dvalues(j, 0) == doctest::Approx(cx).epsilon(1e-6).scale(1.0));
          CHECK(be.dvalues(j, 1) == doctest::Approx(cy).epsilon(1e-6).scale(1.0));
          CHECK(be.dvalues(j, 2) == doctest::Approx(cz).epsilon(1e-6).scale(1.0));
        }
      }
    }
  }
}

TEST_CASE("edge-element rot is the signed inverse cell area") {
  // Stokes on one cell: |T| rot w_e equals the counterclockwise boundary
  // circulation of w_e, which is +-1 on the dual edge and 0 elsewhere. For
  // the lex-ordered local edges (01),(02),(12) that gives the pattern
  // (o,-o,o) where o is the geometric orientation of the vertex tuple.
  const auto an = build_square_annulus(4);
  const auto s = build_space(an, Family::Trimmed, 1, 1);
  for (int cell : {0, 7, 23}) {
    const auto g = an.geometry(cell);
    const double cross =
        (g.x[1] - g.x[0]).x() * (g.x[2] - g.x[0]).y() - (g.x[1] - g.x[0]).y() * (g.x[2] - g.x[0]).x();
    const double o = cross > 0 ? 1.0 : -1.0;
    const double sign[3] = {o, -o, o};
    const auto be = eval_basis(s, cell, interior_bary(2));
    for (int j = 0; j < 3; ++j)
      CHECK(be.dvalues(j, 0) == doctest::Approx(sign[j] / g.volume).epsilon(1e-12));
  }
}

TEST_CASE("canonical interpolation reproduces member fields") {
  const auto an = build_square_annulus(4);
  const auto cu = build_unit_cube(1);
  int seed = 1000;
  for (const FeSpace& s : {build_space(an, Family::Lagrange, 0, 1),
                           build_space(an, Family::Lagrange, 0, 2),
                           build_space(an, Family::Trimmed, 1, 1),
                           build_space(an, Family::Trimmed, 1, 2),
                           build_space(cu, Family::Lagrange, 0, 1),
                           build_space(cu, Family::Trimmed, 1, 1)}) {
    const Field f{&s, test::random_vector(s.dof_count, ++seed)};
    const Field back = s.form_degree == 0 ? canonical_interpolate(s, as_scalar_field(f))
                                          : canonical_interpolate(s, as_vector_field(f));
    const double err = (back.coeffs - f.coeffs).lpNorm<Eigen::Infinity>();
    CAPTURE(s.family == Family::Lagrange);
    CAPTURE(s.poly_degree);
    CHECK(err < 1e-10);
  }
}

TEST_CASE("interpolation commutes with the derivative on polynomials") {
  auto check_pair = [](const SimplicialMesh& mesh, int r, const ScalarField& phi,
                       const VectorField& grad_phi) {
    const auto sigma_space = build_space(mesh, Family::Lagrange, 0, r);
    const auto u_space = build_space(mesh, Family::Trimmed, 1, r);
    const auto D = derivative_matrix(sigma_space, u_space);
    const Field ps = canonical_interpolate(sigma_space, phi);
    const Field pu = canonical_interpolate(u_space, grad_phi);
    const Eigen::VectorXd lhs = D * ps.coeffs;
    CHECK((lhs - pu.coeffs).lpNorm<Eigen::Infinity>() < 1e-12);
  };

  const auto an = build_square_annulus(4);
  check_pair(
      an, 1, [](const Point& p) { return 0.3 * p.x() - 1.7 * p.y() + 0.25; },
      [](const Point&) { return Point(0.3, -1.7, 0.0); });
  check_pair(
      an, 2,
      [](const Point& p) {
        return 0.3 * p.x() * p.x() + 0.7 * p.x() * p.y() - 0.4 * p.y() * p.y() + 0.2 * p.x() -
               p.y() + 0.5;
      },
      [](const Point& p) {
        return Point(0.6 * p.x() + 0.7 * p.y() + 0.2, 0.7 * p.x() - 0.8 * p.y() - 1.0, 0.0);
      });
  const auto cu = build_unit_cube(2);
  check_pair(
      cu, 1,
      [](const Point& p) { return 0.2 * p.x() - 0.7 * p.y() + 0.4 * p.z() + 1.0; },
      [](const Point&) { return Point(0.2, -0.7, 0.4); });
}

TEST_CASE("trimmed fields have continuous tangential traces") {
  const auto an = build_square_annulus(4);
  int seed = 5000;
  for (int r : {1, 2}) {
    const auto s = build_space(an, Family::Trimmed, 1, r);
    const Field f{&s, test::random_vector(s.dof_count, ++seed)};
    // adjacency edge -> cells from the per-cell edge lists
    std::vector<std::vector<int>> edge_cells(an.count(1));
    for (int c = 0; c < an.count(2); ++c)
      for (int e = 0; e < 3; ++e) edge_cells[an.cell_edge_list(c)[e]].push_back(c);

    int interior = 0;
    for (int e = 0; e < an.count(1); ++e) {
      if (edge_cells[e].size() != 2) continue;
      ++interior;
      const int* t = an.simplex(1, e);
      const Point xa = an.vertices[t[0]], xb = an.vertices[t[1]];
      const Point tangent = (xb - xa).normalized();
      for (double sp : {0.21, 0.5, 0.83}) {
        const Point x = (1.0 - sp) * xa + sp * xb;
        double trace[2];
        for (int side = 0; side < 2; ++side) {
          const int c = edge_cells[e][side];
          const int* cv = an.simplex(2, c);
          Eigen::VectorXd bary = Eigen::VectorXd::Zero(3);
          for (int a = 0; a < 3; ++a) {
            if (cv[a] == t[0]) bary[a] = 1.0 - sp;
            if (cv[a] == t[1]) bary[a] = sp;
          }
          trace[side] = eval_vector(f, c, bary).dot(tangent);
        }
        CHECK(trace[0] == doctest::Approx(trace[1]).epsilon(1e-11).scale(1.0));
      }
    }
    CHECK(interior > 0);
  }
}

TEST_CASE("basis values are invariant under mesh translation") {
  const auto ref = build_square_annulus(4);
  std::vector<Point> moved = ref.vertices;
  for (auto& p : moved) p += Point(10.0, -7.0, 0.0);
  const auto shifted = mesh_from_cells(2, moved, ref.simplices[2]);

  for (int r : {1, 2}) {
    const auto sa = build_space(ref, Family::Trimmed, 1, r);
    const auto sb = build_space(shifted, Family::Trimmed, 1, r);
    const Eigen::VectorXd b = interior_bary(2);
    for (int cell : {0, 11, 23}) {
      const auto ea = eval_basis(sa, cell, b);
      const auto eb = eval_basis(sb, cell, b);
      CHECK((ea.values - eb.values).lpNorm<Eigen::Infinity>() < 1e-11);
      CHECK((ea.dvalues - eb.dvalues).lpNorm<Eigen::Infinity>() < 1e-11);
    }
  }
}

TEST_CASE("basis evaluation validates its inputs") {
  const auto an = build_square_annulus(4);
  const auto s = build_space(an, Family::Lagrange, 0, 1);
  Eigen::VectorXd good(3);
  good << 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(eval_basis(s, -1, good), InvalidParameterError);
  CHECK_THROWS_AS(eval_basis(s, an.count(2), good), InvalidParameterError);
  Eigen::VectorXd short_bary(2);
  short_bary << 0.5, 0.5;
  CHECK_THROWS_AS(eval_basis(s, 0, short_bary), InvalidParameterError);
  Eigen::VectorXd neg(3);
  neg << -0.2, 0.7, 0.5;
  CHECK_THROWS_AS(eval_basis(s, 0, neg), InvalidParameterError);
  Eigen::VectorXd nosum(3);
  nosum << 0.2, 0.3, 0.4;
  CHECK_THROWS_AS(eval_basis(s, 0, nosum), InvalidParameterError);

  CHECK_THROWS_AS(canonical_interpolate(s, VectorField([](const Point&) { return Point(); })),
                  InvalidParameterError);
  const auto t = build_space(an, Family::Trimmed, 1, 1);
  CHECK_THROWS_AS(canonical_interpolate(t, ScalarField([](const Point&) { return 0.0; })),
                  InvalidParameterError);
}
