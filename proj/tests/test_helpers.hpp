#pragma once

// Shared helpers for the unit tests.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <random>
#include <string>

#include "feec/mesh.hpp"

namespace feec::test {

// Deterministic uniform value in [-1, 1).  Uses the raw engine bits so the
// stream is identical across standard library implementations.
inline double unit_double(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

inline Eigen::VectorXd random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = unit_double(rng);
  return v;
}

// Exact integral of the monomial prod_i bary-independent x^alpha over the
// reference simplex {x >= 0, sum x <= 1}:
//   2D: x^i y^j     -> i! j! / (i+j+2)!
//   3D: x^i y^j z^k -> i! j! k! / (i+j+k+3)!
// via the Dirichlet integral formula, evaluated in exact integer arithmetic.
inline double reference_monomial_integral(int dim, int i, int j, int k = 0) {
  auto fact = [](int m) {
    long double f = 1.0L;
    for (int q = 2; q <= m; ++q) f *= q;
    return f;
  };
  long double num = fact(i) * fact(j) * fact(k);
  long double den = fact(i + j + k + dim);
  return static_cast<double>(num / den);
}

// Point inside the simplex, given barycentric coordinates against cell c.
inline Point physical_point(const SimplicialMesh& mesh, int cell,
                            const Eigen::VectorXd& bary) {
  const int* verts = mesh.simplex(mesh.dim, cell);
  Point x = Point::Zero();
  for (int a = 0; a <= mesh.dim; ++a) x += bary[a] * mesh.vertices[verts[a]];
  return x;
}

// Brute-force point location: returns a cell containing x and its barycentric
// coordinates (clamped against rounding at facets), or -1.
inline int locate(const SimplicialMesh& m, const Point& x, Eigen::VectorXd& bary) {
  const int d = m.dim;
  for (int c = 0; c < m.count(d); ++c) {
    const auto g = m.geometry(c);
    Point centroid = Point::Zero();
    for (int a = 0; a <= d; ++a) centroid += g.x[a];
    centroid /= d + 1;
    Eigen::VectorXd b(d + 1);
    bool inside = true;
    for (int a = 0; a <= d; ++a) {
      b[a] = 1.0 / (d + 1) + g.grad_lambda[a].dot(x - centroid);
      if (b[a] < -1e-9) {
        inside = false;
        break;
      }
    }
    if (!inside) continue;
    for (int a = 0; a <= d; ++a) b[a] = std::max(b[a], 0.0);
    b /= b.sum();
    bary = b;
    return c;
  }
  return -1;
}

}  // namespace feec::test
