#include <doctest.h>

#include <cmath>

#include "feec/quadrature.hpp"
#include "test_helpers.hpp"

using namespace feec;

TEST_CASE("simplex rules integrate monomials exactly up to their degree") {
  for (int dim : {2, 3}) {
    const double refmeas = dim == 2 ? 0.5 : 1.0 / 6.0;
    for (int degree = 1; degree <= 8; ++degree) {
      const auto q = simplex_quadrature(dim, degree);
      CHECK(q.dim == dim);
      CHECK(q.exactness >= degree);
      REQUIRE(q.bary.cols() == dim + 1);
      REQUIRE(q.weights.size() == q.bary.rows());

      double wsum = 0.0;
      for (int p = 0; p < q.size(); ++p) {
        CHECK(q.weights[p] > 0.0);
        wsum += q.weights[p];
        double bsum = 0.0;
        for (int a = 0; a <= dim; ++a) {
          CHECK(q.bary(p, a) >= -1e-14);
          CHECK(q.bary(p, a) <= 1.0 + 1e-14);
          bsum += q.bary(p, a);
        }
        CHECK(bsum == doctest::Approx(1.0).epsilon(1e-14));
      }
      CHECK(wsum == doctest::Approx(refmeas).epsilon(1e-14));

      // Reference coordinates are x_a = bary_{a+1}; integrate every monomial
      // x^i y^j (z^k) of total degree <= degree against the factorial formula.
      for (int i = 0; i <= degree; ++i)
        for (int j = 0; i + j <= degree; ++j) {
          const int kmax = dim == 3 ? degree - i - j : 0;
          for (int k = 0; k <= kmax; ++k) {
            double integral = 0.0;
            for (int p = 0; p < q.size(); ++p) {
              double v = std::pow(q.bary(p, 1), i) * std::pow(q.bary(p, 2), j);
              if (dim == 3) v *= std::pow(q.bary(p, 3), k);
              integral += q.weights[p] * v;
            }
            const double exact = test::reference_monomial_integral(dim, i, j, k);
            CHECK(integral == doctest::Approx(exact).epsilon(1e-12));
          }
        }
    }
  }
}

TEST_CASE("lowest-order 2d rule is the single barycenter point") {
  const auto q = simplex_quadrature(2, 1);
  REQUIRE(q.size() == 1);
  CHECK(q.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  for (int a = 0; a < 3; ++a)
    CHECK(q.bary(0, a) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("edge rule integrates powers on the unit interval") {
  for (int degree = 1; degree <= 9; ++degree) {
    const auto q = edge_quadrature(degree);
    CHECK(q.dim == 1);
    for (int k = 0; k <= degree; ++k) {
      double integral = 0.0;
      for (int p = 0; p < q.size(); ++p)
        integral += q.weights[p] * std::pow(q.bary(p, 1), k);
      CHECK(integral == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
    double wsum = 0.0;
    for (int p = 0; p < q.size(); ++p) wsum += q.weights[p];
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("quadrature rejects unsupported requests") {
  CHECK_THROWS_AS(simplex_quadrature(2, 9), UnsupportedConfigError);
  CHECK_THROWS_AS(simplex_quadrature(3, 11), UnsupportedConfigError);
  CHECK_THROWS_AS(simplex_quadrature(1, 2), InvalidParameterError);
  CHECK_THROWS_AS(simplex_quadrature(2, -1), InvalidParameterError);
  CHECK_THROWS_AS(edge_quadrature(-1), InvalidParameterError);
}
