#include "feec/quadrature.hpp"

#include <cmath>

namespace feec {

namespace {

// Golub-Welsch nodes/weights for weight (1-t)^alpha on [0,1].
void gauss_jacobi01(int m, int alpha, Eigen::VectorXd& t, Eigen::VectorXd& w) {
  const double a = alpha, b = 0.0;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  J(0, 0) = (b - a) / (a + b + 2.0);
  for (int k = 1; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    J(k, k) = (b * b - a * a) / (s * (s + 2.0));
    const double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
    J(k, k - 1) = J(k - 1, k) = std::sqrt(num / (s * s * (s + 1.0) * (s - 1.0)));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2.0, a + b + 1.0) / (a + b + 1.0);
  t.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    t[i] = 0.5 * (es.eigenvalues()[i] + 1.0);
    const double v0 = es.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0 / std::pow(2.0, a + b + 1.0);
  }
}

}  // namespace

QuadratureRule edge_quadrature(int degree) {
  if (degree < 0) throw InvalidParameterError("quadrature degree must be non-negative");
  const int m = degree / 2 + 1;
  Eigen::VectorXd t, w;
  gauss_jacobi01(m, 0, t, w);
  QuadratureRule r;
  r.dim = 1;
  r.exactness = 2 * m - 1;
  r.bary.resize(m, 2);
  r.weights = w;
  for (int i = 0; i < m; ++i) {
    r.bary(i, 0) = 1.0 - t[i];
    r.bary(i, 1) = t[i];
  }
  return r;
}

QuadratureRule simplex_quadrature(int dim, int degree) {
  if (dim != 2 && dim != 3) throw InvalidParameterError("simplex quadrature needs dim 2 or 3");
  if (degree < 0) throw InvalidParameterError("quadrature degree must be non-negative");
  if (degree > 8)
    throw UnsupportedConfigError("quadrature exactness above degree 8 is not supported");
  const int m = degree / 2 + 1;
  Eigen::VectorXd xi, wxi, eta, weta, zeta, wzeta;
  gauss_jacobi01(m, 0, xi, wxi);
  gauss_jacobi01(m, 1, eta, weta);
  QuadratureRule r;
  r.dim = dim;
  r.exactness = 2 * m - 1;
  if (dim == 2) {
    r.bary.resize(m * m, 3);
    r.weights.resize(m * m);
    int q = 0;
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i, ++q) {
        const double x = xi[i] * (1.0 - eta[j]);
        const double y = eta[j];
        r.bary(q, 0) = 1.0 - x - y;
        r.bary(q, 1) = x;
        r.bary(q, 2) = y;
        r.weights[q] = wxi[i] * weta[j];
      }
  } else {
    gauss_jacobi01(m, 2, zeta, wzeta);
    r.bary.resize(m * m * m, 4);
    r.weights.resize(m * m * m);
    int q = 0;
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i, ++q) {
          const double z = zeta[k];
          const double y = eta[j] * (1.0 - z);
          const double x = xi[i] * (1.0 - eta[j]) * (1.0 - z);
          r.bary(q, 0) = 1.0 - x - y - z;
          r.bary(q, 1) = x;
          r.bary(q, 2) = y;
          r.bary(q, 3) = z;
          r.weights[q] = wxi[i] * weta[j] * wzeta[k];
        }
  }
  return r;
}

}  // namespace feec
