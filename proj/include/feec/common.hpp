#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <stdexcept>
#include <string>

namespace feec {

// Points are stored 3d; the z component is 0 on 2d meshes. Vector-valued
// (1-form proxy) fields use the same type.
using Point = Eigen::Vector3d;

// Compressed sparse row storage: Eigen's RowMajor compressed format is CSR
// (outerIndexPtr = row offsets, innerIndexPtr = sorted column indices).
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Triplet = Eigen::Triplet<double>;
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;
using TimeScalarField = std::function<double(const Point&, double)>;
using TimeVectorField = std::function<Point(const Point&, double)>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidParameterError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct UnsupportedConfigError : Error {
  using Error::Error;
};
struct SingularMatrixError : Error {
  using Error::Error;
};
struct TopologyMismatchError : Error {
  using Error::Error;
};
struct SolverError : Error {
  using Error::Error;
};

}  // namespace feec
