#pragma once

#include "feec/common.hpp"

#include <array>
#include <vector>

namespace feec {

using IncidenceMatrix = Eigen::SparseMatrix<int, Eigen::RowMajor>;

// Per-cell affine geometry. Barycentric coordinate i is affine in x with
// gradient grad_lambda[i]; volume is the unsigned simplex measure.
struct CellGeometry {
  int nv = 0;
  std::array<Point, 4> x;
  std::array<Point, 4> grad_lambda;
  double volume = 0.0;
};

enum class MeshProvenance { None, UnitSquare, SquareAnnulus, UnitCube };

// Simplicial complex in R^2 or R^3. Simplices of every dimension are stored
// as ascending global vertex tuples, listed in lexicographic order; all
// orientation bookkeeping derives from that single convention.
struct SimplicialMesh {
  int dim = 0;
  std::vector<Point> vertices;
  std::array<std::vector<int>, 4> simplices;  // simplices[d]: flattened (d+1)-tuples
  std::array<IncidenceMatrix, 3> incidence;   // incidence[d]: N_{d+1} x N_d, signed
  std::vector<int> boundary_faces;            // (dim-1)-simplices on exactly one cell
  std::vector<int> cell_edges;                // cells x edges-per-cell, local lex order
  std::vector<int> cell_faces;                // 3d: cells x 4, local lex order
  std::vector<double> volumes;                // top cells

  MeshProvenance provenance = MeshProvenance::None;
  int provenance_n = 0;

  int count(int d) const {
    return (d < 0 || d > dim) ? 0 : static_cast<int>(simplices[d].size()) / (d + 1);
  }
  const int* simplex(int d, int i) const { return simplices[d].data() + i * (d + 1); }
  int edges_per_cell() const { return dim == 2 ? 3 : 6; }
  const int* cell_edge_list(int cell) const { return cell_edges.data() + cell * edges_per_cell(); }
  const int* cell_face_list(int cell) const { return cell_faces.data() + cell * 4; }

  CellGeometry geometry(int cell) const;
  double total_volume() const;
  // Index of the d-simplex with the given ascending vertex tuple, or -1.
  int find_simplex(int d, const int* tuple) const;
};

// Core constructor: takes top-dimensional cells (flattened, dim+1 indices each,
// any vertex order), canonicalizes, and derives all lower simplices, incidence
// matrices and adjacency tables.
SimplicialMesh mesh_from_cells(int dim, std::vector<Point> vertices, std::vector<int> cells);

SimplicialMesh build_unit_square(int n);
SimplicialMesh build_square_annulus(int n);  // unit square minus [1/4,3/4]^2, n % 4 == 0
SimplicialMesh build_unit_cube(int n);       // Kuhn subdivision, 6 tets per subcube

// 2d: midpoint fourfold split. 3d: supported for generated unit-cube meshes,
// which are regenerated at doubled resolution.
SimplicialMesh refine_uniform(const SimplicialMesh& m);

SimplicialMesh read_mesh(const std::string& path);
void write_mesh(const SimplicialMesh& m, const std::string& path);

// Betti numbers b_0..b_dim from ranks of the incidence matrices.
std::vector<int> betti_numbers(const SimplicialMesh& m);

}  // namespace feec
