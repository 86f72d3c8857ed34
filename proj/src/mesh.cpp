#include "feec/mesh.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace feec {

namespace {

// Lexicographic comparison of (d+1)-tuples stored flat.
struct TupleLess {
  const int* data;
  int len;
  bool operator()(int a, int b) const {
    const int* pa = data + a * len;
    const int* pb = data + b * len;
    return std::lexicographical_compare(pa, pa + len, pb, pb + len);
  }
};

std::vector<int> sorted_unique_tuples(const std::vector<int>& raw, int len) {
  const int n = static_cast<int>(raw.size()) / len;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  TupleLess less{raw.data(), len};
  std::sort(order.begin(), order.end(), less);
  std::vector<int> out;
  out.reserve(raw.size());
  for (int i = 0; i < n; ++i) {
    const int* t = raw.data() + order[i] * len;
    if (!out.empty() && std::equal(t, t + len, out.end() - len)) continue;
    out.insert(out.end(), t, t + len);
  }
  return out;
}

}  // namespace

CellGeometry SimplicialMesh::geometry(int cell) const {
  CellGeometry g;
  g.nv = dim + 1;
  const int* v = simplex(dim, cell);
  for (int i = 0; i <= dim; ++i) g.x[i] = vertices[v[i]];
  if (dim == 2) {
    Eigen::Matrix2d J;
    J.col(0) = (g.x[1] - g.x[0]).head<2>();
    J.col(1) = (g.x[2] - g.x[0]).head<2>();
    const double det = J.determinant();
    g.volume = std::abs(det) / 2.0;
    Eigen::Matrix2d Jit = J.inverse().transpose();
    g.grad_lambda[1] = Point(Jit(0, 0), Jit(1, 0), 0.0);
    g.grad_lambda[2] = Point(Jit(0, 1), Jit(1, 1), 0.0);
    g.grad_lambda[0] = -g.grad_lambda[1] - g.grad_lambda[2];
  } else {
    Eigen::Matrix3d J;
    for (int i = 0; i < 3; ++i) J.col(i) = g.x[i + 1] - g.x[0];
    const double det = J.determinant();
    g.volume = std::abs(det) / 6.0;
    Eigen::Matrix3d Jit = J.inverse().transpose();
    for (int i = 0; i < 3; ++i) g.grad_lambda[i + 1] = Jit.col(i);
    g.grad_lambda[0] = -g.grad_lambda[1] - g.grad_lambda[2] - g.grad_lambda[3];
  }
  return g;
}

double SimplicialMesh::total_volume() const {
  double s = 0.0;
  for (double v : volumes) s += v;
  return s;
}

int SimplicialMesh::find_simplex(int d, const int* tuple) const {
  const int len = d + 1;
  const int n = count(d);
  const int* base = simplices[d].data();
  int lo = 0, hi = n;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    const int* t = base + mid * len;
    if (std::lexicographical_compare(t, t + len, tuple, tuple + len))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < n && std::equal(base + lo * len, base + lo * len + len, tuple)) return lo;
  return -1;
}

SimplicialMesh mesh_from_cells(int dim, std::vector<Point> vertices, std::vector<int> cells) {
  if (dim != 2 && dim != 3)
    throw InvalidParameterError("mesh dimension must be 2 or 3");
  const int nv = static_cast<int>(vertices.size());
  const int len = dim + 1;
  if (cells.size() % len != 0)
    throw InvalidParameterError("cell list length not a multiple of dim+1");
  const int nc = static_cast<int>(cells.size()) / len;
  if (nc == 0) throw InvalidParameterError("mesh has no cells");

  for (int c = 0; c < nc; ++c) {
    int* t = cells.data() + c * len;
    std::sort(t, t + len);
    for (int i = 0; i < len; ++i) {
      if (t[i] < 0 || t[i] >= nv)
        throw InvalidParameterError("cell " + std::to_string(c) + " references vertex " +
                                    std::to_string(t[i]) + " out of range");
      if (i > 0 && t[i] == t[i - 1])
        throw InvalidParameterError("cell " + std::to_string(c) + " has repeated vertices");
    }
  }

  SimplicialMesh m;
  m.dim = dim;
  m.vertices = std::move(vertices);
  m.simplices[dim] = sorted_unique_tuples(cells, len);
  const int ncells = m.count(dim);

  m.simplices[0].resize(nv);
  for (int i = 0; i < nv; ++i) m.simplices[0][i] = i;

  // Derive intermediate simplices: all (d+1)-subsets of all cells.
  for (int d = dim - 1; d >= 1; --d) {
    std::vector<int> raw;
    raw.reserve(static_cast<size_t>(ncells) * 6);
    std::vector<int> subset(d + 1);
    for (int c = 0; c < ncells; ++c) {
      const int* t = m.simplex(dim, c);
      // enumerate (d+1)-subsets of {0..dim} in lexicographic order
      std::vector<int> idx(d + 1);
      for (int i = 0; i <= d; ++i) idx[i] = i;
      while (true) {
        for (int i = 0; i <= d; ++i) raw.push_back(t[idx[i]]);
        int i = d;
        while (i >= 0 && idx[i] == dim - d + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j <= d; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    m.simplices[d] = sorted_unique_tuples(raw, d + 1);
  }

  // Signed incidence: row s of incidence[d] holds the boundary faces of
  // (d+1)-simplex s with the alternating signs (-1)^i.
  for (int d = 0; d < dim; ++d) {
    const int nhi = m.count(d + 1);
    const int nlo = m.count(d);
    std::vector<Eigen::Triplet<int>> trips;
    trips.reserve(static_cast<size_t>(nhi) * (d + 2));
    std::vector<int> face(d + 1);
    for (int s = 0; s < nhi; ++s) {
      const int* t = m.simplex(d + 1, s);
      for (int drop = 0; drop <= d + 1; ++drop) {
        int k = 0;
        for (int i = 0; i <= d + 1; ++i)
          if (i != drop) face[k++] = t[i];
        int f = m.find_simplex(d, face.data());
        if (f < 0) throw Error("internal: face lookup failed during mesh construction");
        trips.emplace_back(s, f, (drop % 2 == 0) ? 1 : -1);
      }
    }
    m.incidence[d].resize(nhi, nlo);
    m.incidence[d].setFromTriplets(trips.begin(), trips.end());
    m.incidence[d].makeCompressed();
  }

  // Cell -> edge (and face) index tables, local subsets in lexicographic order.
  const int epc = m.edges_per_cell();
  m.cell_edges.resize(static_cast<size_t>(ncells) * epc);
  std::array<std::pair<int, int>, 6> pairs2{{{0, 1}, {0, 2}, {1, 2}}};
  std::array<std::pair<int, int>, 6> pairs3{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  const auto& pairs = (dim == 2) ? pairs2 : pairs3;
  for (int c = 0; c < ncells; ++c) {
    const int* t = m.simplex(dim, c);
    for (int e = 0; e < epc; ++e) {
      int tup[2] = {t[pairs[e].first], t[pairs[e].second]};
      m.cell_edges[c * epc + e] = m.find_simplex(1, tup);
    }
  }
  if (dim == 3) {
    m.cell_faces.resize(static_cast<size_t>(ncells) * 4);
    for (int c = 0; c < ncells; ++c) {
      const int* t = m.simplex(3, c);
      int k = 0;
      // subsets of size 3 in lex order: drop vertex 3,2,1,0 reversed -> enumerate directly
      static const int tri[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
      for (int f = 0; f < 4; ++f) {
        int tup[3] = {t[tri[f][0]], t[tri[f][1]], t[tri[f][2]]};
        m.cell_faces[c * 4 + k++] = m.find_simplex(2, tup);
      }
    }
  }

  // Volumes and degeneracy check.
  m.volumes.resize(ncells);
  for (int c = 0; c < ncells; ++c) {
    m.volumes[c] = m.geometry(c).volume;
    if (!(m.volumes[c] > 0.0))
      throw InvalidParameterError("cell " + std::to_string(c) + " has non-positive volume");
  }

  // Boundary faces: (dim-1)-simplices incident to exactly one cell.
  {
    const int nf = m.count(dim - 1);
    std::vector<int> cnt(nf, 0);
    const IncidenceMatrix& inc = m.incidence[dim - 1];
    for (int s = 0; s < inc.outerSize(); ++s)
      for (IncidenceMatrix::InnerIterator it(inc, s); it; ++it) ++cnt[it.col()];
    for (int f = 0; f < nf; ++f) {
      if (cnt[f] == 1)
        m.boundary_faces.push_back(f);
      else if (cnt[f] != 2)
        throw InvalidParameterError("facet " + std::to_string(f) + " shared by " +
                                    std::to_string(cnt[f]) + " cells");
    }
  }
  return m;
}

SimplicialMesh build_unit_square(int n) {
  if (n < 1) throw InvalidParameterError("unit square resolution must be >= 1");
  std::vector<Point> verts;
  verts.reserve(static_cast<size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.emplace_back(double(i) / n, double(j) / n, 0.0);
  auto vid = [n](int i, int j) { return i + (n + 1) * j; };
  std::vector<int> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i, j + 1), d = vid(i + 1, j + 1);
      cells.insert(cells.end(), {a, b, d});
      cells.insert(cells.end(), {a, c, d});
    }
  SimplicialMesh m = mesh_from_cells(2, std::move(verts), std::move(cells));
  m.provenance = MeshProvenance::UnitSquare;
  m.provenance_n = n;
  return m;
}

SimplicialMesh build_square_annulus(int n) {
  if (n < 4 || n % 4 != 0)
    throw InvalidParameterError("annulus resolution must be a positive multiple of 4");
  std::vector<Point> verts;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.emplace_back(double(i) / n, double(j) / n, 0.0);
  auto vid = [n](int i, int j) { return i + (n + 1) * j; };
  const int lo = n / 4, hi = 3 * n / 4;
  std::vector<int> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (i >= lo && i < hi && j >= lo && j < hi) continue;  // hole
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i, j + 1), d = vid(i + 1, j + 1);
      cells.insert(cells.end(), {a, b, d});
      cells.insert(cells.end(), {a, c, d});
    }
  // Drop vertices interior to the hole, preserving order.
  std::vector<int> remap(verts.size(), -1);
  for (int v : cells) remap[v] = 0;
  std::vector<Point> kept;
  int next = 0;
  for (size_t v = 0; v < verts.size(); ++v)
    if (remap[v] == 0) {
      remap[v] = next++;
      kept.push_back(verts[v]);
    }
  for (int& v : cells) v = remap[v];
  SimplicialMesh m = mesh_from_cells(2, std::move(kept), std::move(cells));
  m.provenance = MeshProvenance::SquareAnnulus;
  m.provenance_n = n;
  return m;
}

SimplicialMesh build_unit_cube(int n) {
  if (n < 1) throw InvalidParameterError("unit cube resolution must be >= 1");
  std::vector<Point> verts;
  verts.reserve(static_cast<size_t>(n + 1) * (n + 1) * (n + 1));
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        verts.emplace_back(double(i) / n, double(j) / n, double(k) / n);
  auto vid = [n](int i, int j, int k) { return i + (n + 1) * (j + (n + 1) * k); };
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  std::vector<int> cells;
  cells.reserve(static_cast<size_t>(n) * n * n * 24);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : perms) {
          int c[3] = {i, j, k};
          cells.push_back(vid(c[0], c[1], c[2]));
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            cells.push_back(vid(c[0], c[1], c[2]));
          }
        }
  SimplicialMesh m = mesh_from_cells(3, std::move(verts), std::move(cells));
  m.provenance = MeshProvenance::UnitCube;
  m.provenance_n = n;
  return m;
}

SimplicialMesh refine_uniform(const SimplicialMesh& m) {
  if (m.dim == 3) {
    if (m.provenance != MeshProvenance::UnitCube)
      throw UnsupportedConfigError(
          "3d uniform refinement is supported for generated unit-cube meshes only");
    return build_unit_cube(2 * m.provenance_n);
  }
  const int nv = m.count(0);
  const int ne = m.count(1);
  std::vector<Point> verts = m.vertices;
  verts.resize(nv + ne);
  for (int e = 0; e < ne; ++e) {
    const int* t = m.simplex(1, e);
    verts[nv + e] = 0.5 * (m.vertices[t[0]] + m.vertices[t[1]]);
  }
  std::vector<int> cells;
  cells.reserve(static_cast<size_t>(m.count(2)) * 12);
  for (int c = 0; c < m.count(2); ++c) {
    const int* t = m.simplex(2, c);
    const int* e = m.cell_edge_list(c);
    const int m01 = nv + e[0], m02 = nv + e[1], m12 = nv + e[2];
    cells.insert(cells.end(), {t[0], m01, m02});
    cells.insert(cells.end(), {t[1], m01, m12});
    cells.insert(cells.end(), {t[2], m02, m12});
    cells.insert(cells.end(), {m01, m02, m12});
  }
  return mesh_from_cells(2, std::move(verts), std::move(cells));
}

std::vector<int> betti_numbers(const SimplicialMesh& m) {
  // Ranks over GF(2); exact for the torsion-free complexes in scope.
  auto gf2_rank = [](const IncidenceMatrix& A) {
    const int rows = static_cast<int>(A.rows());
    const int cols = static_cast<int>(A.cols());
    const int words = (cols + 63) / 64;
    std::vector<std::vector<uint64_t>> reduced;
    std::vector<int> owner(cols, -1);
    std::vector<uint64_t> cur(words);
    int rank = 0;
    for (int r = 0; r < rows; ++r) {
      std::fill(cur.begin(), cur.end(), 0);
      for (IncidenceMatrix::InnerIterator it(A, r); it; ++it)
        cur[it.col() >> 6] ^= (uint64_t(1) << (it.col() & 63));
      while (true) {
        int pivot = -1;
        for (int w = 0; w < words; ++w)
          if (cur[w]) {
            pivot = (w << 6) + __builtin_ctzll(cur[w]);
            break;
          }
        if (pivot < 0) break;
        if (owner[pivot] < 0) {
          owner[pivot] = static_cast<int>(reduced.size());
          reduced.push_back(cur);
          ++rank;
          break;
        }
        const auto& other = reduced[owner[pivot]];
        for (int w = 0; w < words; ++w) cur[w] ^= other[w];
      }
    }
    return rank;
  };
  std::vector<int> rank(m.dim, 0);
  for (int d = 0; d < m.dim; ++d) rank[d] = gf2_rank(m.incidence[d]);
  std::vector<int> b(m.dim + 1, 0);
  for (int d = 0; d <= m.dim; ++d) {
    int r_d = (d < m.dim) ? rank[d] : 0;
    int r_dm1 = (d > 0) ? rank[d - 1] : 0;
    b[d] = m.count(d) - r_d - r_dm1;
  }
  return b;
}

SimplicialMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file: " + path);
  int dim = 0;
  std::vector<Point> verts;
  std::vector<int> cells;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "dim") {
      if (dim != 0) fail("duplicate dim line");
      if (!(ls >> dim) || (dim != 2 && dim != 3)) fail("dim must be 2 or 3");
    } else if (tag == "v") {
      if (dim == 0) fail("vertex before dim line");
      double x = 0, y = 0, z = 0;
      if (!(ls >> x >> y)) fail("malformed vertex line");
      if (dim == 3 && !(ls >> z)) fail("malformed vertex line");
      std::string extra;
      if (ls >> extra) fail("trailing tokens on vertex line");
      verts.emplace_back(x, y, z);
    } else if (tag == "c") {
      if (dim == 0) fail("cell before dim line");
      for (int i = 0; i <= dim; ++i) {
        long long v = 0;
        if (!(ls >> v)) fail("malformed cell line");
        if (v < 0 || v >= static_cast<long long>(verts.size()))
          fail("cell vertex index " + std::to_string(v) + " out of range");
        cells.push_back(static_cast<int>(v));
      }
      std::string extra;
      if (ls >> extra) fail("trailing tokens on cell line");
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (dim == 0) throw ParseError(path + ": missing dim line");
  if (cells.empty()) throw ParseError(path + ": mesh has no cells");
  try {
    return mesh_from_cells(dim, std::move(verts), std::move(cells));
  } catch (const InvalidParameterError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_mesh(const SimplicialMesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  char buf[80];
  out << "dim " << m.dim << "\n";
  for (const Point& p : m.vertices) {
    if (m.dim == 2)
      std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", p.x(), p.y());
    else
      std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  for (int c = 0; c < m.count(m.dim); ++c) {
    const int* t = m.simplex(m.dim, c);
    out << "c";
    for (int i = 0; i <= m.dim; ++i) out << ' ' << t[i];
    out << "\n";
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace feec
