#include "feec/checks.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace feec {

namespace {

double unit_double(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

Eigen::VectorXd random_unit(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = unit_double(rng);
  x /= x.norm();
  return x;
}

double d_entry(const SparseMatrix& D, int row, int col) {
  for (SparseMatrix::InnerIterator it(D, row); it; ++it)
    if (it.col() == col) return it.value();
  return 0.0;
}

struct SpacePair {
  SimplicialMesh mesh;
  FeSpace sigma_space, u_space;
  std::string label;
};

std::vector<SpacePair> test_pairs() {
  std::vector<SpacePair> pairs;
  pairs.reserve(3);
  {
    SpacePair p;
    p.mesh = build_square_annulus(4);
    p.label = "annulus2d n=4 r=1";
    pairs.push_back(std::move(p));
    pairs.back().sigma_space = build_space(pairs.back().mesh, Family::Lagrange, 0, 1);
    pairs.back().u_space = build_space(pairs.back().mesh, Family::Trimmed, 1, 1);
  }
  {
    SpacePair p;
    p.mesh = build_square_annulus(4);
    p.label = "annulus2d n=4 r=2";
    pairs.push_back(std::move(p));
    pairs.back().sigma_space = build_space(pairs.back().mesh, Family::Lagrange, 0, 2);
    pairs.back().u_space = build_space(pairs.back().mesh, Family::Trimmed, 1, 2);
  }
  {
    SpacePair p;
    p.mesh = build_unit_cube(2);
    p.label = "cube3d n=2 r=1";
    pairs.push_back(std::move(p));
    pairs.back().sigma_space = build_space(pairs.back().mesh, Family::Lagrange, 0, 1);
    pairs.back().u_space = build_space(pairs.back().mesh, Family::Trimmed, 1, 1);
  }
  return pairs;
}

PropertyResult check_dd_zero() {
  PropertyResult res{"d_compose_d_zero", true, 0.0, ""};
  for (const SpacePair& p : test_pairs()) {
    const SimplicialMesh& mesh = p.mesh;
    SparseMatrix D = derivative_matrix(p.sigma_space, p.u_space);
    QuadratureRule rule = simplex_quadrature(mesh.dim, 2);
    Eigen::MatrixXd uval, udval;
    for (int c = 0; c < mesh.count(mesh.dim); ++c) {
      CellGeometry geom = mesh.geometry(c);
      const int* udofs = p.u_space.cell_dof_list(c);
      const double* usig = p.u_space.cell_sign_list(c);
      const int* sdofs = p.sigma_space.cell_dof_list(c);
      for (int q = 0; q < rule.size(); ++q) {
        eval_basis_into(p.u_space, c, geom, rule.bary.row(q).data(), uval, udval);
        for (int j = 0; j < p.sigma_space.ndof_cell; ++j) {
          // rot/curl of d(phi_j) restricted to this cell
          for (int dc = 0; dc < p.u_space.dcomp; ++dc) {
            double v = 0.0;
            for (int i = 0; i < p.u_space.ndof_cell; ++i)
              v += usig[i] * d_entry(D, udofs[i], sdofs[j]) * udval(i, dc);
            res.measure = std::max(res.measure, std::abs(v));
          }
        }
      }
    }
  }
  res.pass = res.measure <= 1e-12;
  res.detail = "max |d(d phi)| at quadrature points, tol 1e-12";
  return res;
}

PropertyResult check_spd_psd() {
  PropertyResult res{"mass_spd_stiffness_psd", true, 0.0, ""};
  std::mt19937_64 rng(7001);
  for (const SpacePair& p : test_pairs()) {
    MixedOperators ops = build_mixed_operators(p.sigma_space, p.u_space);
    for (const SparseMatrix* M : {&ops.M_sigma, &ops.M_u}) {
      Eigen::SparseMatrix<double> col = *M;
      Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(col);
      if (llt.info() != Eigen::Success) {
        res.pass = false;
        res.detail = "mass Cholesky failed on " + p.label;
        return res;
      }
    }
    double kinf = 0.0;
    for (Eigen::Index i = 0; i < ops.K.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(ops.K, i); it; ++it)
        kinf = std::max(kinf, std::abs(it.value()));
    double tol = 1e-12 * std::max(1.0, kinf);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd x = random_unit(rng, ops.M_u.rows());
      double quad = x.dot(ops.K * x);
      if (quad < -tol) {
        res.pass = false;
        res.measure = quad;
        res.detail = "negative stiffness quadratic form on " + p.label;
        return res;
      }
      Eigen::VectorXd z = random_unit(rng, ops.M_sigma.rows());
      double kernel = (ops.K * (ops.D * z)).cwiseAbs().maxCoeff() / std::max(1.0, kinf);
      res.measure = std::max(res.measure, kernel);
      if (kernel > 1e-12) {
        res.pass = false;
        res.detail = "gradient not in stiffness kernel on " + p.label;
        return res;
      }
    }
  }
  res.detail = "Cholesky ok; max scaled |K d z|, tol 1e-12";
  return res;
}

PropertyResult check_adjointness() {
  PropertyResult res{"dstar_adjointness", true, 0.0, ""};
  std::mt19937_64 rng(7002);
  for (const SpacePair& p : test_pairs()) {
    MixedOperators ops = build_mixed_operators(p.sigma_space, p.u_space);
    for (int trial = 0; trial < 5; ++trial) {
      Field v{&p.u_space, random_unit(rng, ops.M_u.rows())};
      Eigen::VectorXd tau = random_unit(rng, ops.M_sigma.rows());
      Field s = dstar(ops, v);
      double lhs = s.coeffs.dot(ops.M_sigma * tau);
      double rhs = v.coeffs.dot(ops.M_u * (ops.D * tau));
      double err = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
      res.measure = std::max(res.measure, err);
    }
  }
  res.pass = res.measure <= 1e-12;
  res.detail = "max |<d*v,tau> - <v,d tau>| / (1+|.|), tol 1e-12";
  return res;
}

PropertyResult check_energy_decay() {
  PropertyResult res{"energy_decay", true, 0.0, ""};
  SimplicialMesh mesh = build_square_annulus(8);
  FeSpace sigma_space = build_space(mesh, Family::Lagrange, 0, 1);
  FeSpace u_space = build_space(mesh, Family::Trimmed, 1, 1);
  MixedOperators ops = build_mixed_operators(sigma_space, u_space);

  std::mt19937_64 rng(7003);
  TransientConfig cfg;
  cfg.dt = 0.01;
  cfg.t_final = 0.5;  // 50 steps
  cfg.init = InitMode::Coefficients;
  cfg.u0_coeffs = random_unit(rng, ops.M_u.rows());

  TransientStepper stepper(ops, cfg);
  double prev = m_norm(ops.M_u, stepper.u().coeffs);
  double worst = 0.0;
  stepper.run([&](const TransientStepper& st) {
    double cur = m_norm(ops.M_u, st.u().coeffs);
    worst = std::max(worst, cur / prev - 1.0);
    prev = cur;
  });
  res.measure = worst;
  res.pass = worst <= 1e-13;
  res.detail = "max relative growth of ||u||_M over 50 source-free steps, tol 1e-13";
  return res;
}

PropertyResult check_harmonic_dimensions() {
  PropertyResult res{"harmonic_dimensions", true, 0.0, ""};
  struct CaseSpec {
    SimplicialMesh mesh;
    int expected_b1;
    std::string label;
  };
  std::vector<CaseSpec> cases;
  cases.push_back({build_square_annulus(8), 1, "annulus2d"});
  cases.push_back({build_unit_cube(2), 0, "cube3d"});
  cases.push_back({build_unit_square(4), 0, "square2d"});

  std::ostringstream detail;
  for (const CaseSpec& cs : cases) {
    std::vector<int> betti = betti_numbers(cs.mesh);
    if (betti.at(1) != cs.expected_b1) {
      res.pass = false;
      res.detail = "Betti oracle mismatch on " + cs.label;
      return res;
    }
    FeSpace sigma_space = build_space(cs.mesh, Family::Lagrange, 0, 1);
    FeSpace u_space = build_space(cs.mesh, Family::Trimmed, 1, 1);
    MixedOperators ops = build_mixed_operators(sigma_space, u_space);
    HarmonicBasis basis;
    try {
      basis = harmonic_basis(ops, cs.expected_b1);
    } catch (const TopologyMismatchError& e) {
      res.pass = false;
      res.detail = std::string("harmonic dimension gap test failed: ") + e.what();
      return res;
    }
    for (int j = 0; j < basis.dim(); ++j) {
      Eigen::VectorXd q = basis.Q.col(j);
      double dq = std::sqrt(std::max(0.0, q.dot(ops.K * q)));
      Field qf{&u_space, q};
      double dsq = m_norm(ops.M_sigma, dstar(ops, qf).coeffs);
      res.measure = std::max(res.measure, std::max(dq, dsq));
    }
  }
  if (res.measure > 1e-8) res.pass = false;
  res.detail = "dims match Betti numbers; max harmonic residual, tol 1e-8";
  return res;
}

PropertyResult check_hodge_decomposition() {
  PropertyResult res{"hodge_decomposition", true, 0.0, ""};
  SimplicialMesh mesh = build_square_annulus(8);
  FeSpace sigma_space = build_space(mesh, Family::Lagrange, 0, 1);
  FeSpace u_space = build_space(mesh, Family::Trimmed, 1, 1);
  MixedOperators ops = build_mixed_operators(sigma_space, u_space);
  HarmonicBasis basis = harmonic_basis(ops, 1);

  std::mt19937_64 rng(7004);
  for (int trial = 0; trial < 3; ++trial) {
    Field v{&u_space, random_unit(rng, ops.M_u.rows())};
    HodgeDecomposition parts = hodge_decompose(ops, basis, v);
    double vn = m_norm(ops.M_u, v.coeffs);
    Eigen::VectorXd sum = parts.exact.coeffs + parts.harmonic.coeffs + parts.coexact.coeffs;
    res.measure = std::max(res.measure, m_norm(ops.M_u, v.coeffs - sum) / vn);
    auto mdot = [&](const Field& a, const Field& b) {
      return std::abs(a.coeffs.dot(ops.M_u * b.coeffs)) / (vn * vn);
    };
    res.measure = std::max({res.measure, mdot(parts.exact, parts.harmonic),
                            mdot(parts.exact, parts.coexact), mdot(parts.harmonic, parts.coexact)});

    Field w{&u_space, random_unit(rng, ops.M_u.rows())};
    Field Lv = apply_hodge_laplacian(ops, v);
    Field Lw = apply_hodge_laplacian(ops, w);
    double a = Lv.coeffs.dot(ops.M_u * w.coeffs);
    double b = v.coeffs.dot(ops.M_u * Lw.coeffs);
    res.measure = std::max(res.measure, std::abs(a - b) / (1.0 + std::abs(a)));
  }
  res.pass = res.measure <= 1e-10;
  res.detail = "reassembly, mutual orthogonality, L self-adjointness, tol 1e-10";
  return res;
}

PropertyResult check_elliptic_projection() {
  PropertyResult res{"elliptic_projection", true, 0.0, ""};
  ManufacturedCase mc = case_square2d_steady();
  VectorField u_exact = [&mc](const Point& x) { return mc.u(x, 0.0); };
  VectorField lu_exact = [&mc](const Point& x) { return mc.lu(x, 0.0); };

  std::ostringstream detail;
  for (int r = 1; r <= 2; ++r) {
    std::vector<double> errs;
    for (int level = 0; level < 3; ++level) {
      SimplicialMesh mesh = mc.mesh_at_level(level);
      FeSpace sigma_space = build_space(mesh, Family::Lagrange, 0, r);
      FeSpace u_space = build_space(mesh, Family::Trimmed, 1, r);
      MixedOperators ops = build_mixed_operators(sigma_space, u_space);
      HarmonicBasis basis = harmonic_basis(ops, 0);
      EllipticProjectionResult proj = elliptic_projection(ops, basis, u_exact, lu_exact);

      // defining equations, relative to the load scale
      Eigen::VectorXd Flu = load_vector(u_space, lu_exact);
      double scale = std::max(1.0, Flu.cwiseAbs().maxCoeff());
      Eigen::VectorXd r1 = ops.B.transpose() * proj.u_hat.coeffs - ops.M_sigma * proj.sigma_hat.coeffs;
      Eigen::VectorXd r2 = ops.B * proj.sigma_hat.coeffs + ops.K * proj.u_hat.coeffs - Flu;
      if (basis.dim() > 0) r2 += (ops.M_u * basis.Q) * proj.p_hat;
      double resid = std::max(r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff()) / scale;
      res.measure = std::max(res.measure, resid);
      if (resid > 1e-9) {
        res.pass = false;
        res.detail = "projection residual above 1e-9";
        return res;
      }
      errs.push_back(error_norms(proj.sigma_hat, proj.u_hat, mc, 0.0).err_u);
    }
    for (size_t i = 0; i + 1 < errs.size(); ++i) {
      double rate = std::log2(errs[i] / errs[i + 1]);
      detail << (detail.tellp() > 0 ? " " : "") << "r" << r << "_rate=" << rate;
      if (!(rate >= r - 0.2 && rate <= r + 0.2)) {
        res.pass = false;
        res.measure = rate;
        res.detail = "projection rate off target: " + detail.str();
        return res;
      }
    }
  }
  res.detail = "residuals <= 1e-9; " + detail.str() + " within [r-0.2, r+0.2]";
  return res;
}

}  // namespace

std::vector<PropertyResult> property_suite() {
  std::vector<PropertyResult> out;
  out.push_back(check_dd_zero());
  out.push_back(check_spd_psd());
  out.push_back(check_adjointness());
  out.push_back(check_energy_decay());
  out.push_back(check_harmonic_dimensions());
  out.push_back(check_hodge_decomposition());
  out.push_back(check_elliptic_projection());
  return out;
}

}  // namespace feec
