#include "feec/stepper.hpp"

#include <cmath>
#include <limits>

namespace feec {

namespace {

int checked_step_count(const TransientConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw InvalidParameterError("transient: dt must be positive");
  if (cfg.t_final < 0.0) throw InvalidParameterError("transient: t_final must be nonnegative");
  long long n = std::llround(cfg.t_final / cfg.dt);
  double tol = 8.0 * std::numeric_limits<double>::epsilon() *
               std::max(cfg.t_final, static_cast<double>(n) * cfg.dt);
  if (std::abs(cfg.t_final - static_cast<double>(n) * cfg.dt) > tol)
    throw InvalidParameterError("transient: t_final is not an integer multiple of dt");
  return static_cast<int>(n);
}

SparseMatrix step_matrix(const MixedOperators& ops, double dt) {
  SparseMatrix C = ops.K + (1.0 / dt) * ops.M_u;
  return assemble_saddle(ops.M_sigma, ops.B, C);
}

}  // namespace

TransientStepper::TransientStepper(const MixedOperators& ops, const TransientConfig& cfg)
    : ops_(ops), cfg_(cfg), nsteps_(checked_step_count(cfg)), step_fac_(step_matrix(ops, cfg.dt)) {
  Eigen::VectorXd u0;
  switch (cfg_.init) {
    case InitMode::ZeroField:
      u0 = Eigen::VectorXd::Zero(ops.u_space->dof_count);
      break;
    case InitMode::Coefficients:
      if (cfg_.u0_coeffs.size() != ops.u_space->dof_count)
        throw InvalidParameterError("transient: initial coefficient length mismatch");
      u0 = cfg_.u0_coeffs;
      break;
    case InitMode::EllipticProjection: {
      if (!cfg_.harmonics)
        throw InvalidParameterError("transient: elliptic projection init needs a harmonic basis");
      if (!cfg_.u0 || !cfg_.Lu0)
        throw InvalidParameterError("transient: elliptic projection init needs u0 and Lu0");
      u0 = elliptic_projection(ops, *cfg_.harmonics, cfg_.u0, cfg_.Lu0).u_hat.coeffs;
      break;
    }
  }
  u_ = {ops.u_space, std::move(u0)};
  sigma_ = dstar(ops, u_);
}

void TransientStepper::advance() {
  if (step_ >= nsteps_) throw InvalidParameterError("transient: stepping past t_final");
  ++step_;
  t_ = step_ * cfg_.dt;  // not accumulated, so the final time is exact

  const Eigen::Index ns = ops_.M_sigma.rows();
  const Eigen::Index nu = ops_.M_u.rows();
  Eigen::VectorXd rhs(ns + nu);
  rhs.head(ns).setZero();
  rhs.tail(nu) = (1.0 / cfg_.dt) * (ops_.M_u * u_.coeffs);
  if (cfg_.f) {
    double t = t_;
    rhs.tail(nu) += load_vector(
        *ops_.u_space, [this, t](const Point& x) { return cfg_.f(x, t); }, cfg_.load_quad_degree);
  }
  Eigen::VectorXd sol = step_fac_.solve(rhs);
  sigma_.coeffs = sol.head(ns);
  u_.coeffs = sol.tail(nu);
}

void TransientStepper::run(const std::function<void(const TransientStepper&)>& observer) {
  while (step_ < nsteps_) {
    advance();
    if (observer) observer(*this);
  }
}

}  // namespace feec
