#pragma once

#include "feec/hodge.hpp"

#include <functional>

namespace feec {

enum class InitMode { ZeroField, Coefficients, EllipticProjection };

struct TransientConfig {
  double dt = 0.0;
  double t_final = 0.0;
  TimeVectorField f;          // source f(x, t); empty means zero source
  InitMode init = InitMode::ZeroField;
  Eigen::VectorXd u0_coeffs;  // InitMode::Coefficients
  VectorField u0, Lu0;        // InitMode::EllipticProjection data
  const HarmonicBasis* harmonics = nullptr;  // required for elliptic projection init
  int load_quad_degree = -1;  // forwarded to load_vector
};

// Backward Euler on the mixed system:
//   -M_sigma s^n + B^T u^n                = 0
//    B s^n + (M_u/dt + K) u^n             = F(t^n) + M_u u^{n-1}/dt
// The block matrix is factored once; each step costs two sparse mat-vecs and
// one pair of triangular solves. t_final must be an integer multiple of dt.
class TransientStepper {
 public:
  TransientStepper(const MixedOperators& ops, const TransientConfig& cfg);

  // State after construction is (sigma^0 = d* u^0, u^0) at t = 0.
  const Field& u() const { return u_; }
  const Field& sigma() const { return sigma_; }
  double time() const { return t_; }
  int step_index() const { return step_; }
  int step_count() const { return nsteps_; }

  void advance();  // one backward Euler step; throws past t_final
  void run(const std::function<void(const TransientStepper&)>& observer = {});

 private:
  const MixedOperators& ops_;
  TransientConfig cfg_;
  int nsteps_ = 0;
  int step_ = 0;
  double t_ = 0.0;
  Factorization step_fac_;
  Field sigma_, u_;
};

}  // namespace feec
