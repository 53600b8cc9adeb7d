#pragma once

#include "thickflow/model_1d.hpp"

namespace thickflow {

struct PowerLawParams {
  double p = 8.0;
  double mu = 1.0;
  double a = 1.0;
  double gamma = 2.0;
  double delta = 1e-8;
  double cfl = 0.5;
  double newton_tol = 1e-10;
  int newton_max_iter = 200;

  /// Throws std::invalid_argument on p < 2, gamma <= 1, mu <= 0, a <= 0 or
  /// delta = 0 with p > 2.
  void validate() const;
  bool max_principle_hypothesis() const { return p >= 1.0 + gamma; }
  Model1D model() const;
};

double viscous_flux(double s, const PowerLawParams& params);

/// Requires dt within the CFL limit of the state.
State1D step(const State1D& state, const PowerLawParams& params, double dt);

/// Returns u with rho (u - u_prev)/dt - d_x tau(d_x u) = rhs.
Field1D implicit_viscous_solve(const Field1D& u_prev, const Field1D& rho, double dt, const PowerLawParams& params,
                               const Grid1D& g, const Field1D* rhs = nullptr, NewtonTrace* trace = nullptr);

Trajectory run(const Run1DConfig& config, const PowerLawParams& params);

}  // namespace thickflow
