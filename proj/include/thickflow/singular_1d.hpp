#pragma once

#include "thickflow/model_1d.hpp"

namespace thickflow {

struct SingularParams {
  double eps = 1e-2;
  double a = 1.0;
  double gamma = 2.0;
  double cfl = 0.5;
  double newton_tol = 1e-10;
  int newton_max_iter = 200;
  double theta = 0.95;

  void validate() const;
  Model1D model() const;
};

/// eps s / sqrt(1 - s^2); throws ConstraintViolation for |s| >= 1.
double singular_flux(double s, double eps);

State1D step_singular(const State1D& state, const SingularParams& params, double dt);

Trajectory run_singular(const Run1DConfig& config, const SingularParams& params);

}  // namespace thickflow
