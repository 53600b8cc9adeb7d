#pragma once

#include <vector>

#include "thickflow/model_1d.hpp"
#include "thickflow/powerlaw_1d.hpp"
#include "thickflow/report.hpp"
#include "thickflow/semistationary_2d.hpp"

namespace thickflow {

// Checks whose bound is additive report the excess over the bound in
// `measured` with bound = 0, so pass means excess <= tol; the bound values
// themselves go to the context.

/// Cauchy stress tau(d_x u) - a rho^gamma on faces; index i holds face i+1/2.
Field1D cauchy_stress(const State1D& state, const Model1D& model);
Field1D cauchy_stress(const State1D& state, const PowerLawParams& params);

/// c1 e^{-2t} / max{1, (a/mu)^{1/gamma} c2}
double density_lower_bound(double t, double c1, double c2, double a, double mu, double gamma);
/// c2 exp[E0/mu + ((2+gamma) E0/mu + 1 + 1/p) t]
double density_upper_bound(double t, double c2, double e0, double mu, double gamma, double p);

/// Two reports: against the initial maximum of sigma and against mu. Both are
/// skipped when p < 1 + gamma; the second also when the initial data is not
/// within the shear bound (|u0_x| <= 1).
std::vector<CheckReport> check_stress_max_principle(const Trajectory& traj, double C = 5.0);

/// Lower and upper density bound reports; c1, c2 default to the extremes of rho0.
std::vector<CheckReport> check_density_bounds(const Trajectory& traj, double c1, double c2, double C = 5.0);
std::vector<CheckReport> check_density_bounds(const Trajectory& traj, double C = 5.0);

/// sup_t (E(t) + D(t) - E0)/E0 against tol.
CheckReport check_energy_inequality(const Trajectory& traj, double tol = 1e-6);
CheckReport check_energy_inequality(const Trajectory2D& traj, double tol = 1e-6);

/// Relative mass drift against 1e-12 and momentum drift, scaled by
/// max(|P0|, M0), against 1e-8. The 2D velocity is not a transported
/// quantity, so only mass is checked there.
std::vector<CheckReport> check_conservation(const Trajectory& traj);
std::vector<CheckReport> check_conservation(const Trajectory2D& traj);

/// max over records of max |u_x|; pass only when strictly below 1.
CheckReport check_barrier(const Trajectory& traj);

/// Y(T) = int_0^T int rho |u_dot|^2 + (mu/2) int |u_x|^p / p at the final record.
double hoff_functional(const Trajectory& traj);

/// max(max v / median, median / min v) against 2: the factor-2 band rule.
CheckReport check_band(const std::string& name, const std::vector<double>& params, const std::vector<double>& values);

/// sup over snapshots of max_x |tau(u_x)|.
double max_viscous_flux(const Trajectory& traj);

/// Relative L2 residual of d_x sigma - rho u_dot with u_dot from snapshot
/// differences, maximized over snapshot intervals.
double stress_balance_residual(const Trajectory& traj);

}  // namespace thickflow
