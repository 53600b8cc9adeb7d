#pragma once

#include <vector>

#include "thickflow/fourier.hpp"
#include "thickflow/model_1d.hpp"
#include "thickflow/report.hpp"
#include "thickflow/semistationary_2d.hpp"

namespace thickflow {

// Weak residuals integrate in time with 3-point Gauss rules on each snapshot
// interval, fields interpolated linearly between snapshots; in space with the
// midpoint rule.

/// |int int rho phi_t + rho u phi_x|
double continuity_residual(const Trajectory& traj, const TestFunction& phi);
double continuity_residual(const Trajectory2D& traj, const TestFunction& phi);

/// |int int rho^g phi_t + rho^g u phi_x - (g-1) rho^g (d_x u) phi|
double renormalized_residual(const Trajectory& traj, double gamma, const TestFunction& phi);
double renormalized_residual(const Trajectory2D& traj, double gamma, const TestFunction& phi);

/// m(s) = |(1/s) int_0^s int (rho^g - rho0^g)| for each s, int rho^g
/// interpolated linearly between snapshots.
std::vector<double> time_mean_profile(const std::vector<double>& times, const std::vector<double>& int_rho_gamma,
                                      const std::vector<double>& s_list);
std::vector<double> time_mean_profile(const Trajectory& traj, double gamma, const std::vector<double>& s_list);
std::vector<double> time_mean_profile(const Trajectory2D& traj, double gamma, const std::vector<double>& s_list);

/// s_list decreasing. Pass when each m(s_{k+1}) <= 1.2 m(s_k) and m(s_min) <= m(s_max);
/// measured is the largest m(s_{k+1})/m(s_k) - 1.
CheckReport time_mean_continuity(const std::vector<double>& s_list, const std::vector<double>& m);
CheckReport time_mean_continuity(const Trajectory& traj, double gamma, const std::vector<double>& s_list);
CheckReport time_mean_continuity(const Trajectory2D& traj, double gamma, const std::vector<double>& s_list);

/// Linear decay: for s_list halving at each entry, every m(s_{k+1})/m(s_k)
/// within `rel` of 1/2. Measured is the largest |ratio - 1/2| / (1/2).
CheckReport time_mean_linearity(const std::vector<double>& s_list, const std::vector<double>& m, double rel = 0.3);

}  // namespace thickflow
