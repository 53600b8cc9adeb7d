#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thickflow/fourier.hpp"
#include "thickflow/model_1d.hpp"
#include "thickflow/report.hpp"
#include "thickflow/semistationary_2d.hpp"

namespace thickflow {

/// Fraction of values strictly above 1 + eta.
double violation_fraction(const std::vector<double>& shear_abs, double eta);
/// Fraction of faces with |u_x| > 1 + eta.
double constraint_violation_measure(const Field1D& u, const Grid1D& g, double eta);
/// Fraction of triangles with |Du| > 1 + eta.
double constraint_violation_measure(const VectorField2D& u, const Grid2D& g, double eta);

struct Multiplier {
  Field1D pi;
  double residual = 0.0;
};

/// pi = |tau| and int pi max(0, 1 - |u_x|) dx, with shear and tau given per face.
Multiplier lagrange_multiplier(const Field1D& shear, const Field1D& tau, const Grid1D& g);
Multiplier lagrange_multiplier(const Field1D& u, const Grid1D& g, const ViscousLaw& law);

/// int [r1^g - r2^g - g r2^{g-1} (r1 - r2)] with cell measure `cell`.
double entropy_gap(const std::vector<double>& rho_coarse, const std::vector<double>& rho_ref, double gamma,
                   double cell);

/// Space-time L2 distance of u and L^gamma distance of rho over shared snapshot times.
double u_distance(const Trajectory& a, const Trajectory& b);
double rho_distance(const Trajectory& a, const Trajectory& b, double gamma);
double u_distance(const Trajectory2D& a, const Trajectory2D& b);
/// Time mean of the entropy gap between matching snapshots.
double entropy_gap_mean(const Trajectory& coarse, const Trajectory& ref);
double entropy_gap_mean(const Trajectory2D& coarse, const Trajectory2D& ref);

/// Bank rescaled so that the largest discrete shear over the snapshots is 0.99.
std::vector<SpaceTimeField1D> admissible_bank_1d(std::uint64_t seed, int count, const Trajectory& traj);
std::vector<SpaceTimeField2D> admissible_bank_2d(std::uint64_t seed, int count, const Trajectory2D& traj);

/// Per test field: int_0^T int tau(u_x)(u_x - v_x), equal by the momentum
/// equation to int int rho u_dot (v-u) - a rho^gamma d_x(v-u). Reports
/// -min/E0 against 1e-3 by default.
CheckReport variational_residual(const Trajectory& traj, const std::vector<SpaceTimeField1D>& bank,
                                 double tol = 1e-3);
/// Per test field: int_0^T [J(v) - J(u)] dt, the finite-p variational inequality.
CheckReport variational_residual(const Trajectory2D& traj, const std::vector<SpaceTimeField2D>& bank,
                                 double tol = 1e-3);

struct SweepEntry {
  double param = 0.0;
  bool ok = false;
  std::string error;
  double u_dist = 0.0;
  double rho_dist = 0.0;
  double viol_001 = 0.0;
  double viol_005 = 0.0;
  double viol_01 = 0.0;
  double compl_resid = 0.0;
  double entropy_gap = 0.0;
  double hoff_Y = 0.0;
  double max_tau = 0.0;
};

struct SweepPair {
  double from = 0.0;
  double to = 0.0;
  double u_dist = 0.0;
  double rho_dist = 0.0;
  double entropy_gap = 0.0;
};

struct SweepReport {
  std::string mode;
  std::vector<double> param_values;
  std::vector<SweepEntry> entries;
  /// Consecutive pairs ordered towards the finest parameter.
  std::vector<SweepPair> pairwise;
  std::optional<double> cross_model_distance;

  nlohmann::json to_json() const;
  /// param,u_dist,rho_dist,viol_001,viol_005,viol_01,compl_resid,entropy_gap
  std::string to_csv() const;
};

enum class SweepMode { p, eps };

/// Metrics of a set of runs ordered from coarsest to finest parameter
/// (p ascending or eps descending). Failed runs are passed as nullopt.
SweepReport assemble_sweep(SweepMode mode, const std::vector<double>& values,
                           const std::vector<std::optional<Trajectory>>& runs,
                           const std::vector<std::string>& errors = {});

/// Executes the runs (up to `jobs` concurrently) and assembles the report.
/// `base` supplies a, gamma, cfl and the Newton settings; mu and delta for the
/// power law, theta for the singular law.
SweepReport run_sweep(const Run1DConfig& config, const Model1D& base, SweepMode mode, std::vector<double> values,
                      int jobs = 1, std::vector<std::optional<Trajectory>>* runs_out = nullptr);

/// 2D p-sweep: violation fractions on triangles, distances and entropy gaps
/// against the finest run. compl_resid, hoff_Y and rho_dist are left at 0.
SweepReport assemble_sweep(const std::vector<double>& p_values, const std::vector<std::optional<Trajectory2D>>& runs,
                           const std::vector<std::string>& errors = {});
SweepReport run_sweep_2d(const Run2DConfig& config, const SemiStationaryParams& base, std::vector<double> p_values,
                         int jobs = 1, std::vector<std::optional<Trajectory2D>>* runs_out = nullptr);

/// Sweep-level checks on a report ordered towards the finest parameter:
/// finest viol_005 below `viol_limit`; for 1D p-sweeps also strict decrease
/// of viol_005, complementarity (monotone, >= 5x drop end to end) and
/// the Hoff band; entropy gaps of consecutive pairs decreasing.
std::vector<CheckReport> check_sweep(const SweepReport& rep, double viol_limit);
/// Cross-model distance against C times the finest consecutive u gap of the p-sweep.
CheckReport check_cross_model(const SweepReport& p_sweep, double distance, double C = 5.0);

/// Cross-model distance between the finest runs of a p-sweep and an eps-sweep.
double cross_model_distance(const Trajectory& p_finest, const Trajectory& eps_finest);

}  // namespace thickflow
