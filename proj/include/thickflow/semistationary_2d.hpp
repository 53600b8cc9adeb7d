#pragma once

#include <vector>

#include "thickflow/fourier.hpp"
#include "thickflow/grid.hpp"
#include "thickflow/report.hpp"

namespace thickflow {

struct SemiStationaryParams {
  double p = 8.0;
  double gamma = 2.0;
  double delta = 1e-8;
  double cfl = 0.25;
  /// Bound on max |grad J| per unit area.
  double newton_tol = 1e-9;
  int newton_max_iter = 200;

  void validate() const;
};

struct State2D {
  Grid2D grid{8, 8};
  Field2D rho;
  VectorField2D u;
  double t = 0.0;
};

/// Strain of a nodal velocity on the periodic P1 triangulation: two triangles
/// per cell, lower (i,j),(i+1,j),(i,j+1) at index 2k and upper
/// (i+1,j+1),(i,j+1),(i+1,j) at 2k+1, k = idx(i,j).
TensorField2D p1_strain(const VectorField2D& u, const Grid2D& g);
/// Frobenius norm (d11^2 + d22^2 + 2 d12^2)^{1/2} per triangle.
Field2D p1_strain_norm(const VectorField2D& u, const Grid2D& g);
/// Mean of rho^gamma over the vertices of each triangle.
Field2D triangle_pressure(const Field2D& rho, const Grid2D& g, double gamma);

/// J(v) = (1/p) int |Dv|_delta^p - int rho^gamma div v on the P1 mesh.
double functional_J(const VectorField2D& v, const Field2D& rho, const Grid2D& g, const SemiStationaryParams& params);
/// Gradient of J with respect to the nodal values.
VectorField2D gradient_J(const VectorField2D& v, const Field2D& rho, const Grid2D& g,
                         const SemiStationaryParams& params);

struct MomentumSolveInfo {
  int iterations = 0;
  double grad_norm = 0.0;
  double J = 0.0;
  std::vector<double> trace;
};

/// Mean-zero minimizer of J. Without a warm start the exponent is raised
/// gradually from 2 to p.
VectorField2D solve_momentum(const Field2D& rho, const Grid2D& g, const SemiStationaryParams& params,
                             const VectorField2D* warm_start = nullptr, MomentumSolveInfo* info = nullptr);

/// Upwind update with face velocities consistent with the P1 divergence.
Field2D transport_density(const Field2D& rho, const VectorField2D& u, double dt, const Grid2D& g);

struct Record2D {
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  /// (1/(gamma-1)) int rho^gamma
  double energy = 0.0;
  double dissipation_cum = 0.0;
  double rho_min = 0.0;
  double rho_max = 0.0;
  double Du_maxnorm = 0.0;
  /// Largest viscous stress magnitude |Du|_delta^{p-1}.
  double sigma_max = 0.0;
  double violation_005 = 0.0;
  int newton_iterations = 0;
};

struct Snapshot2D {
  double t = 0.0;
  Field2D rho;
  VectorField2D u;
};

struct Trajectory2D {
  Grid2D grid{8, 8};
  SemiStationaryParams params;
  std::vector<Snapshot2D> snapshots;
  std::vector<Record2D> records;
};

struct Run2DConfig {
  int n = 64;
  double T = 0.2;
  std::vector<double> snapshot_times;
  FourierSeries2D rho0;
};

Trajectory2D run_2d(const Run2DConfig& config, const SemiStationaryParams& params);

/// Excess of max_x rho(t) / (max_x rho0 e^t) over 1 across the snapshots, tolerance 5(dx + dt).
CheckReport check_linf_growth(const Trajectory2D& traj);

}  // namespace thickflow
